#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "betanorm/base.hpp"
#include "betanorm/detail/lattice.hpp"
#include "betanorm/rng.hpp"
#include "betanorm/words.hpp"

namespace betanorm {

/// c * sum x_k beta^-k, the value a d-ary word is normalized to.
FieldElement scaled_value(const PisotBase& base, std::span<const int> x);

struct NormalizedWord {
    PeriodicWord word;
    std::size_t source_length = 0;

    bool finite() const noexcept { return word.is_finite(); }
    /// Digits of a finite normalization padded with zeros to n (n >= length).
    DigitWord padded(std::size_t n) const;
};

/// The admissible expansion of c * sum x_k beta^-k. Throws DigitOutOfRange.
NormalizedWord normalize_finite(const PisotBase& base, std::span<const int> x);

/// Prefix / attractor period split of a normalization.
struct Shape {
    DigitWord prefix;
    DigitWord period;
};

/// Throws PeriodNotInAttractor if the tail period is not a known attractor cycle.
Shape shape(const PisotBase& base, const NormalizedWord& nw);

/// Empirical lower bound on the maximal overhang (finite normalization length
/// minus input length).
struct KEstimate {
    int K = 1;              // max(1, observed): the value used for block splitting
    int observed = 0;       // largest overhang seen
    std::size_t exhaustive_length = 0;
    std::size_t sampled = 0;
};

KEstimate estimate_K(const PisotBase& base, std::size_t max_len, std::uint64_t seed = 1,
                     std::size_t samples = 20000);

/// Normalizes the prefixes of a growing word without recomputing from scratch.
/// Uses fixed-width lattice arithmetic when beta is a unit and falls back to
/// exact field arithmetic on overflow.
class PrefixNormalizer {
public:
    explicit PrefixNormalizer(const PisotBase& base, std::size_t max_states = 100000);

    void reset();
    void push(int digit);
    void pop();
    std::size_t size() const noexcept { return n_; }

    /// Whether the normalization of the current prefix is finite.
    bool finite();
    /// The finite normalization of the current prefix, if it is finite.
    std::optional<DigitWord> finite_digits();
    /// Full normalization of the current prefix.
    PeriodicWord normalization();

private:
    const detail::LatticePoint* term(std::size_t k);
    const PeriodicWord& orbit();

    const PisotBase& base_;
    std::size_t max_states_;
    bool fast_;
    detail::i128 den_ = 1;
    std::vector<detail::LatticePoint> terms_;  // c * beta^-k on the common denominator
    FieldElement next_term_;
    bool terms_ok_ = true;
    detail::LatticePoint acc_;
    std::size_t overflowed_at_ = 0;  // prefix length at which acc_ stopped being exact (0: never)
    std::vector<int> digits_;
    std::size_t n_ = 0;
    std::optional<PeriodicWord> cached_;
};

// ---------------------------------------------------------------------------
// Digit streams

class DigitSource {
public:
    virtual ~DigitSource() = default;
    /// Next digit, or nullopt once the source is exhausted.
    virtual std::optional<int> next() = 0;
};

class SpanSource final : public DigitSource {
public:
    explicit SpanSource(std::span<const int> digits) : digits_(digits) {}
    std::optional<int> next() override {
        if (pos_ == digits_.size()) return std::nullopt;
        return digits_[pos_++];
    }

private:
    std::span<const int> digits_;
    std::size_t pos_ = 0;
};

/// I.i.d. uniform digits over {0, ..., d-1}.
class RandomSource final : public DigitSource {
public:
    RandomSource(int d, std::uint64_t seed, std::uint64_t substream = 0) : d_(d), rng_(seed, substream) {}
    std::optional<int> next() override { return static_cast<int>(rng_.below(static_cast<std::uint32_t>(d_))); }

private:
    int d_;
    Philox rng_;
};

struct BlockDecomposition {
    std::vector<std::size_t> cuts{0};  // n_0 = 0 < n_1 < ...
    std::vector<DigitWord> blocks;
    std::vector<DigitWord> normalized;  // each as long as its block
    /// Digits read from the source but not yet part of a block.
    DigitWord pending;

    std::size_t consumed() const noexcept { return cuts.back(); }
    DigitWord normalized_concat() const;
};

/// Splits a stream at the smallest n with a finite normalization of the
/// current block prefix followed by 0^(2K); the block keeps K of the zeros.
/// Stops after max_blocks blocks or when the source runs dry. Throws
/// BudgetExceeded when `budget` digits pass without completing a block.
BlockDecomposition block_split(const PisotBase& base, DigitSource& source, int K, std::size_t budget,
                               std::size_t max_blocks = static_cast<std::size_t>(-1));

/// Two-sided window x_{first} ... x_{first + size - 1}, with first = 1 - left.
struct Window {
    DigitWord digits;
    std::size_t left = 0;  // number of coordinates with index <= 0

    long first_index() const noexcept { return 1 - static_cast<long>(left); }
    long last_index() const noexcept { return first_index() + static_cast<long>(digits.size()) - 1; }
    int at(long i) const { return digits[static_cast<std::size_t>(i - first_index())]; }
};

struct TwoSidedNormalization {
    long first_index = 1;
    DigitWord digits;          // normalized coordinates first_index ... first_index + size - 1
    std::vector<long> cuts;    // absolute block boundaries: a block ends at each cut
    long stable_begin = 1;     // coordinates in [stable_begin, stable_end] are final
    long stable_end = 0;

    int at(long i) const { return digits[static_cast<std::size_t>(i - first_index)]; }
    /// rho_beta: coordinates 1 ... stable_end.
    DigitWord positive_part() const;
};

/// Blockwise normalization of a two-sided window read left to right.
/// Throws WindowTooShort if no block ends at or before index 0.
TwoSidedNormalization two_sided_normalize(const PisotBase& base, const Window& x, int K,
                                          std::size_t budget = 1 << 20);

/// Finite-coordinate maps C, C' relating the one- and two-sided normalizations.
struct CoordinateMaps {
    Window c;          // C(x)
    /// C'(x). Absent when the carry out of A_0 is not c times an element of
    /// Z[beta]: then no finite change of x_1 x_2 ... reaches P(x).
    std::optional<Window> c_prime;
    long a = 0;        // straddling block covers -a ... b
    long b = 0;
    long b_prime = 0;  // C' rewrites coordinates 1 ... b_prime (a cut >= b)
    long checked_end = 0;  // both identities verified on coordinates 1 ... checked_end
    bool p_of_c_equals_q = false;
    bool q_of_c_prime_equals_p = false;
};

/// Throws NoStraddlingBlock, WindowTooShort.
CoordinateMaps coordinate_maps(const PisotBase& base, const Window& x, int K);

/// A d-ary word u of length n with normalize_finite(u) == target (padded).
std::optional<DigitWord> preimage_word(const PisotBase& base, const DigitWord& target, std::size_t n);

}  // namespace betanorm
