#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "betanorm/base.hpp"
#include "betanorm/field.hpp"
#include "betanorm/words.hpp"

namespace betanorm {

/// f in Fin(beta) cap (0, delta) with y + f in Fin(beta).
struct KillerCertificate {
    FieldElement y;
    Rational delta;
    DigitWord f;         // greedy expansion of the killer, zeros included
    PeriodicWord proof;  // greedy expansion of y + value(f); finite
};

/// Breadth-first over admissible words 0^s g (s the least with beta^-s <= delta,
/// g ending in a nonzero digit), by length and then lexicographically, up to
/// max_len digits. nullopt means the search ran out, not that none exists.
/// Throws InvalidArgument unless y is in Z[beta] cap [0, 1) and delta > 0.
std::optional<KillerCertificate> find_period_killer(const PisotBase& base, const FieldElement& y,
                                                    const Rational& delta, std::size_t max_len);

/// Independent recheck: 0 < value(f) < delta, y + value(f) < 1, f admissible
/// and greedy_expand(y + value(f)) finite and equal to proof.
bool verify(const PisotBase& base, const KillerCertificate& cert);

enum class WfStatus { ProvenForAttractor, Inconclusive };
const char* to_string(WfStatus s) noexcept;

struct PeriodKiller {
    DigitWord period;  // attractor cycle of Z[beta]
    std::optional<KillerCertificate> killer;
};

struct WfBounds {
    std::size_t max_killer_len = 30;
    std::size_t k_max_len = 12;  // word length for the L1 estimate
    std::uint64_t seed = 1;
};

struct WfReport {
    std::vector<PeriodKiller> killers;
    int L1 = 1;
    int L2 = 0;
    /// Longest cycle of the greedy map on Z[beta] and on the normalization
    /// lattice (1/q) Z[beta]; p is the larger and enters L.
    int p_integer = 0;
    int p_normalization = 0;
    int p = 0;
    int L = 1;
    WfStatus status = WfStatus::Inconclusive;
};

WfReport wf_check(const PisotBase& base, const WfBounds& bounds = {});

/// Shortest (then lexicographically first) d-ary word s with |s| <= max_len
/// such that prefix s has a finite normalization.
std::optional<DigitWord> complete_to_finite(const PisotBase& base, const DigitWord& prefix, std::size_t max_len);

struct GammaRow {
    std::size_t n = 0;
    double observed = 1;  // fraction of samples with no finite prefix of length <= n
    double bound = 1;     // gamma^n, gamma = (1 - d^-L)^(1/(2L))
    double sigma = 0;     // binomial standard error of `observed`
};

/// Monte Carlo over i.i.d. uniform words of length n_max. Rows n = 0 ... n_max.
/// Chunks of samples use their own substream, so results do not depend on
/// `threads`.
std::vector<GammaRow> gamma_experiment(const PisotBase& base, int L, std::size_t n_max, std::size_t samples,
                                       std::uint64_t seed, unsigned threads = 1);

}  // namespace betanorm
