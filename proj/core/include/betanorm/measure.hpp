#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "betanorm/base.hpp"
#include "betanorm/field.hpp"

namespace betanorm {

/// Floating-point view of (beta, d) for sampling. `lebesgue` is the test-only
/// beta = d = 2 case, where the Erdos measure is Lebesgue measure.
struct RealBase {
    long double beta = 2;
    int d = 2;
    bool lebesgue = false;

    long double c() const noexcept { return (beta - 1) / static_cast<long double>(d - 1); }
    /// x -> beta x mod 1.
    long double shift(long double x) const noexcept;

    static RealBase of(const PisotBase& base) noexcept { return {base.beta_approx(), base.d(), false}; }
    static RealBase lebesgue_sanity() noexcept { return {2, 2, true}; }
};

/// Counts over 2^bits equal cells of [0, 1).
struct EmpiricalMeasure {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    std::uint64_t seed = 0;
    int N = 0;
    std::string estimator;

    EmpiricalMeasure() = default;
    explicit EmpiricalMeasure(int bits);

    int bits() const noexcept;
    std::size_t bins() const noexcept { return counts.size(); }
    void add(long double x);
    void merge(const EmpiricalMeasure& o);
    /// Sums adjacent cells down to 2^bits cells.
    EmpiricalMeasure coarsen(int bits) const;
    std::vector<double> probabilities() const;
};

/// Total variation distance of two histograms with the same cell count.
double total_variation(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// Least N with beta^-N < width / 10.
int min_truncation(const RealBase& base, int bits);

/// i.i.d. uniform digits, value c sum_{n <= N} x_n beta^-n.
/// Throws TruncationTooCoarse unless beta^-N < cell width / 10.
EmpiricalMeasure sample_erdos(const RealBase& base, std::size_t samples, int N, int bits, std::uint64_t seed,
                              unsigned threads = 1);

/// x in [-1, 1] -> (beta - 1) x / 2 + 1/2. Throws WrongAlphabet unless d = 2.
long double bc_to_erdos(const RealBase& base, long double x);

enum class InvariantMethod { TwoSided, Birkhoff };

struct InvariantParams {
    std::size_t samples = 100000;
    int N = 0;        // two-sided: positive coordinates kept; birkhoff: orbit steps. 0 picks a default
    int K = 1;
    int bits = 7;
    std::uint64_t seed = 1;
    InvariantMethod method = InvariantMethod::TwoSided;
    std::size_t left = 64;    // two-sided: initial count of coordinates <= 0
    int shift = 0;            // two-sided: histogram coordinates 1 + shift, 2 + shift, ...
    int burn_in = 10;         // birkhoff: steps skipped before counting
    std::size_t budget = 1 << 16;
    unsigned threads = 1;
};

/// Estimates the shift-invariant measure equivalent to the Erdos measure.
/// TwoSided needs an exact base (pass nullptr only with Birkhoff).
EmpiricalMeasure invariant_estimate(const PisotBase* base, const RealBase& real, const InvariantParams& params);

/// Density of the absolutely continuous invariant measure of x -> beta x mod 1,
/// constant between consecutive points of the orbit of 1.
struct PiecewiseDensity {
    std::vector<long double> breaks;  // 0 = b_0 < b_1 < ... < b_k = 1
    std::vector<long double> values;  // values[i] on [b_i, b_{i+1})
    long double normalization = 1;    // integral of the unnormalized density

    long double operator()(long double x) const;
    long double cdf(long double x) const;
    long double inverse_cdf(long double u) const;
    long double integral() const;
    /// Mass of each of 2^bits equal cells.
    std::vector<double> cell_masses(int bits) const;
};

/// Exact in Q(beta), then rounded. Throws OrbitNotFinite if the orbit of 1
/// has no cycle within max_states steps.
PiecewiseDensity parry_density(const PisotBase& base, std::size_t max_states = 4096);

EmpiricalMeasure sample_density(const PiecewiseDensity& density, std::size_t samples, int bits, std::uint64_t seed);

struct SingularityRow {
    int bits = 0;
    double tv = 0;
    double noise = 0;  // expected TV of an exact sample of the same size
};

struct SingularityReport {
    std::vector<SingularityRow> rows;  // finest resolution first
    bool bounded_away = false;         // finest tv > 3 noise
    bool non_decreasing = false;       // tv does not drop when the cells are halved
};

/// Throws InvalidArgument if nu has fewer than 2^refinements cells.
SingularityReport singularity_diagnostic(const EmpiricalMeasure& nu, const PiecewiseDensity& parry, int refinements);

struct QuasiInvarianceReport {
    int bits = 0;
    double sigmas = 5;
    std::vector<std::size_t> violations;  // cells charged by one measure only
    EmpiricalMeasure pushed;
};

/// Pushes `samples` fresh Erdos samples through one shift step and compares
/// cell supports with mu: a cell is charged when its count reaches sigmas^2,
/// counts rescaled to mu's total.
QuasiInvarianceReport quasi_invariance_check(const RealBase& base, const EmpiricalMeasure& mu, std::uint64_t seed,
                                             std::size_t samples = 0, double sigmas = 5, unsigned threads = 1);

/// Same comparison between two given histograms.
std::vector<std::size_t> support_violations(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double sigmas);

}  // namespace betanorm
