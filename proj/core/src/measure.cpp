#include "betanorm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "betanorm/detail/parallel.hpp"
#include "betanorm/error.hpp"
#include "betanorm/normalization.hpp"
#include "betanorm/rng.hpp"

namespace betanorm {

namespace {

constexpr std::size_t kChunk = 8192;

// Loss of precision in x -> beta x mod 1, per step, beyond the initial rounding.
constexpr long double kEps = std::numeric_limits<long double>::epsilon();

long double cell_width(int bits) { return std::ldexp(1.0L, -bits); }

int draw_digit(Philox& rng, int d) { return static_cast<int>(rng.below(static_cast<std::uint32_t>(d))); }

// c * sum_{n <= N} x_n beta^-n with fresh digits, Horner from the tail.
long double draw_erdos(const RealBase& base, Philox& rng, int N, std::vector<int>& buf) {
    buf.resize(static_cast<std::size_t>(N));
    for (auto& x : buf) x = draw_digit(rng, base.d);
    long double v = 0;
    for (std::size_t i = buf.size(); i-- > 0;) v = (v + static_cast<long double>(buf[i])) / base.beta;
    return base.c() * v;
}

template <class F>
EmpiricalMeasure chunked(std::size_t samples, int bits, unsigned threads, F per_chunk) {
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    auto parts = detail::run_chunks(chunks, threads, [&](std::size_t chunk) {
        EmpiricalMeasure m(bits);
        const std::size_t begin = chunk * kChunk;
        per_chunk(chunk, begin, std::min(samples, begin + kChunk), m);
        return m;
    });
    EmpiricalMeasure out(bits);
    for (const auto& p : parts) out.merge(p);
    return out;
}

}  // namespace

long double RealBase::shift(long double x) const noexcept {
    const long double y = beta * x;
    return y - std::floor(y);
}

EmpiricalMeasure::EmpiricalMeasure(int bits) : counts(std::size_t{1} << bits, 0) {}

int EmpiricalMeasure::bits() const noexcept {
    int b = 0;
    while ((std::size_t{1} << b) < counts.size()) ++b;
    return b;
}

void EmpiricalMeasure::add(long double x) {
    const auto n = static_cast<long double>(counts.size());
    auto i = static_cast<long>(std::floor(x * n));
    i = std::clamp<long>(i, 0, static_cast<long>(counts.size()) - 1);
    ++counts[static_cast<std::size_t>(i)];
    ++total;
}

void EmpiricalMeasure::merge(const EmpiricalMeasure& o) {
    if (o.counts.size() != counts.size()) throw Error(ErrorCode::InvalidArgument, "histogram sizes differ");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    total += o.total;
}

EmpiricalMeasure EmpiricalMeasure::coarsen(int b) const {
    if (b > bits() || b < 0) throw Error(ErrorCode::InvalidArgument, "cannot coarsen to more cells");
    EmpiricalMeasure out(b);
    const std::size_t f = counts.size() >> b;
    for (std::size_t i = 0; i < counts.size(); ++i) out.counts[i / f] += counts[i];
    out.total = total;
    out.seed = seed;
    out.N = N;
    out.estimator = estimator;
    return out;
}

std::vector<double> EmpiricalMeasure::probabilities() const {
    std::vector<double> p(counts.size(), 0.0);
    if (total == 0) return p;
    for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return p;
}

double total_variation(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.bins() != b.bins()) throw Error(ErrorCode::InvalidArgument, "histogram sizes differ");
    const auto p = a.probabilities(), q = b.probabilities();
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return s / 2;
}

int min_truncation(const RealBase& base, int bits) {
    const long double target = cell_width(bits) / 10;
    int N = 0;
    for (long double t = 1; t >= target; t /= base.beta) ++N;
    return N;
}

EmpiricalMeasure sample_erdos(const RealBase& base, std::size_t samples, int N, int bits, std::uint64_t seed,
                              unsigned threads) {
    if (N < min_truncation(base, bits)) {
        std::ostringstream os;
        os << "truncation N=" << N << " leaves beta^-N above a tenth of the cell width; need N >= "
           << min_truncation(base, bits);
        throw Error(ErrorCode::TruncationTooCoarse, os.str());
    }
    auto m = chunked(samples, bits, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end,
                                                  EmpiricalMeasure& out) {
        Philox rng(seed, chunk);
        std::vector<int> buf;
        for (std::size_t s = begin; s < end; ++s) out.add(draw_erdos(base, rng, N, buf));
    });
    m.seed = seed;
    m.N = N;
    m.estimator = "erdos";
    return m;
}

long double bc_to_erdos(const RealBase& base, long double x) {
    if (base.d != 2) throw Error(ErrorCode::WrongAlphabet, "the affine change of variables needs d = 2");
    if (x < -1 || x > 1) throw Error(ErrorCode::InvalidArgument, "x must lie in [-1, 1]");
    return (base.beta - 1) * x / 2 + 0.5L;
}

EmpiricalMeasure invariant_estimate(const PisotBase* base, const RealBase& real, const InvariantParams& params) {
    const int bits = params.bits;
    const int floor_N = min_truncation(real, bits);
    EmpiricalMeasure m;
    if (params.method == InvariantMethod::Birkhoff) {
        const int steps = params.N > 0 ? params.N : 60;
        const int burn = std::min(params.burn_in, steps - 1);
        // The start point carries enough digits for every visited point to be
        // resolved to a tenth of a cell, and rounding must not outgrow it.
        const int M = steps + floor_N + 2;
        if (4 * kEps * std::pow(real.beta, static_cast<long double>(steps)) >= cell_width(bits) / 10) {
            throw Error(ErrorCode::TruncationTooCoarse,
                        "rounding error after " + std::to_string(steps) + " shift steps exceeds the cell width");
        }
        m = chunked(params.samples, bits, params.threads, [&](std::size_t chunk, std::size_t begin,
                                                               std::size_t end, EmpiricalMeasure& out) {
            Philox rng(params.seed, chunk);
            std::vector<int> buf;
            for (std::size_t s = begin; s < end; ++s) {
                long double x = draw_erdos(real, rng, M, buf);
                for (int n = 0; n < steps; ++n, x = real.shift(x)) {
                    if (n >= burn) out.add(x);
                }
            }
        });
        m.N = steps;
        m.estimator = "birkhoff";
    } else {
        if (!base) throw Error(ErrorCode::InvalidArgument, "two-sided estimate needs an exact base");
        const int N = params.N > 0 ? params.N : floor_N;
        if (N < floor_N) {
            throw Error(ErrorCode::TruncationTooCoarse, "need N >= " + std::to_string(floor_N));
        }
        const auto need = static_cast<long>(N + params.shift);
        m = chunked(params.samples, bits, params.threads, [&](std::size_t, std::size_t begin, std::size_t end,
                                                               EmpiricalMeasure& out) {
            for (std::size_t s = begin; s < end; ++s) {
                // One substream per sample: windows do not depend on chunking.
                Window w;
                std::size_t left = params.left, right = static_cast<std::size_t>(need) + 16;
                for (int attempt = 0;; ++attempt) {
                    if (attempt == 8) {
                        throw Error(ErrorCode::BudgetExceeded, "window for sample " + std::to_string(s) +
                                                                   " did not settle after 8 doublings");
                    }
                    Philox rng(params.seed, s);
                    w.left = left;
                    w.digits.resize(left + right);
                    for (auto& x : w.digits) x = draw_digit(rng, real.d);
                    try {
                        const auto t = two_sided_normalize(*base, w, params.K, params.budget);
                        if (t.stable_end >= need) {
                            long double v = 0;
                            for (long k = need; k > params.shift; --k) v = (v + t.at(k)) / real.beta;
                            out.add(v);
                            break;
                        }
                        right *= 2;
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::WindowTooShort) throw;
                        left *= 2;
                    }
                }
            }
        });
        m.N = N;
        m.estimator = params.shift ? "two-sided+shift" : "two-sided";
    }
    m.seed = params.seed;
    return m;
}

// ---------------------------------------------------------------------------

long double PiecewiseDensity::operator()(long double x) const {
    if (x < 0 || x >= 1) return 0;
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    return values[static_cast<std::size_t>(it - breaks.begin()) - 1];
}

long double PiecewiseDensity::cdf(long double x) const {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    long double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (x <= breaks[i]) break;
        s += values[i] * (std::min(x, breaks[i + 1]) - breaks[i]);
    }
    return s;
}

long double PiecewiseDensity::inverse_cdf(long double u) const {
    long double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const long double mass = values[i] * (breaks[i + 1] - breaks[i]);
        if (u < s + mass || i + 1 == values.size()) {
            return std::min(breaks[i] + (u - s) / values[i], std::nextafter(1.0L, 0.0L));
        }
        s += mass;
    }
    return 0;
}

long double PiecewiseDensity::integral() const {
    long double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * (breaks[i + 1] - breaks[i]);
    return s;
}

std::vector<double> PiecewiseDensity::cell_masses(int bits) const {
    const std::size_t n = std::size_t{1} << bits;
    std::vector<double> out(n);
    long double prev = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double next = cdf(static_cast<long double>(i + 1) / static_cast<long double>(n));
        out[i] = static_cast<double>(next - prev);
        prev = next;
    }
    return out;
}

PiecewiseDensity parry_density(const PisotBase& base, std::size_t max_states) {
    const auto& ctx = base.context();
    const FieldElement beta = base.beta();
    const FieldElement one(ctx, Rational(1));
    // Orbit of 1 under x -> beta x mod 1: t_0 = 1, stopping at 0 or a repeat.
    std::vector<FieldElement> orbit{one};
    std::size_t cycle_start = 0, period = 0;
    for (;;) {
        FieldElement t = orbit.back() * beta;
        t -= Rational(floor(t));
        if (t.is_zero()) break;
        const auto it = std::find(orbit.begin() + 1, orbit.end(), t);
        if (it != orbit.end()) {
            cycle_start = static_cast<std::size_t>(it - orbit.begin());
            period = orbit.size() - cycle_start;
            break;
        }
        if (orbit.size() == max_states) {
            throw Error(ErrorCode::OrbitNotFinite,
                        "orbit of 1 has no cycle within " + std::to_string(max_states) + " steps");
        }
        orbit.push_back(std::move(t));
    }
    // Weight of t_n is beta^-n, summed over all later visits on a cycle.
    std::vector<FieldElement> weight;
    for (std::size_t n = 0; n < orbit.size(); ++n) {
        FieldElement w = beta.pow(-static_cast<long>(n));
        if (period && n >= cycle_start) w = w / (one - beta.pow(-static_cast<long>(period)));
        weight.push_back(std::move(w));
    }
    std::vector<FieldElement> pts(orbit.begin() + 1, orbit.end());
    std::sort(pts.begin(), pts.end(),
              [](const FieldElement& a, const FieldElement& b) { return compare(a, b) == std::strong_ordering::less; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    FieldElement Z(ctx);
    for (std::size_t n = 0; n < orbit.size(); ++n) Z += weight[n] * orbit[n];

    PiecewiseDensity out;
    std::vector<FieldElement> edges{FieldElement(ctx)};
    edges.insert(edges.end(), pts.begin(), pts.end());
    edges.push_back(one);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        FieldElement h(ctx);
        for (std::size_t n = 0; n < orbit.size(); ++n) {
            if (compare(orbit[n], edges[i]) == std::strong_ordering::greater) h += weight[n];
        }
        out.values.push_back((h / Z).approx());
    }
    for (const auto& e : edges) out.breaks.push_back(e.approx());
    out.normalization = Z.approx();
    return out;
}

EmpiricalMeasure sample_density(const PiecewiseDensity& density, std::size_t samples, int bits, std::uint64_t seed) {
    auto m = chunked(samples, bits, 1, [&](std::size_t chunk, std::size_t begin, std::size_t end,
                                           EmpiricalMeasure& out) {
        Philox rng(seed, chunk);
        for (std::size_t s = begin; s < end; ++s) out.add(density.inverse_cdf(rng.uniform()));
    });
    m.seed = seed;
    m.estimator = "density";
    return m;
}

SingularityReport singularity_diagnostic(const EmpiricalMeasure& nu, const PiecewiseDensity& parry,
                                         int refinements) {
    if (refinements < 0 || nu.bits() < refinements) {
        throw Error(ErrorCode::InvalidArgument, "histogram has fewer than 2^refinements cells");
    }
    SingularityReport r;
    const double n = static_cast<double>(std::max<std::uint64_t>(nu.total, 1));
    for (int b = nu.bits(); b >= nu.bits() - refinements; --b) {
        const auto coarse = nu.coarsen(b);
        const auto p = coarse.probabilities();
        const auto q = parry.cell_masses(b);
        SingularityRow row;
        row.bits = b;
        for (std::size_t i = 0; i < p.size(); ++i) {
            row.tv += std::fabs(p[i] - q[i]) / 2;
            // E|phat - p| for a binomial proportion, normal approximation.
            row.noise += std::sqrt(2 * q[i] * (1 - q[i]) / (std::numbers::pi * n)) / 2;
        }
        r.rows.push_back(row);
    }
    r.bounded_away = r.rows.front().tv > 3 * r.rows.front().noise;
    r.non_decreasing = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) r.non_decreasing &= r.rows[i - 1].tv >= r.rows[i].tv;
    return r;
}

std::vector<std::size_t> support_violations(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double sigmas) {
    if (a.bins() != b.bins()) throw Error(ErrorCode::InvalidArgument, "histogram sizes differ");
    std::vector<std::size_t> out;
    if (a.total == 0 || b.total == 0) return out;
    // Counts of Poisson size >= sigmas^2 sit sigmas standard deviations above 0.
    const double charged = sigmas * sigmas;
    const double scale = static_cast<double>(a.total) / static_cast<double>(b.total);
    for (std::size_t i = 0; i < a.bins(); ++i) {
        const bool in_a = static_cast<double>(a.counts[i]) >= charged;
        const bool in_b = static_cast<double>(b.counts[i]) * scale >= charged;
        if (in_a != in_b) out.push_back(i);
    }
    return out;
}

QuasiInvarianceReport quasi_invariance_check(const RealBase& base, const EmpiricalMeasure& mu, std::uint64_t seed,
                                             std::size_t samples, double sigmas, unsigned threads) {
    QuasiInvarianceReport r;
    r.bits = mu.bits();
    r.sigmas = sigmas;
    if (samples == 0) samples = mu.total;
    // One extra digit so the shifted point keeps the truncation margin.
    const int N = std::max(mu.N, min_truncation(base, r.bits)) + 1;
    r.pushed = chunked(samples, r.bits, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end,
                                                     EmpiricalMeasure& out) {
        Philox rng(seed, chunk);
        std::vector<int> buf;
        for (std::size_t s = begin; s < end; ++s) out.add(base.shift(draw_erdos(base, rng, N, buf)));
    });
    r.pushed.seed = seed;
    r.pushed.N = N;
    r.pushed.estimator = "erdos+shift";
    r.violations = support_violations(mu, r.pushed, sigmas);
    return r;
}

}  // namespace betanorm
