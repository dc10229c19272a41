#include "betanorm/wf.hpp"

#include <cmath>

#include "betanorm/detail/parallel.hpp"
#include "betanorm/error.hpp"
#include "betanorm/expansion.hpp"
#include "betanorm/normalization.hpp"
#include "betanorm/rng.hpp"

namespace betanorm {

namespace {

constexpr std::size_t kChunk = 4096;

bool in_z_beta(const FieldElement& y) {
    for (const auto& q : y.coeffs()) {
        if (q.get_den() != 1) return false;
    }
    return true;
}

}  // namespace

std::optional<KillerCertificate> find_period_killer(const PisotBase& base, const FieldElement& y,
                                                    const Rational& delta, std::size_t max_len) {
    if (!in_z_beta(y) || sign(y) < 0 || compare(y, Rational(1)) != std::strong_ordering::less) {
        throw Error(ErrorCode::InvalidArgument, "killer search needs y in Z[beta] cap [0, 1), got " + y.to_string());
    }
    if (sgn(delta) <= 0) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    const auto& ctx = base.context();

    // Least s with beta^-s <= delta; every word 0^s g is then worth < delta.
    std::size_t s = 0;
    FieldElement scale(ctx, Rational(1));
    while (compare(scale, delta) == std::strong_ordering::greater) {
        scale = scale.mul_beta_inv();
        ++s;
    }
    if (s >= max_len) return std::nullopt;

    const FieldElement one(ctx, Rational(1));
    const int top = base.digit_bound();
    // Words g of each length in lexicographic order; the value of 0^s g is
    // accumulated digit by digit alongside an odometer.
    for (std::size_t len = 1; s + len <= max_len; ++len) {
        DigitWord g(len, 0);
        for (;;) {
            if (g.back() != 0) {
                DigitWord f(s, 0);
                f.insert(f.end(), g.begin(), g.end());
                if (parry_admissible(std::span<const int>(f), base.quasi_greedy())) {
                    const FieldElement sum = y + value(ctx, std::span<const int>(f));
                    if (compare(sum, one) == std::strong_ordering::less) {
                        PeriodicWord proof = greedy_expand(base, sum);
                        if (proof.is_finite()) return KillerCertificate{y, delta, std::move(f), std::move(proof)};
                    }
                }
            }
            std::size_t i = len;
            while (i > 0 && g[i - 1] == top) g[--i] = 0;
            if (i == 0) break;
            ++g[i - 1];
        }
    }
    return std::nullopt;
}

bool verify(const PisotBase& base, const KillerCertificate& cert) {
    const auto& ctx = base.context();
    const FieldElement f = value(ctx, std::span<const int>(cert.f));
    if (sign(f) <= 0 || compare(f, cert.delta) != std::strong_ordering::less) return false;
    if (!is_admissible(base, std::span<const int>(cert.f))) return false;
    const FieldElement sum = cert.y + f;
    if (compare(sum, Rational(1)) != std::strong_ordering::less) return false;
    const PeriodicWord expansion = greedy_expand_exact(ctx, sum);
    return expansion.is_finite() && expansion == cert.proof;
}

const char* to_string(WfStatus s) noexcept {
    return s == WfStatus::ProvenForAttractor ? "Proven-for-attractor" : "Inconclusive";
}

WfReport wf_check(const PisotBase& base, const WfBounds& bounds) {
    WfReport report;
    report.L1 = estimate_K(base, bounds.k_max_len, bounds.seed).K;
    report.p_integer = static_cast<int>(base.attractor().max_period());
    report.p_normalization = static_cast<int>(base.normalization_attractor().max_period());
    report.p = std::max(report.p_integer, report.p_normalization);

    const auto& ctx = base.context();
    const FieldElement beta = FieldElement::beta(ctx);
    // delta = (d-1)/(beta-1) beta^-(L1 + p_j), the bound for a witness word
    // of length L1 + p_j.
    const FieldElement top = FieldElement(ctx, Rational(base.d() - 1)) / (beta - Rational(1));
    bool all = true;
    const auto& attractor = base.attractor();
    for (std::size_t j = 0; j < attractor.cycles.size(); ++j) {
        const auto& cycle = attractor.cycles[j];
        if (cycle.empty()) continue;
        const long witness = report.L1 + static_cast<long>(cycle.size());
        // delta is a field element; a rational just below it keeps the search exact.
        const FieldElement delta_exact = top * beta.pow(-witness);
        const long double approx = static_cast<long double>(delta_exact.approx());
        Rational delta(static_cast<double>(approx * (1 - 1e-12L)));
        while (compare(delta_exact, delta) != std::strong_ordering::greater) delta /= 2;

        PeriodKiller pk{cycle, find_period_killer(base, attractor.representatives[j], delta, bounds.max_killer_len)};
        if (pk.killer) {
            const int extra = static_cast<int>(pk.killer->f.size()) - static_cast<int>(witness);
            report.L2 = std::max(report.L2, extra);
        } else {
            all = false;
        }
        report.killers.push_back(std::move(pk));
    }
    report.L = std::max(1, report.L1 + report.L2 + report.p);
    report.status = all ? WfStatus::ProvenForAttractor : WfStatus::Inconclusive;
    return report;
}

std::optional<DigitWord> complete_to_finite(const PisotBase& base, const DigitWord& prefix, std::size_t max_len) {
    PrefixNormalizer pn(base);
    for (int x : prefix) pn.push(x);
    if (pn.finite()) return DigitWord{};
    const int d = base.d();
    for (std::size_t len = 1; len <= max_len; ++len) {
        DigitWord s(len, 0);
        for (int x : s) pn.push(x);
        for (;;) {
            if (pn.finite()) return s;
            // Odometer over the suffix, updating the normalizer in place.
            std::size_t i = len;
            while (i > 0 && s[i - 1] == d - 1) {
                pn.pop();
                --i;
            }
            if (i == 0) break;
            pn.pop();
            ++s[i - 1];
            pn.push(s[i - 1]);
            for (std::size_t j = i; j < len; ++j) {
                s[j] = 0;
                pn.push(0);
            }
        }
    }
    return std::nullopt;
}

std::vector<GammaRow> gamma_experiment(const PisotBase& base, int L, std::size_t n_max, std::size_t samples,
                                       std::uint64_t seed, unsigned threads) {
    if (L < 1) throw Error(ErrorCode::InvalidArgument, "L must be >= 1");
    const auto d = static_cast<std::uint32_t>(base.d());
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    // first_finite histogram: index k = first prefix length with a finite
    // normalization, n_max + 1 when none up to n_max.
    auto counts = detail::run_chunks(chunks, threads, [&](std::size_t chunk) {
        std::vector<std::size_t> hist(n_max + 2, 0);
        Philox rng(seed, chunk);
        PrefixNormalizer pn(base);
        const std::size_t begin = chunk * kChunk, end = std::min(samples, begin + kChunk);
        for (std::size_t s = begin; s < end; ++s) {
            pn.reset();
            std::size_t first = n_max + 1;
            // Digits are always drawn in full so each sample uses n_max draws.
            DigitWord x(n_max);
            for (auto& v : x) v = static_cast<int>(rng.below(d));
            for (std::size_t k = 0; k < n_max; ++k) {
                pn.push(x[k]);
                if (pn.finite()) {
                    first = k + 1;
                    break;
                }
            }
            ++hist[first];
        }
        return hist;
    });
    std::vector<std::size_t> hist(n_max + 2, 0);
    for (const auto& h : counts) {
        for (std::size_t k = 0; k < h.size(); ++k) hist[k] += h[k];
    }

    const double gamma = std::pow(1 - std::pow(static_cast<double>(d), -L), 1.0 / (2.0 * L));
    std::vector<GammaRow> rows;
    std::size_t alive = samples;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (n > 0) alive -= hist[n];
        GammaRow row;
        row.n = n;
        row.observed = samples ? static_cast<double>(alive) / static_cast<double>(samples) : 1.0;
        row.bound = std::pow(gamma, static_cast<double>(n));
        row.sigma = samples ? std::sqrt(row.observed * (1 - row.observed) / static_cast<double>(samples)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace betanorm
