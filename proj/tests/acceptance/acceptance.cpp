// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance [AC1 AC7 ...]   (no arguments runs everything)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "betanorm/base.hpp"
#include "betanorm/error.hpp"
#include "betanorm/expansion.hpp"
#include "betanorm/measure.hpp"
#include "betanorm/normalization.hpp"
#include "betanorm/rng.hpp"
#include "betanorm/torus.hpp"
#include "betanorm/wf.hpp"

using namespace betanorm;

namespace {

// Pinned tolerances and budgets.
constexpr double kAc1Seconds = 60;
constexpr double kAc5Seconds = 300;
constexpr double kAc5Sigmas = 3;
constexpr long double kAc8Residual = 1e-8L;
constexpr double kAc8Truncation = 1e-10;
constexpr int kAc9Bits = 6;
constexpr std::size_t kAc9Samples = 100000;
// Frozen from the first reference run (TV 0.0683 at 128 cells, 10^6 samples, seed 1).
constexpr double kAc10Threshold = 0.06;
constexpr double kAc10Seconds = 600;
constexpr double kAc11Sigmas = 5;

struct Fixture {
    const char* name;
    BasePtr base;
};

std::vector<Fixture> fixture_bases() {
    return {{"golden d=2", make_base(MinimalPolynomial({-1, -1, 1}), 2)},
            {"golden d=3", make_base(MinimalPolynomial({-1, -1, 1}), 3)},
            {"tribonacci d=2", make_base(MinimalPolynomial({-1, -1, -1, 1}), 2)}};
}

DigitWord random_word(Philox& rng, int d, std::size_t n) {
    DigitWord w(n);
    for (auto& x : w) x = static_cast<int>(rng.below(static_cast<std::uint32_t>(d)));
    return w;
}

Window random_window(Philox& rng, int d, std::size_t left, std::size_t right) {
    Window w;
    w.left = left;
    w.digits = random_word(rng, d, left + right);
    return w;
}

struct Result {
    bool pass = false;
    std::string detail;
};

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// --- AC1 / AC2 -------------------------------------------------------------

Result ac1() {
    Clock clock;
    std::size_t ok = 0, total = 0;
    for (const auto& f : fixture_bases()) {
        Philox rng(101);
        for (int i = 0; i < 1000; ++i) {
            const auto x = random_word(rng, f.base->d(), 1 + rng.below(60));
            const auto nw = normalize_finite(*f.base, x);
            ++total;
            ok += value(f.base->context(), nw.word) == scaled_value(*f.base, x);
        }
    }
    const double t = clock.seconds();
    return {ok == total && t < kAc1Seconds,
            std::to_string(ok) + "/" + std::to_string(total) + " exact, " + fmt("%.1f s", t)};
}

Result ac2() {
    std::size_t ok = 0, total = 0;
    std::ostringstream notes;
    for (const auto& f : fixture_bases()) {
        Philox rng(101);
        for (int i = 0; i < 1000; ++i) {
            const auto x = random_word(rng, f.base->d(), 1 + rng.below(60));
            ++total;
            ok += is_admissible(*f.base, normalize_finite(*f.base, x).word);
        }
        // Two-sided windows: tribonacci blocks run to thousands of digits.
        const bool long_blocks = f.base->context()->degree() > 2;
        const int windows = long_blocks ? 20 : 1000;
        const std::size_t half = long_blocks ? 5000 : (f.base->d() == 3 ? 400 : 60);
        const int K = estimate_K(*f.base, 10).K;
        Philox wrng(202);
        for (int i = 0; i < windows; ++i) {
            // A window with no block ending at or before 0 is redrawn twice as wide.
            for (std::size_t h = half;; h *= 2) {
                const auto w = random_window(wrng, f.base->d(), h, h);
                try {
                    const auto t = two_sided_normalize(*f.base, w, K);
                    ++total;
                    ok += is_admissible(*f.base, std::span<const int>(t.digits));
                    break;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::WindowTooShort) throw;
                }
            }
        }
        notes << "; " << f.name << " " << windows << " windows";
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " admissible" + notes.str()};
}

// --- AC3 -------------------------------------------------------------------

Result ac3() {
    const auto golden = make_base(MinimalPolynomial({-1, -1, 1}), 2);
    const auto trib = make_base(MinimalPolynomial({-1, -1, -1, 1}), 2);
    const bool g = golden->quasi_greedy() == PeriodicWord({}, {1, 0});
    const bool t = trib->quasi_greedy() == PeriodicWord({}, {1, 1, 0});
    const bool gv = value(golden->context(), golden->quasi_greedy()) == FieldElement(golden->context(), Rational(1));
    const bool tv = value(trib->context(), trib->quasi_greedy()) == FieldElement(trib->context(), Rational(1));
    return {g && t && gv && tv, std::string("golden (10)^inf ") + (g && gv ? "ok" : "MISMATCH") +
                                    ", tribonacci (110)^inf " + (t && tv ? "ok" : "MISMATCH")};
}

// --- AC4 -------------------------------------------------------------------

Result ac4() {
    std::size_t ok = 0, total = 0;
    std::ostringstream notes;
    for (const auto& f : fixture_bases()) {
        const auto report = wf_check(*f.base);
        notes << "; " << f.name << " L=" << report.L;
        Philox rng(303);
        for (int i = 0; i < 200; ++i) {
            auto w = random_word(rng, f.base->d(), 1 + rng.below(40));
            const auto s = complete_to_finite(*f.base, w, static_cast<std::size_t>(report.L));
            ++total;
            if (!s) continue;
            w.insert(w.end(), s->begin(), s->end());
            ok += normalize_finite(*f.base, w).finite();
        }
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " completed" + notes.str()};
}

// --- AC5 -------------------------------------------------------------------

Result ac5() {
    Clock clock;
    bool pass = true;
    std::ostringstream notes;
    for (const auto& f : fixture_bases()) {
        const int L = wf_check(*f.base).L;
        const auto rows = gamma_experiment(*f.base, L, 60, 100000, 1);
        double worst = -1;  // largest (observed - bound) / sigma-band excess
        bool monotone = true;
        for (std::size_t n = 0; n < rows.size(); ++n) {
            const auto& r = rows[n];
            worst = std::max(worst, r.observed - r.bound - kAc5Sigmas * r.sigma);
            if (n && r.observed > rows[n - 1].observed) monotone = false;
        }
        pass &= worst <= 0 && monotone;
        notes << f.name << " L=" << L << " B_60=" << fmt("%.4f", rows.back().observed)
              << " bound=" << fmt("%.4f", rows.back().bound) << "; ";
    }
    const double t = clock.seconds();
    pass &= t < kAc5Seconds;
    return {pass, notes.str() + fmt("%.1f s", t)};
}

// --- AC6 -------------------------------------------------------------------

Result ac6() {
    std::size_t ok = 0, total = 0;
    std::ostringstream notes;
    for (const auto& f : fixture_bases()) {
        const int K = estimate_K(*f.base, 12).K;
        Philox rng(404);
        int pairs = 0;
        while (pairs < 200) {
            const auto w1 = random_word(rng, f.base->d(), 1 + rng.below(20));
            const auto w2 = random_word(rng, f.base->d(), 1 + rng.below(20));
            if (!normalize_finite(*f.base, w1).finite() || !normalize_finite(*f.base, w2).finite()) continue;
            ++pairs;
            DigitWord joined = w1, left = w1, right(static_cast<std::size_t>(K), 0);
            joined.insert(joined.end(), static_cast<std::size_t>(2 * K), 0);
            joined.insert(joined.end(), w2.begin(), w2.end());
            left.insert(left.end(), static_cast<std::size_t>(K), 0);
            right.insert(right.end(), w2.begin(), w2.end());
            const auto nj = normalize_finite(*f.base, joined);
            const auto nl = normalize_finite(*f.base, left);
            const auto nr = normalize_finite(*f.base, right);
            ++total;
            if (!nj.finite() || !nl.finite() || !nr.finite()) continue;
            // The right part may overhang the joined word by up to K digits.
            DigitWord expect = nl.padded(left.size());
            const auto r = nr.padded(right.size());
            expect.insert(expect.end(), r.begin(), r.end());
            const std::size_t n = std::max(expect.size(), joined.size());
            expect.resize(n, 0);
            ok += nj.padded(n) == expect;
        }
        notes << "; " << f.name << " K=" << K;
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " digitwise equal" + notes.str()};
}

// --- AC7 -------------------------------------------------------------------

Result ac7() {
    const auto base = make_base(MinimalPolynomial({-1, -1, 1}), 2);
    const int K = estimate_K(*base, 10).K;
    int ok = 0;
    long shortest = -1;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Philox rng(seed, 7);
        const auto x = random_window(rng, 2, 60, 60);
        const auto maps = coordinate_maps(*base, x, K);
        ok += maps.p_of_c_equals_q && maps.c_prime && maps.q_of_c_prime_equals_p;
        shortest = shortest < 0 ? maps.checked_end : std::min(shortest, maps.checked_end);
    }
    return {ok == 100, "golden d=2: " + std::to_string(ok) + "/100 windows satisfy both identities (checked on 1.." +
                           std::to_string(shortest) + " at least)"};
}

// --- AC8 -------------------------------------------------------------------

Result ac8() {
    long double worst = 0;
    int ok = 0, total = 0;
    for (const auto& f : fixture_bases()) {
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            Philox rng(seed, 8);
            const auto x = random_window(rng, f.base->d(), 40, 40);
            const auto r = torus_check(*f.base, x, kAc8Truncation);
            worst = std::max(worst, r.residual);
            ++total;
            ok += r.residual < kAc8Residual;
        }
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " windows, worst residual " +
                             fmt("%.2e", static_cast<double>(worst))};
}

// --- AC9 -------------------------------------------------------------------

Result ac9() {
    const auto base = make_base(MinimalPolynomial({-1, -1, 1}), 2);
    const auto real = RealBase::of(*base);
    InvariantParams p;
    p.samples = kAc9Samples;
    p.bits = kAc9Bits;
    p.N = 30;
    p.seed = 1;
    const auto nu = invariant_estimate(base.get(), real, p);
    p.shift = 1;
    const auto pushed = invariant_estimate(base.get(), real, p);
    // Split-half control: two independent half-size estimates.
    p.shift = 0;
    p.samples = kAc9Samples / 2;
    const auto h1 = invariant_estimate(base.get(), real, p);
    p.seed = 2;
    const auto h2 = invariant_estimate(base.get(), real, p);
    const double tv = total_variation(nu, pushed), floor = total_variation(h1, h2);
    return {tv < floor, "TV(nu, shifted nu) " + fmt("%.4f", tv) + " vs split-half floor " + fmt("%.4f", floor)};
}

// --- AC10 ------------------------------------------------------------------

Result ac10() {
    Clock clock;
    const auto base = make_base(MinimalPolynomial({-1, -1, 1}), 2);
    const auto real = RealBase::of(*base);
    const auto parry = parry_density(*base);
    InvariantParams p;
    p.samples = 1000000;
    p.bits = 8;
    p.N = 30;
    p.seed = 1;
    const auto nu = invariant_estimate(base.get(), real, p);
    const auto report = singularity_diagnostic(nu, parry, 1);  // rows: 256 then 128 cells
    const double tv128 = report.rows[1].tv, tv256 = report.rows[0].tv;
    const auto control = sample_density(parry, 1000000, 7, 2);
    const double tv_control = singularity_diagnostic(control, parry, 0).rows[0].tv;
    const double t = clock.seconds();
    const bool pass = tv128 >= kAc10Threshold && tv256 >= tv128 && tv_control < kAc10Threshold / 2 && t < kAc10Seconds;
    return {pass, "TV(nu, Parry) " + fmt("%.4f", tv128) + " at 128 cells (threshold " + fmt("%.2f", kAc10Threshold) +
                      "), " + fmt("%.4f", tv256) + " at 256; control " + fmt("%.4f", tv_control) + "; " +
                      fmt("%.1f s", t)};
}

// --- AC11 ------------------------------------------------------------------

Result ac11() {
    const auto base = make_base(MinimalPolynomial({-1, -1, 1}), 2);
    const auto real = RealBase::of(*base);
    const auto mu = sample_erdos(real, 1000000, min_truncation(real, 6) + 4, 6, 1);
    const auto r = quasi_invariance_check(real, mu, 2, 0, kAc11Sigmas);
    EmpiricalMeasure half(6);
    Philox rng(3);
    for (int i = 0; i < 1000000; ++i) half.add(rng.uniform() / 2);
    const auto control = support_violations(mu, half, kAc11Sigmas);
    return {r.violations.empty() && !control.empty(),
            std::to_string(r.violations.size()) + " violations for the Erdos measure; control on [0, 1/2) reports " +
                std::to_string(control.size())};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},  {"AC5", ac5},  {"AC6", ac6},
        {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}};
    std::set<std::string> only(argv + 1, argv + argc);
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        if (!only.empty() && !only.count(id)) continue;
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        failed += !r.pass;
        std::cout << id << ' ' << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << std::endl;
    }
    return failed ? 1 : 0;
}
