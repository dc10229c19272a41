#include "betanorm/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "betanorm/detail/cycle.hpp"
#include "betanorm/detail/lattice.hpp"
#include "betanorm/error.hpp"

namespace betanorm {

namespace {

void check_unit_interval(const FieldElement& x) {
    if (sign(x) < 0 || compare(x, Rational(1)) != std::strong_ordering::less) {
        std::ostringstream os;
        os << "greedy expansion needs 0 <= x < 1, got x ~ " << static_cast<double>(x.approx());
        throw Error(ErrorCode::OutOfRange, os.str());
    }
}

PeriodicWord finish(const detail::Orbit& orbit, std::size_t max_states) {
    switch (orbit.status) {
        case detail::OrbitStatus::Finite:
        case detail::OrbitStatus::Periodic:
            return PeriodicWord(orbit.pre, orbit.per);
        case detail::OrbitStatus::Budget:
            throw Error(ErrorCode::StateBudgetExceeded,
                        "no cycle within " + std::to_string(max_states) + " states");
        case detail::OrbitStatus::Overflow:
            break;
    }
    throw Error(ErrorCode::InvalidArgument, "unexpected overflow in exact arithmetic");
}

}  // namespace

PeriodicWord greedy_expand_exact(const ContextPtr& ctx, const FieldElement& x, std::size_t max_states) {
    (void)ctx;
    check_unit_interval(x);
    auto step = [](const FieldElement& y, int& digit) -> std::optional<FieldElement> {
        FieldElement w = y.mul_beta();
        const Integer k = floor(w);
        digit = static_cast<int>(k.get_si());
        w -= Rational(k);
        return w;
    };
    return finish(detail::brent_orbit(x, step, [](const FieldElement& y) { return y.is_zero(); }, max_states),
                  max_states);
}

PeriodicWord greedy_expand(const PisotBase& base, const FieldElement& x, std::size_t max_states) {
    const auto& lattice = base.lattice();
    if (lattice.enabled()) {
        if (auto p = lattice.from_field(x)) {
            check_unit_interval(x);
            const auto orbit = lattice.greedy(*p, max_states);
            if (orbit.status != detail::OrbitStatus::Overflow) return finish(orbit, max_states);
        }
    }
    return greedy_expand_exact(base.context(), x, max_states);
}

PeriodicWord quasi_greedy_one(const ContextPtr& ctx) {
    const FieldElement beta = FieldElement::beta(ctx);
    const Integer a1 = floor(beta);
    const PeriodicWord tail = greedy_expand_exact(ctx, beta - Rational(a1));
    DigitWord head{static_cast<int>(a1.get_si())};
    head.insert(head.end(), tail.pre().begin(), tail.pre().end());
    if (tail.is_finite()) {
        // 1 has a finite greedy expansion a'_1 ... a'_k; (a_n) repeats it with a'_k lowered.
        head.back() -= 1;
        return PeriodicWord({}, head);
    }
    return PeriodicWord(head, tail.per());
}

bool is_admissible(const PisotBase& base, const PeriodicWord& w) {
    check_digits(w.pre(), base.digit_bound());
    check_digits(w.per(), base.digit_bound());
    return parry_admissible(w, base.quasi_greedy());
}

bool is_admissible(const PisotBase& base, std::span<const int> window) {
    check_digits(window, base.digit_bound());
    return parry_admissible(window, base.quasi_greedy());
}

FieldElement value(const ContextPtr& ctx, std::span<const int> w) {
    FieldElement v(ctx);
    for (std::size_t i = w.size(); i-- > 0;) {
        v += Rational(w[i]);
        v = v.mul_beta_inv();
    }
    return v;
}

FieldElement value(const ContextPtr& ctx, const PeriodicWord& w) {
    FieldElement v = value(ctx, std::span<const int>(w.pre()));
    if (w.is_finite()) return v;
    const FieldElement beta = FieldElement::beta(ctx);
    const auto p = static_cast<long>(w.per().size());
    // per^inf = P / (1 - beta^-p), P the value of one period.
    const FieldElement one(ctx, Rational(1));
    FieldElement tail = value(ctx, std::span<const int>(w.per())) / (one - beta.pow(-p));
    tail *= beta.pow(-static_cast<long>(w.pre().size()));
    return v + tail;
}

bool AttractorSet::contains(const DigitWord& period) const {
    const DigitWord key = least_rotation(PeriodicWord({}, period).per());
    return std::binary_search(cycles.begin(), cycles.end(), key);
}

std::size_t AttractorSet::max_period() const {
    std::size_t p = 0;
    for (const auto& c : cycles) p = std::max(p, c.size());
    return p;
}

namespace {

// Inverse of a small dense matrix (Gauss-Jordan with partial pivoting).
std::vector<std::vector<long double>> invert(std::vector<std::vector<long double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<long double>> inv(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
        }
        std::swap(a[k], a[piv]);
        std::swap(inv[k], inv[piv]);
        const long double p = a[k][k];
        for (std::size_t j = 0; j < n; ++j) {
            a[k][j] /= p;
            inv[k][j] /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const long double f = a[i][k];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[k][j];
                inv[i][j] -= f * inv[k][j];
            }
        }
    }
    return inv;
}

}  // namespace

AttractorSet attractor_periods(const PisotBase& base, const Integer& denominator, std::size_t budget) {
    const auto& ctx = base.context();
    const int m = ctx->degree();
    const long double q = static_cast<long double>(denominator.get_d());
    const long double digit_bound = base.digit_bound();

    // Rows of the embedding (real root, real conjugates, Re/Im of complex pairs)
    // and the box each coordinate of q*y must lie in.
    std::vector<std::vector<long double>> rows;
    std::vector<long double> mid, half;
    auto powers = [m](std::complex<long double> z) {
        std::vector<std::complex<long double>> p(static_cast<std::size_t>(m));
        std::complex<long double> t = 1;
        for (auto& x : p) {
            x = t;
            t *= z;
        }
        return p;
    };
    {
        std::vector<long double> row;
        for (const auto& x : powers(ctx->beta_approx())) row.push_back(x.real());
        rows.push_back(row);
        mid.push_back(q / 2);
        half.push_back(q / 2);
    }
    for (const auto& disk : ctx->conjugates()) {
        const bool real = std::fabs(disk.center.imag()) <= std::max(disk.radius, 1e-12L);
        if (!real && disk.center.imag() < 0) continue;
        const long double bound = 1.1L * digit_bound / (1 - disk.modulus_bound()) * q;
        const auto p = powers(real ? std::complex<long double>(disk.center.real(), 0) : disk.center);
        std::vector<long double> re, im;
        for (const auto& x : p) {
            re.push_back(x.real());
            im.push_back(x.imag());
        }
        rows.push_back(re);
        mid.push_back(0);
        half.push_back(bound);
        if (!real) {
            rows.push_back(im);
            mid.push_back(0);
            half.push_back(bound);
        }
    }
    if (static_cast<int>(rows.size()) != m) {
        throw Error(ErrorCode::NotPisot, "could not pair the complex conjugates of " + ctx->poly().to_string());
    }

    const auto inv = invert(rows);
    std::vector<long> lo(static_cast<std::size_t>(m)), hi(static_cast<std::size_t>(m));
    long double volume = 1;
    for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j) {
        long double center = 0, width = 0;
        for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k) {
            center += inv[j][k] * mid[k];
            width += std::fabs(inv[j][k]) * half[k];
        }
        lo[j] = static_cast<long>(std::ceil(center - width - 1e-6L));
        hi[j] = static_cast<long>(std::floor(center + width + 1e-6L));
        volume *= static_cast<long double>(hi[j] - lo[j] + 1);
    }
    if (volume > static_cast<long double>(budget)) {
        std::ostringstream os;
        os << "attractor box holds " << static_cast<double>(volume) << " lattice points, budget " << budget;
        throw Error(ErrorCode::EnumerationBudgetExceeded, os.str());
    }

    AttractorSet out;
    out.denominator = denominator;
    std::set<DigitWord> cycles;
    std::vector<long> z(lo);
    const Rational inv_q(1, denominator);
    for (;;) {
        ++out.candidates;
        // Cheap floating filter before any exact work.
        bool inside = true;
        for (std::size_t r = 0; r < rows.size() && inside; ++r) {
            long double s = 0;
            for (std::size_t k = 0; k < z.size(); ++k) s += rows[r][k] * static_cast<long double>(z[k]);
            const long double slack = 1e-9L * (1 + std::fabs(s));
            inside = s >= mid[r] - half[r] - slack && s <= mid[r] + half[r] + slack;
        }
        if (inside) {
            std::vector<Rational> coeffs;
            for (long v : z) coeffs.emplace_back(Rational(v) * inv_q);
            const FieldElement y(ctx, std::move(coeffs));
            if (sign(y) >= 0 && compare(y, Rational(1)) == std::strong_ordering::less) {
                cycles.insert(least_rotation(greedy_expand(base, y).per()));
            }
        }
        std::size_t j = 0;
        while (j < z.size() && z[j] == hi[j]) {
            z[j] = lo[j];
            ++j;
        }
        if (j == z.size()) break;
        ++z[j];
    }
    out.cycles.assign(cycles.begin(), cycles.end());
    for (const auto& c : out.cycles) out.representatives.push_back(value(ctx, PeriodicWord({}, c)));
    return out;
}

const AttractorSet& PisotBase::attractor() const {
    std::call_once(attractor_once_, [this] {
        attractor_ = std::make_shared<const AttractorSet>(attractor_periods(*this, 1));
    });
    return *attractor_;
}

const AttractorSet& PisotBase::normalization_attractor() const {
    std::call_once(norm_attractor_once_, [this] {
        norm_attractor_ = std::make_shared<const AttractorSet>(attractor_periods(*this, q_));
    });
    return *norm_attractor_;
}

}  // namespace betanorm
