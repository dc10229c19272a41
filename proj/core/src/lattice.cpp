#include "betanorm/detail/lattice.hpp"

#include <cmath>

namespace betanorm::detail {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Integer to_integer(i128 v) {
    const bool neg = v < 0;
    const unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    Integer r = static_cast<unsigned long>(u >> 64);
    r <<= 64;
    r += static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL);
    return neg ? Integer(-r) : r;
}

std::optional<i128> to_i128(const Integer& v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 125) return std::nullopt;
    const Integer a = abs(v);
    const Integer hi = a >> 64;
    const Integer lo = a - (hi << 64);
    i128 r = static_cast<i128>(hi.get_ui());
    r = (r << 64) | static_cast<i128>(lo.get_ui());
    return sgn(v) < 0 ? -r : r;
}

Lattice::Lattice(ContextPtr ctx) : ctx_(std::move(ctx)), m_(ctx_->degree()) {
    for (int i = 0; i <= m_; ++i) {
        const Integer& c = ctx_->poly().coeff(i);
        if (mpz_sizeinbase(c.get_mpz_t(), 2) > 40) enabled_ = false;
        c_[static_cast<std::size_t>(i)] = enabled_ ? *to_i128(c) : 0;
    }
    c0_abs_ = abs128(c_[0]);
    long double p = 1;
    for (int i = 0; i < m_; ++i) {
        pow_[static_cast<std::size_t>(i)] = p;
        p *= ctx_->beta_approx();
    }
}

std::optional<LatticePoint> Lattice::from_field(const FieldElement& x) const {
    const auto den = to_i128(x.denominator());
    if (!den) return std::nullopt;
    return from_field(x, *den);
}

std::optional<LatticePoint> Lattice::from_field(const FieldElement& x, i128 den) const {
    LatticePoint p;
    p.den = den;
    const Integer D = to_integer(den);
    for (int i = 0; i < m_; ++i) {
        const Rational scaled = x.coeffs()[static_cast<std::size_t>(i)] * D;
        if (scaled.get_den() != 1) return std::nullopt;
        const auto z = to_i128(scaled.get_num());
        if (!z) return std::nullopt;
        p.z[static_cast<std::size_t>(i)] = *z;
    }
    return p;
}

FieldElement Lattice::to_field(const LatticePoint& p) const {
    std::vector<Rational> c(static_cast<std::size_t>(m_));
    const Integer D = to_integer(p.den);
    for (int i = 0; i < m_; ++i) {
        c[static_cast<std::size_t>(i)] = Rational(to_integer(p.z[static_cast<std::size_t>(i)]), D);
    }
    return FieldElement(ctx_, std::move(c));
}

bool Lattice::is_zero(const LatticePoint& p) noexcept {
    for (const auto& v : p.z) {
        if (v != 0) return false;
    }
    return true;
}

bool Lattice::add_scaled(LatticePoint& acc, const LatticePoint& x, i128 k) noexcept {
    for (std::size_t i = 0; i < acc.z.size(); ++i) {
        i128 t;
        if (__builtin_mul_overflow(x.z[i], k, &t)) return false;
        if (__builtin_add_overflow(acc.z[i], t, &acc.z[i])) return false;
    }
    return true;
}

bool Lattice::mul_beta(LatticePoint& p) const noexcept {
    const auto m = static_cast<std::size_t>(m_);
    const i128 top = p.z[m - 1];
    for (std::size_t i = m - 1; i >= 1; --i) p.z[i] = p.z[i - 1];
    p.z[0] = 0;
    if (top == 0) return true;
    for (std::size_t i = 0; i < m; ++i) {
        i128 t;
        if (__builtin_mul_overflow(top, c_[i], &t)) return false;
        if (__builtin_sub_overflow(p.z[i], t, &p.z[i])) return false;
    }
    return true;
}

long double Lattice::approx(const LatticePoint& p) const noexcept {
    long double s = 0;
    for (int i = 0; i < m_; ++i) {
        s += static_cast<long double>(p.z[static_cast<std::size_t>(i)]) * pow_[static_cast<std::size_t>(i)];
    }
    return s / static_cast<long double>(p.den);
}

long Lattice::floor_value(const LatticePoint& p) const {
    long double s = 0, mag = 0;
    for (int i = 0; i < m_; ++i) {
        const long double t = static_cast<long double>(p.z[static_cast<std::size_t>(i)]) * pow_[static_cast<std::size_t>(i)];
        s += t;
        mag += std::fabs(t);
    }
    const long double den = static_cast<long double>(p.den);
    const long double v = s / den;
    const long double err = mag * (4 * m_ + 8) * 0x1p-62L / den + 0x1p-200L;
    const long double lo = std::floor(v - err), hi = std::floor(v + err);
    if (lo == hi && std::fabs(lo) < 0x1p62L) return static_cast<long>(lo);
    return floor(to_field(p)).get_si();
}

bool Lattice::may_be_finite(const LatticePoint& p) const {
    i128 g = p.den;
    for (int i = 0; i < m_; ++i) g = gcd128(g, p.z[static_cast<std::size_t>(i)]);
    i128 rest = abs128(p.den / g);
    for (i128 h = gcd128(rest, c0_abs_); h > 1; h = gcd128(rest, c0_abs_)) rest /= h;
    return rest == 1;
}

Orbit Lattice::greedy(const LatticePoint& start, std::size_t max_states) const {
    auto step = [this](const LatticePoint& y, int& digit) -> std::optional<LatticePoint> {
        LatticePoint w = y;
        if (!mul_beta(w)) return std::nullopt;
        const long k = floor_value(w);
        i128 t;
        if (__builtin_mul_overflow(static_cast<i128>(k), w.den, &t)) return std::nullopt;
        if (__builtin_sub_overflow(w.z[0], t, &w.z[0])) return std::nullopt;
        digit = static_cast<int>(k);
        return w;
    };
    return brent_orbit(start, step, [](const LatticePoint& y) { return is_zero(y); }, max_states);
}

}  // namespace betanorm::detail
