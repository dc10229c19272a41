#pragma once

// Fixed-width fast path for greedy orbits: an element z / den with z an
// integer vector in the power basis. Multiplication by beta keeps den fixed,
// so a whole orbit lives in one lattice. Every operation reports overflow
// instead of wrapping; callers fall back to FieldElement arithmetic.

#include <array>
#include <optional>

#include "betanorm/detail/cycle.hpp"
#include "betanorm/field.hpp"

namespace betanorm::detail {

using i128 = __int128;

struct LatticePoint {
    std::array<i128, kMaxDegree> z{};
    i128 den = 1;

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

Integer to_integer(i128 v);
std::optional<i128> to_i128(const Integer& v);

class Lattice {
public:
    explicit Lattice(ContextPtr ctx);

    int degree() const noexcept { return m_; }
    /// False when the polynomial coefficients are too wide for the fast path.
    bool enabled() const noexcept { return enabled_; }
    const ContextPtr& context() const noexcept { return ctx_; }

    std::optional<LatticePoint> from_field(const FieldElement& x) const;
    /// Same, forcing the given common denominator (must be a multiple of x's).
    std::optional<LatticePoint> from_field(const FieldElement& x, i128 den) const;
    FieldElement to_field(const LatticePoint& p) const;

    static bool is_zero(const LatticePoint& p) noexcept;
    /// acc += k * x; both must share the denominator.
    static bool add_scaled(LatticePoint& acc, const LatticePoint& x, i128 k) noexcept;
    bool mul_beta(LatticePoint& p) const noexcept;

    /// Exact floor of the real value.
    long floor_value(const LatticePoint& p) const;
    /// Floating value (not exact).
    long double approx(const LatticePoint& p) const noexcept;

    /// Necessary condition for a finite expansion: after cancelling common
    /// factors the denominator only contains primes dividing c_0.
    bool may_be_finite(const LatticePoint& p) const;

    /// Greedy orbit of p in [0, 1).
    Orbit greedy(const LatticePoint& p, std::size_t max_states) const;

private:
    ContextPtr ctx_;
    int m_;
    std::array<i128, kMaxDegree + 1> c_{};
    std::array<long double, kMaxDegree> pow_{};
    i128 c0_abs_ = 1;
    bool enabled_ = true;
};

}  // namespace betanorm::detail
