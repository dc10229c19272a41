#pragma once

// Exact arithmetic in Q(beta) for a Pisot number beta, with comparisons
// under the real embedding that sends beta to its dominant root.

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace betanorm {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q" into a canonical rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Monic integer polynomial c_0 + c_1 x + ... + x^m, m >= 2, c_0 != 0.
class MinimalPolynomial {
public:
    explicit MinimalPolynomial(std::vector<Integer> coeffs);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const Integer& coeff(int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }

    Rational eval(const Rational& x) const;
    int sign_at(const Rational& x) const { return sgn(eval(x)); }

    /// Integer roots (the only possible rational roots of a monic polynomial).
    std::vector<Integer> integer_roots() const;

    std::string to_string() const;

    friend bool operator==(const MinimalPolynomial&, const MinimalPolynomial&) = default;

private:
    std::vector<Integer> coeffs_;
};

/// Disk in the complex plane guaranteed to contain one conjugate of beta.
struct RootDisk {
    std::complex<long double> center;
    long double radius = 0;

    long double modulus_bound() const { return std::abs(center) + radius; }
};

/// Largest supported extension degree.
inline constexpr int kMaxDegree = 12;

/// Immutable description of Q(beta): the minimal polynomial, an isolating
/// interval for the dominant real root and certified disks for the conjugates.
/// Construction validates the Pisot property. Shared read-only between
/// elements; the refinement cache is internally synchronized.
class FieldContext {
public:
    static std::shared_ptr<const FieldContext> create(MinimalPolynomial poly);

    const MinimalPolynomial& poly() const noexcept { return poly_; }
    int degree() const noexcept { return poly_.degree(); }

    long double beta_approx() const noexcept { return beta_; }
    const std::vector<RootDisk>& conjugates() const noexcept { return conjugates_; }

    /// Rational interval [lo, hi] containing beta with hi - lo <= 2^-bits.
    std::pair<Rational, Rational> beta_interval(int bits) const;

    /// Coefficients of beta^-1 in the power basis.
    const std::vector<Rational>& beta_inverse() const noexcept { return beta_inv_; }

    bool is_unit() const { return abs(poly_.coeff(0)) == 1; }

private:
    FieldContext(MinimalPolynomial poly, long double beta, std::vector<RootDisk> conj,
                 Rational lo, Rational hi);

    MinimalPolynomial poly_;
    long double beta_;
    std::vector<RootDisk> conjugates_;
    std::vector<Rational> beta_inv_;

    mutable std::mutex mutex_;
    mutable Rational lo_, hi_;
};

using ContextPtr = std::shared_ptr<const FieldContext>;

/// An element of Q(beta) in canonical form: m rational coefficients against
/// 1, beta, ..., beta^(m-1). Equality is coefficient-wise.
class FieldElement {
public:
    FieldElement() = default;
    explicit FieldElement(ContextPtr ctx);
    FieldElement(ContextPtr ctx, std::vector<Rational> coeffs);
    FieldElement(ContextPtr ctx, const Rational& q);

    static FieldElement beta(ContextPtr ctx);

    const ContextPtr& context() const noexcept { return ctx_; }
    const std::vector<Rational>& coeffs() const noexcept { return c_; }
    int degree() const noexcept { return static_cast<int>(c_.size()); }

    bool is_zero() const;
    /// True iff the element lies in Z[beta].
    bool is_integral() const;
    /// Least common multiple of the coefficient denominators.
    Integer denominator() const;

    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator+=(const Rational& q);
    FieldElement& operator-=(const Rational& q);
    FieldElement& operator*=(const Rational& q);

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator+(FieldElement a, const Rational& q) { return a += q; }
    friend FieldElement operator-(FieldElement a, const Rational& q) { return a -= q; }
    friend FieldElement operator*(FieldElement a, const Rational& q) { return a *= q; }
    FieldElement operator-() const;

    FieldElement mul_beta() const;
    FieldElement mul_beta_inv() const;
    FieldElement inverse() const;
    /// Integer power; negative exponents require a nonzero element.
    FieldElement pow(long e) const;
    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

    /// Floating value under the real embedding (not exact).
    long double approx() const;
    /// Value at a complex conjugate (floating).
    std::complex<long double> approx_at(std::complex<long double> z) const;

    std::size_t hash() const;
    std::string to_string() const;

    friend bool operator==(const FieldElement& a, const FieldElement& b);

private:
    void check_same(const FieldElement& o) const;
    void reduce(std::vector<Rational>& wide) const;

    ContextPtr ctx_;
    std::vector<Rational> c_;
};

inline std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << '[' << a.to_string() << ']'; }

struct FieldElementHash {
    std::size_t operator()(const FieldElement& e) const { return e.hash(); }
};

/// Sign of the element under the real embedding; exact.
int sign(const FieldElement& a);

/// Exact order under the real embedding.
std::strong_ordering compare(const FieldElement& a, const FieldElement& b);
std::strong_ordering compare(const FieldElement& a, const Rational& b);

/// The integer k with k <= a < k + 1.
Integer floor(const FieldElement& a);

/// Upper bounds on |a(beta_i)| for every non-dominant conjugate beta_i.
std::vector<Rational> conjugate_bound(const FieldElement& a);

/// Parses "p0/q0,p1/q1,..." (power-basis coefficients) or a single rational.
FieldElement parse_element(const ContextPtr& ctx, std::string_view text);

}  // namespace betanorm
