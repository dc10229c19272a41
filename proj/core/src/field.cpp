#include "betanorm/field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "betanorm/error.hpp"

namespace betanorm {

namespace {

using Complex = std::complex<long double>;

Rational from_long_double(long double x) {
    // split into two doubles so that no bits of the long double are lost
    const double hi = static_cast<double>(x);
    const double lo = static_cast<double>(x - static_cast<long double>(hi));
    Rational r(hi);
    r += Rational(lo);
    r.canonicalize();
    return r;
}

long double to_long_double(const Rational& q) {
    return static_cast<long double>(q.get_d());
}

Complex horner(const std::vector<long double>& a, Complex z) {
    Complex acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * z + a[i];
    return acc;
}

Complex horner_derivative(const std::vector<long double>& a, Complex z) {
    Complex acc = 0;
    for (std::size_t i = a.size(); i-- > 1;) acc = acc * z + static_cast<long double>(i) * a[i];
    return acc;
}

// Aberth-Ehrlich simultaneous iteration for a monic polynomial.
std::vector<Complex> aberth_roots(const std::vector<long double>& a) {
    const int m = static_cast<int>(a.size()) - 1;
    long double cauchy = 0;
    for (int i = 0; i < m; ++i) cauchy = std::max(cauchy, std::abs(a[static_cast<std::size_t>(i)]));
    const long double radius = 1 + cauchy;

    std::vector<Complex> z(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const long double angle = 2 * std::numbers::pi_v<long double> * k / m + 0.4L;
        z[static_cast<std::size_t>(k)] = std::polar(radius * 0.9L, angle);
    }
    for (int iter = 0; iter < 2000; ++iter) {
        long double worst = 0;
        for (int k = 0; k < m; ++k) {
            auto& zk = z[static_cast<std::size_t>(k)];
            const Complex p = horner(a, zk);
            const Complex dp = horner_derivative(a, zk);
            if (p == Complex(0)) continue;
            const Complex ratio = p / dp;
            Complex s = 0;
            for (int j = 0; j < m; ++j) {
                if (j != k) s += 1.0L / (zk - z[static_cast<std::size_t>(j)]);
            }
            const Complex w = ratio / (1.0L - ratio * s);
            zk -= w;
            worst = std::max(worst, std::abs(w) / (1 + std::abs(zk)));
        }
        if (worst < 1e-19L) break;
    }
    for (auto& zk : z) {
        for (int it = 0; it < 3; ++it) {
            const Complex dp = horner_derivative(a, zk);
            if (dp == Complex(0)) break;
            zk -= horner(a, zk) / dp;
        }
    }
    return z;
}

// Weierstrass inclusion radii: the union of the disks contains every root,
// and a disk disjoint from the others contains exactly one.
std::vector<long double> inclusion_radii(const std::vector<long double>& a,
                                         const std::vector<Complex>& z) {
    const auto m = z.size();
    const long double eps = std::numeric_limits<long double>::epsilon();
    std::vector<long double> r(m);
    for (std::size_t k = 0; k < m; ++k) {
        long double magnitude = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            magnitude += std::abs(a[i]) * std::pow(std::abs(z[k]), static_cast<long double>(i));
        }
        const long double residual =
            std::abs(horner(a, z[k])) + 4 * static_cast<long double>(a.size()) * eps * magnitude;
        long double denom = 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (j != k) denom *= std::abs(z[k] - z[j]);
        }
        r[k] = 1.01L * static_cast<long double>(m) * residual / denom + 8 * eps * (1 + std::abs(z[k]));
    }
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (ch != ' ' && ch != '\t') s.push_back(ch);
    }
    if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
    if (s.front() == '+') s.erase(s.begin());
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    auto valid_int = [](const std::string& t, bool allow_sign) {
        if (t.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && t[0] == '-') i = 1;
        if (i == t.size()) return false;
        return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(i), t.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!valid_int(num, true) || !valid_int(den, false)) {
        throw Error(ErrorCode::ParseError, "malformed rational '" + std::string(text) + "'");
    }
    Rational q{Integer(num), Integer(den)};
    if (q.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

// ---------------------------------------------------------------------------
// MinimalPolynomial

MinimalPolynomial::MinimalPolynomial(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 3) {
        throw Error(ErrorCode::InvalidArgument, "minimal polynomial must have degree >= 2");
    }
    if (coeffs_.back() != 1) {
        throw Error(ErrorCode::NotMonic, "leading coefficient must be 1, got " + coeffs_.back().get_str());
    }
    if (degree() > kMaxDegree) {
        throw Error(ErrorCode::InvalidArgument,
                    "degree " + std::to_string(degree()) + " exceeds supported maximum " +
                        std::to_string(kMaxDegree));
    }
}

Rational MinimalPolynomial::eval(const Rational& x) const {
    Rational acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        acc = acc * x + coeffs_[i];
    }
    return acc;
}

std::vector<Integer> MinimalPolynomial::integer_roots() const {
    std::vector<Integer> roots;
    auto test = [&](const Integer& r) {
        if (eval(Rational(r)) == 0) roots.push_back(r);
    };
    const Integer c0 = abs(coeffs_[0]);
    if (c0 == 0) {
        roots.push_back(0);
        return roots;
    }
    for (Integer k = 1; k * k <= c0; ++k) {
        if (c0 % k != 0) continue;
        const Integer other = c0 / k;
        test(k);
        test(-k);
        if (other != k) {
            test(other);
            test(-other);
        }
    }
    return roots;
}

std::string MinimalPolynomial::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ',';
        os << coeffs_[i].get_str();
    }
    os << ']';
    return os.str();
}

// ---------------------------------------------------------------------------
// FieldContext

std::shared_ptr<const FieldContext> FieldContext::create(MinimalPolynomial poly) {
    const auto roots_int = poly.integer_roots();
    if (!roots_int.empty()) {
        throw Error(ErrorCode::Reducible,
                    poly.to_string() + " has the rational root " + roots_int.front().get_str());
    }

    const int m = poly.degree();
    std::vector<long double> a(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) a[static_cast<std::size_t>(i)] = static_cast<long double>(poly.coeff(i).get_d());

    const auto z = aberth_roots(a);
    const auto r = inclusion_radii(a, z);

    int dominant = -1;
    int real_above_one = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const bool real = std::abs(z[k].imag()) <= std::max(r[k], 1e-9L * (1 + std::abs(z[k])));
        if (real && z[k].real() > 1) {
            ++real_above_one;
            dominant = static_cast<int>(k);
        }
    }
    if (real_above_one == 0) {
        throw Error(ErrorCode::NoDominantRealRoot, poly.to_string() + " has no real root > 1");
    }
    if (real_above_one > 1) {
        throw Error(ErrorCode::NotPisot, poly.to_string() + " has several real roots > 1");
    }

    std::vector<RootDisk> conj;
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (static_cast<int>(k) == dominant) continue;
        RootDisk disk{z[k], r[k]};
        if (disk.modulus_bound() >= 1) {
            std::ostringstream os;
            os << poly.to_string() << " has a conjugate of modulus ~" << static_cast<double>(std::abs(z[k]))
               << " (bound " << static_cast<double>(disk.modulus_bound()) << ")";
            throw Error(ErrorCode::NotPisot, os.str());
        }
        conj.push_back(disk);
    }

    // Polish beta in long double.
    long double beta = z[static_cast<std::size_t>(dominant)].real();
    for (int it = 0; it < 6; ++it) {
        const long double p = horner(a, Complex(beta)).real();
        const long double dp = horner_derivative(a, Complex(beta)).real();
        if (dp == 0) break;
        beta -= p / dp;
    }

    // Isolating interval: beta is the only real root > 1 and p < 0 on (1, beta).
    const long double width = std::max(4 * r[static_cast<std::size_t>(dominant)], 1e-15L * beta);
    Rational lo = from_long_double(beta - width);
    Rational hi = from_long_double(beta + width);
    if (lo < 1) lo = 1;
    if (!(poly.sign_at(lo) < 0 && poly.sign_at(hi) > 0)) {
        lo = 1;
        Integer bound = 1;
        for (int i = 0; i < m; ++i) bound = std::max(bound, Integer(abs(poly.coeff(i))));
        hi = Rational(bound + 1);
        if (!(poly.sign_at(lo) < 0 && poly.sign_at(hi) > 0)) {
            throw Error(ErrorCode::NotPisot, "could not isolate the dominant root of " + poly.to_string());
        }
    }

    return std::shared_ptr<const FieldContext>(
        new FieldContext(std::move(poly), beta, std::move(conj), std::move(lo), std::move(hi)));
}

FieldContext::FieldContext(MinimalPolynomial poly, long double beta, std::vector<RootDisk> conj,
                           Rational lo, Rational hi)
    : poly_(std::move(poly)), beta_(beta), conjugates_(std::move(conj)), lo_(std::move(lo)), hi_(std::move(hi)) {
    const int m = poly_.degree();
    beta_inv_.assign(static_cast<std::size_t>(m), Rational(0));
    const Rational c0 = poly_.coeff(0);
    for (int j = 0; j + 1 < m; ++j) {
        beta_inv_[static_cast<std::size_t>(j)] = -Rational(poly_.coeff(j + 1)) / c0;
    }
    beta_inv_[static_cast<std::size_t>(m - 1)] = -1 / c0;
    for (auto& q : beta_inv_) q.canonicalize();
}

std::pair<Rational, Rational> FieldContext::beta_interval(int bits) const {
    Rational target = 1;
    mpq_div_2exp(target.get_mpq_t(), target.get_mpq_t(), static_cast<mp_bitcnt_t>(bits));
    std::lock_guard lock(mutex_);
    while (hi_ - lo_ > target) {
        Rational mid = (lo_ + hi_) / 2;
        mid.canonicalize();
        if (poly_.sign_at(mid) < 0) {
            lo_ = mid;
        } else {
            hi_ = mid;
        }
    }
    return {lo_, hi_};
}

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(ContextPtr ctx) : ctx_(std::move(ctx)) {
    c_.assign(static_cast<std::size_t>(ctx_->degree()), Rational(0));
}

FieldElement::FieldElement(ContextPtr ctx, std::vector<Rational> coeffs)
    : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    for (auto& q : c_) q.canonicalize();
    const auto m = static_cast<std::size_t>(ctx_->degree());
    if (c_.size() > m) {
        reduce(c_);
    } else {
        c_.resize(m, Rational(0));
    }
}

FieldElement::FieldElement(ContextPtr ctx, const Rational& q) : FieldElement(std::move(ctx)) {
    c_[0] = q;
    c_[0].canonicalize();
}

FieldElement FieldElement::beta(ContextPtr ctx) {
    FieldElement e(std::move(ctx));
    e.c_[1] = 1;
    return e;
}

bool FieldElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
}

bool FieldElement::is_integral() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q.get_den() == 1; });
}

Integer FieldElement::denominator() const {
    Integer l = 1;
    for (const auto& q : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    return l;
}

void FieldElement::check_same(const FieldElement& o) const {
    if (!ctx_ || !o.ctx_) throw Error(ErrorCode::MixedContexts, "uninitialized field element");
    if (ctx_ != o.ctx_ && !(ctx_->poly() == o.ctx_->poly())) {
        throw Error(ErrorCode::MixedContexts,
                    ctx_->poly().to_string() + " vs " + o.ctx_->poly().to_string());
    }
}

void FieldElement::reduce(std::vector<Rational>& wide) const {
    const int m = ctx_->degree();
    const auto& p = ctx_->poly();
    for (int k = static_cast<int>(wide.size()) - 1; k >= m; --k) {
        const Rational t = wide[static_cast<std::size_t>(k)];
        if (t == 0) continue;
        for (int i = 0; i < m; ++i) {
            wide[static_cast<std::size_t>(k - m + i)] -= t * p.coeff(i);
        }
    }
    wide.resize(static_cast<std::size_t>(m));
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    check_same(o);
    const auto m = c_.size();
    std::vector<Rational> wide(2 * m - 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            if (o.c_[j] != 0) wide[i + j] += c_[i] * o.c_[j];
        }
    }
    reduce(wide);
    c_ = std::move(wide);
    return *this;
}

FieldElement& FieldElement::operator+=(const Rational& q) {
    c_[0] += q;
    return *this;
}

FieldElement& FieldElement::operator-=(const Rational& q) {
    c_[0] -= q;
    return *this;
}

FieldElement& FieldElement::operator*=(const Rational& q) {
    for (auto& x : c_) x *= q;
    return *this;
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

FieldElement FieldElement::mul_beta() const {
    const int m = ctx_->degree();
    const auto& p = ctx_->poly();
    FieldElement r(ctx_);
    const Rational top = c_[static_cast<std::size_t>(m - 1)];
    for (int i = m - 1; i >= 1; --i) r.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i - 1)];
    if (top != 0) {
        for (int i = 0; i < m; ++i) r.c_[static_cast<std::size_t>(i)] -= top * p.coeff(i);
    }
    return r;
}

FieldElement FieldElement::mul_beta_inv() const {
    const auto m = c_.size();
    FieldElement r(ctx_);
    for (std::size_t i = 1; i < m; ++i) r.c_[i - 1] = c_[i];
    if (c_[0] != 0) {
        const auto& inv = ctx_->beta_inverse();
        for (std::size_t i = 0; i < m; ++i) r.c_[i] += c_[0] * inv[i];
    }
    return r;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw Error(ErrorCode::InvalidArgument, "inverse of zero");
    const auto m = c_.size();
    // Column j of the multiplication matrix holds the coefficients of a * beta^j.
    std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(m + 1, Rational(0)));
    FieldElement col = *this;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) rows[i][j] = col.c_[i];
        col = col.mul_beta();
    }
    rows[0][m] = 1;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t piv = k;
        while (piv < m && rows[piv][k] == 0) ++piv;
        if (piv == m) throw Error(ErrorCode::InvalidArgument, "singular multiplication matrix");
        std::swap(rows[k], rows[piv]);
        const Rational pv = rows[k][k];
        for (auto& x : rows[k]) x /= pv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == k || rows[i][k] == 0) continue;
            const Rational f = rows[i][k];
            for (std::size_t j = k; j <= m; ++j) rows[i][j] -= f * rows[k][j];
        }
    }
    std::vector<Rational> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = rows[i][m];
    return FieldElement(ctx_, std::move(out));
}

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement result(ctx_, Rational(1));
    FieldElement base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

long double FieldElement::approx() const {
    const long double beta = ctx_->beta_approx();
    long double acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * beta + to_long_double(c_[i]);
    return acc;
}

std::complex<long double> FieldElement::approx_at(std::complex<long double> z) const {
    std::complex<long double> acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + to_long_double(c_[i]);
    return acc;
}

std::size_t FieldElement::hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (const auto& q : c_) {
        mix(static_cast<std::size_t>(mpz_get_si(q.get_num_mpz_t())));
        mix(static_cast<std::size_t>(mpz_get_ui(q.get_den_mpz_t())));
        mix(static_cast<std::size_t>(mpz_size(q.get_num_mpz_t())));
    }
    return h;
}

std::string FieldElement::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ',';
        s += c_[i].get_str();
    }
    return s;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    return a.c_ == b.c_;
}

// ---------------------------------------------------------------------------
// Comparisons

namespace {

// Floating evaluation with a rigorous bound on its absolute error; returns
// false when the coefficients do not fit a double.
bool fast_eval(const FieldElement& a, double& value, double& bound) {
    const double beta = static_cast<double>(a.context()->beta_approx());
    const auto& c = a.coeffs();
    double power = 1;
    double sum = 0;
    double magnitude = 0;
    for (const auto& q : c) {
        const double t = q.get_d() * power;
        sum += t;
        magnitude += std::abs(t);
        power *= beta;
    }
    if (!std::isfinite(sum) || !std::isfinite(magnitude)) return false;
    value = sum;
    bound = magnitude * (static_cast<double>(c.size()) + 4) * 0x1p-50 + 0x1p-1000;
    return true;
}

// Sign by interval evaluation at increasing precision; a must be nonzero.
int interval_sign(const FieldElement& a) {
    const auto& ctx = *a.context();
    for (int bits = 64;; bits *= 2) {
        const auto [lo, hi] = ctx.beta_interval(bits);
        Rational low = 0, high = 0, plo = 1, phi = 1;
        for (const auto& q : a.coeffs()) {
            if (q >= 0) {
                low += q * plo;
                high += q * phi;
            } else {
                low += q * phi;
                high += q * plo;
            }
            plo *= lo;
            phi *= hi;
        }
        if (low > 0) return 1;
        if (high < 0) return -1;
    }
}

}  // namespace

int sign(const FieldElement& a) {
    if (a.is_zero()) return 0;
    double v = 0, bound = 0;
    if (fast_eval(a, v, bound) && std::abs(v) > bound) return v > 0 ? 1 : -1;
    return interval_sign(a);
}

std::strong_ordering compare(const FieldElement& a, const FieldElement& b) {
    const int s = sign(a - b);
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::strong_ordering compare(const FieldElement& a, const Rational& b) {
    const int s = sign(a - b);
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

Integer floor(const FieldElement& a) {
    if (a.is_zero()) return 0;
    double v = 0, bound = 0;
    Integer k;
    const bool fast = fast_eval(a, v, bound);
    if (fast) {
        const double f = std::floor(v);
        if (v - bound >= f && v + bound < f + 1) return Integer(f);
    }
    if (fast && bound < 0.25) {
        k = Integer(std::floor(v));  // off by at most one
    } else {
        // Bracket the value with beta in [lo, hi]; since beta > 0 each term is
        // monotone in beta. Refine until the bracket spans at most one integer.
        std::size_t max_bits = 0;
        for (const auto& q : a.coeffs()) {
            max_bits = std::max(max_bits, mpz_sizeinbase(q.get_num_mpz_t(), 2));
        }
        for (int bits = 64 + static_cast<int>(max_bits);; bits *= 2) {
            const auto [lo, hi] = a.context()->beta_interval(bits);
            Rational low = 0, high = 0, plo = 1, phi = 1;
            for (const auto& q : a.coeffs()) {
                if (sgn(q) >= 0) {
                    low += q * plo;
                    high += q * phi;
                } else {
                    low += q * phi;
                    high += q * plo;
                }
                plo *= lo;
                phi *= hi;
            }
            Integer fl, fh;
            mpz_fdiv_q(fl.get_mpz_t(), low.get_num_mpz_t(), low.get_den_mpz_t());
            mpz_fdiv_q(fh.get_mpz_t(), high.get_num_mpz_t(), high.get_den_mpz_t());
            if (fl == fh) return fl;
            if (fh - fl <= 1) {
                k = fl;
                break;
            }
        }
    }
    while (sign(a - Rational(k)) < 0) --k;
    while (sign(a - Rational(k + 1)) >= 0) ++k;
    return k;
}

std::vector<Rational> conjugate_bound(const FieldElement& a) {
    std::vector<Rational> out;
    for (const auto& disk : a.context()->conjugates()) {
        const long double zabs = std::abs(disk.center);
        long double lipschitz = 0, magnitude = 0;
        for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
            const long double q = std::abs(to_long_double(a.coeffs()[i]));
            const auto e = static_cast<long double>(i);
            lipschitz += q * (std::pow(zabs + disk.radius, e) - std::pow(zabs, e));
            magnitude += q * std::pow(zabs + disk.radius, e);
        }
        const long double bound =
            std::abs(a.approx_at(disk.center)) + lipschitz + 1e-15L * magnitude;
        const double up = std::nextafter(static_cast<double>(bound), std::numeric_limits<double>::infinity());
        out.emplace_back(up);
    }
    return out;
}

FieldElement parse_element(const ContextPtr& ctx, std::string_view text) {
    std::vector<Rational> coeffs;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        coeffs.push_back(parse_rational(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (static_cast<int>(coeffs.size()) > ctx->degree()) {
        throw Error(ErrorCode::ParseError, "more coefficients than the field degree");
    }
    return FieldElement(ctx, std::move(coeffs));
}

}  // namespace betanorm
