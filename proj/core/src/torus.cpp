#include "betanorm/torus.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "betanorm/error.hpp"

namespace betanorm {

namespace {

using cld = std::complex<long double>;

constexpr std::size_t kMaxTruncation = 100000;

long double frac(long double v) { return v - std::floor(v); }

long double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    long double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double delta = frac(a[i] - b[i]);
        worst = std::max(worst, std::min(delta, 1 - delta));
    }
    return worst;
}

}  // namespace

TorusMap::TorusMap(const PisotBase& base, std::vector<long> v) {
    const auto& ctx = base.context();
    if (!ctx->is_unit()) {
        throw Error(ErrorCode::NotUnit, "torus map needs a unit, minimal polynomial " + ctx->poly().to_string());
    }
    m_ = ctx->degree();
    const auto& poly = ctx->poly();
    for (int i = 1; i <= m_; ++i) first_row_.push_back(-poly.coeff(m_ - i).get_si());
    beta_ = ctx->beta_approx();
    rho_ = 1 / beta_;

    std::vector<cld> eigen{cld(beta_, 0)};
    for (const auto& disk : ctx->conjugates()) {
        eigen.push_back(disk.center);
        rho_ = std::max(rho_, static_cast<long double>(disk.modulus_bound()));
    }
    // v = sum_i alpha_i u(lambda_i) with alpha_i = <w_i, v> / <w_i, u_i>, w_i the
    // left eigenvector: w_1 = 1, w_(j+1) = lambda w_j - k_j.
    for (std::size_t i = 0; i < eigen.size(); ++i) {
        const cld z = eigen[i];
        std::vector<cld> w(static_cast<std::size_t>(m_)), u(static_cast<std::size_t>(m_));
        w[0] = 1;
        for (int j = 1; j < m_; ++j) w[static_cast<std::size_t>(j)] = z * w[static_cast<std::size_t>(j - 1)] - static_cast<long double>(first_row_[static_cast<std::size_t>(j - 1)]);
        cld p = 1;
        for (int j = m_; j-- > 0;) {
            u[static_cast<std::size_t>(j)] = p;
            p *= z;
        }
        cld wv = 0, wu = 0;
        for (int j = 0; j < m_; ++j) {
            wv += w[static_cast<std::size_t>(j)] * static_cast<long double>(v[static_cast<std::size_t>(j)]);
            wu += w[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
        }
        lambda_.push_back(z);
        coef_.push_back(wv / wu);
    }
}

TorusPoint TorusMap::operator()(long first, const std::vector<int>& w) const {
    std::vector<cld> acc(static_cast<std::size_t>(m_), 0);
    auto add = [&](cld scale, cld z) {
        cld p = scale;
        for (int j = m_; j-- > 0;) {
            acc[static_cast<std::size_t>(j)] += p;
            p *= z;
        }
    };
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] == 0) continue;
        const long n = first + static_cast<long>(k);
        const auto digit = static_cast<long double>(w[k]);
        if (n <= 0) {
            for (std::size_t i = 1; i < lambda_.size(); ++i) add(digit * coef_[i] * std::pow(lambda_[i], -n), lambda_[i]);
        } else {
            add(-digit * coef_[0] * std::pow(lambda_[0], -n), lambda_[0]);
        }
    }
    TorusPoint out;
    for (const auto& a : acc) out.push_back(frac(a.real()));
    return out;
}

TorusPoint TorusMap::apply(const TorusPoint& p) const {
    TorusPoint out(p.size());
    long double top = 0;
    for (int j = 0; j < m_; ++j) top += static_cast<long double>(first_row_[static_cast<std::size_t>(j)]) * p[static_cast<std::size_t>(j)];
    out[0] = frac(top);
    for (int j = 1; j < m_; ++j) out[static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j - 1)];
    return out;
}

std::size_t TorusMap::truncation(int max_digit, double tolerance) const {
    // max_digit * rho^J / (1 - rho) < tolerance / 10
    const long double need = std::log(tolerance / 10 * (1 - rho_) / std::max(max_digit, 1)) / std::log(rho_);
    if (!(need < static_cast<long double>(kMaxTruncation))) {
        std::ostringstream os;
        os << "tail bound needs " << static_cast<double>(need) << " terms at contraction " << static_cast<double>(rho_);
        throw Error(ErrorCode::HomoclinicDecayTooSlow, os.str());
    }
    return static_cast<std::size_t>(std::max<long double>(0, std::ceil(need)));
}

namespace {

struct Sides {
    TorusMap eps_map, x_map;
    long first;
    std::vector<int> eps;  // n(x) from coordinate `first`, tail included up to the truncation
    std::size_t truncation;
};

// t = stable part of (d-1) e_1 for the normalized side, t_d = stable part of
// (M - I) e_1 for the digit side: t_d = c t, which carries the scaling of the
// value by c = (beta - 1)/(d - 1).
Sides prepare(const PisotBase& base, const Window& x, double tolerance) {
    const int m = base.context()->degree();
    std::vector<long> v(static_cast<std::size_t>(m), 0), vd(static_cast<std::size_t>(m), 0);
    v[0] = base.d() - 1;
    const auto& poly = base.context()->poly();
    vd[0] = -poly.coeff(m - 1).get_si() - 1;  // first column of M - I
    if (m > 1) vd[1] = 1;
    Sides s{TorusMap(base, v), TorusMap(base, vd), x.first_index(), {}, 0};
    s.truncation = s.eps_map.truncation(std::max(base.digit_bound(), base.d() - 1), tolerance);

    // Zero to the left of the window: the two-sided normalization is the
    // greedy expansion of the scaled window value, placed from x.first_index().
    const PeriodicWord word = normalize_finite(base, x.digits).word;
    const std::size_t span = word.is_finite() ? word.pre().size()
                                              : std::max(word.pre().size(), x.digits.size()) + s.truncation;
    for (std::size_t i = 0; i < span; ++i) s.eps.push_back(word.at(i));
    return s;
}

}  // namespace

TorusReport torus_check(const PisotBase& base, const Window& x, double tolerance) {
    const Sides s = prepare(base, x, tolerance);
    TorusReport r;
    r.truncation = s.truncation;
    r.normalized = s.eps_map(s.first, s.eps);
    r.direct = s.x_map(x.first_index(), x.digits);
    r.residual = torus_distance(r.normalized, r.direct);
    return r;
}

long double torus_equivariance(const PisotBase& base, const Window& x, double tolerance) {
    const Sides s = prepare(base, x, tolerance);
    // (shift eps)_n = eps_(n+1): the same digits read from one coordinate earlier.
    const TorusPoint shifted = s.eps_map(s.first - 1, s.eps);
    return torus_distance(shifted, s.eps_map.apply(s.eps_map(s.first, s.eps)));
}

}  // namespace betanorm
