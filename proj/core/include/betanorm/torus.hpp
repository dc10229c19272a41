#pragma once

#include <cstddef>
#include <complex>
#include <vector>

#include "betanorm/base.hpp"
#include "betanorm/normalization.hpp"

namespace betanorm {

/// Point of R^m / Z^m, coordinates in [0, 1).
using TorusPoint = std::vector<long double>;

/// Sums sum_n w_n T^-n t on the torus of the companion matrix of a unit
/// Pisot number. The homoclinic point t is the stable component of an integer
/// vector v, t = v - (unstable part of v); its orbit is evaluated through the
/// eigen-expansion of v so that no term loses precision to cancellation.
class TorusMap {
public:
    /// Throws NotUnit unless the constant term of the minimal polynomial is +-1.
    TorusMap(const PisotBase& base, std::vector<long> v);

    /// sum_{n = first}^{first + size - 1} w[n - first] T^-n t, reduced mod 1.
    TorusPoint operator()(long first, const std::vector<int>& w) const;

    /// T p (the companion matrix applied mod 1).
    TorusPoint apply(const TorusPoint& p) const;

    /// Terms needed so that (max digit) rho^J / (1 - rho) < tolerance / 10.
    std::size_t truncation(int max_digit, double tolerance) const;

private:
    int m_;
    std::vector<long> first_row_;  // k_1 ... k_m of x^m = k_1 x^(m-1) + ... + k_m
    long double beta_;
    long double rho_;  // max(largest conjugate modulus, 1 / beta)
    // T^-n t = sum_i coef_i lambda_i^-n u(lambda_i) with u(z) = (z^(m-1), ..., 1):
    // n <= 0 uses the stable eigenvalues, n >= 1 minus the dominant one.
    std::vector<std::complex<long double>> lambda_, coef_;
};

struct TorusReport {
    long double residual = 0;  // max coordinate distance mod 1
    std::size_t truncation = 0;
    TorusPoint normalized;     // F_t(n(x))
    TorusPoint direct;         // F~_{t,d}(x)
};

/// Cross-check of the torus formula for the normalization on the window x,
/// read as zero outside it. Throws NotUnit, HomoclinicDecayTooSlow.
TorusReport torus_check(const PisotBase& base, const Window& x, double tolerance);

/// |F_t(shift eps) - T F_t(eps)| mod 1 for eps = n(x).
long double torus_equivariance(const PisotBase& base, const Window& x, double tolerance);

}  // namespace betanorm
