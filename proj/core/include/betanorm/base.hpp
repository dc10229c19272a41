#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "betanorm/field.hpp"
#include "betanorm/words.hpp"

namespace betanorm {

namespace detail {
class Lattice;
}
struct AttractorSet;

/// JSON form {"minpoly": [c0, ..., 1], "d": n}.
struct BaseSpec {
    std::vector<Integer> minpoly;
    int d = 2;
};

BaseSpec parse_base_spec(const std::string& json_text);
BaseSpec load_base_spec(const std::string& path);
std::string to_json(const BaseSpec& spec);

/// Validated (beta, d) context: the field, the digit bound [beta], the
/// alphabet size d, c = (beta - 1)/(d - 1) and the quasi-greedy expansion of 1.
class PisotBase {
public:
    const ContextPtr& context() const noexcept { return ctx_; }
    const MinimalPolynomial& minpoly() const noexcept { return ctx_->poly(); }
    int d() const noexcept { return d_; }
    int digit_bound() const noexcept { return digit_bound_; }
    const FieldElement& c() const noexcept { return c_; }
    FieldElement beta() const { return FieldElement::beta(ctx_); }
    long double beta_approx() const noexcept { return ctx_->beta_approx(); }
    const PeriodicWord& quasi_greedy() const noexcept { return quasi_greedy_; }
    /// Upper bounds on the conjugate moduli, each < 1.
    std::vector<long double> conjugate_moduli() const;
    /// Denominator q of c: normalization values lie in (1/q) Z[beta] (unit beta).
    const Integer& lattice_denominator() const noexcept { return q_; }
    BaseSpec spec() const;

    const detail::Lattice& lattice() const noexcept { return *lattice_; }

    /// Periods of greedy orbits of Z[beta] cap [0, 1); computed once.
    const AttractorSet& attractor() const;
    /// Same over (1/q) Z[beta], the lattice normalization values live in.
    const AttractorSet& normalization_attractor() const;

private:
    friend std::shared_ptr<const PisotBase> make_base(const MinimalPolynomial&, int);
    PisotBase() = default;

    ContextPtr ctx_;
    int d_ = 2;
    int digit_bound_ = 1;
    FieldElement c_;
    PeriodicWord quasi_greedy_;
    Integer q_ = 1;
    std::shared_ptr<const detail::Lattice> lattice_;

    mutable std::once_flag attractor_once_, norm_attractor_once_;
    mutable std::shared_ptr<const AttractorSet> attractor_, norm_attractor_;
};

using BasePtr = std::shared_ptr<const PisotBase>;

/// Validates the polynomial (Pisot, irreducible over the rationals as far as
/// rational roots go) and the alphabet (1 < beta < d).
BasePtr make_base(const MinimalPolynomial& poly, int d);
BasePtr make_base(const BaseSpec& spec);

}  // namespace betanorm
