#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "betanorm/base.hpp"
#include "betanorm/field.hpp"
#include "betanorm/words.hpp"

namespace betanorm {

inline constexpr std::size_t kDefaultStateBudget = 100000;
inline constexpr std::size_t kDefaultEnumerationBudget = 10'000'000;

/// Greedy beta-expansion of x in [0, 1). Exact; cycles are detected by state
/// equality. Throws OutOfRange, StateBudgetExceeded.
PeriodicWord greedy_expand(const PisotBase& base, const FieldElement& x,
                           std::size_t max_states = kDefaultStateBudget);
/// Pure FieldElement implementation, independent of the fixed-width fast path.
PeriodicWord greedy_expand_exact(const ContextPtr& ctx, const FieldElement& x,
                                 std::size_t max_states = kDefaultStateBudget);

/// The quasi-greedy expansion (a_n) of 1.
PeriodicWord quasi_greedy_one(const ContextPtr& ctx);
inline const PeriodicWord& quasi_greedy_one(const PisotBase& base) { return base.quasi_greedy(); }

/// Parry condition against (a_n). Throws DigitOutOfRange.
bool is_admissible(const PisotBase& base, const PeriodicWord& w);
bool is_admissible(const PisotBase& base, std::span<const int> window);

/// phi_beta: sum of w_n beta^-n, periodic tail in closed form.
FieldElement value(const ContextPtr& ctx, const PeriodicWord& w);
inline FieldElement value(const PisotBase& base, const PeriodicWord& w) { return value(base.context(), w); }
/// Value of a finite word.
FieldElement value(const ContextPtr& ctx, std::span<const int> w);

/// The finite collection of periods of greedy orbits in (1/q) Z[beta] cap [0, 1).
struct AttractorSet {
    Integer denominator = 1;
    /// Distinct cycles as least rotations; the empty word stands for
    /// finite expansions.
    std::vector<DigitWord> cycles;
    /// For each cycle, the purely periodic point value(cycle^inf).
    std::vector<FieldElement> representatives;
    /// Number of lattice points examined.
    std::size_t candidates = 0;

    bool contains(const DigitWord& period) const;
    std::size_t max_period() const;
};

AttractorSet attractor_periods(const PisotBase& base, const Integer& denominator = 1,
                               std::size_t budget = kDefaultEnumerationBudget);

}  // namespace betanorm
