#pragma once

// Brent cycle detection over an explicit state sequence, recording the digit
// emitted by each transition.

#include <cstddef>
#include <optional>
#include <vector>

#include "betanorm/words.hpp"

namespace betanorm::detail {

enum class OrbitStatus { Finite, Periodic, Overflow, Budget };

struct Orbit {
    OrbitStatus status = OrbitStatus::Finite;
    DigitWord pre, per;
};

// step(state, digit) returns the next state or nullopt on overflow;
// zero(state) marks termination of a finite expansion.
template <class State, class Step, class Zero>
Orbit brent_orbit(State start, Step&& step, Zero&& zero, std::size_t max_states) {
    Orbit out;
    if (zero(start)) return out;
    std::vector<State> states;
    DigitWord digits;
    states.push_back(std::move(start));

    auto advance = [&]() -> bool {
        int digit = 0;
        std::optional<State> next = step(states.back(), digit);
        if (!next) {
            out.status = OrbitStatus::Overflow;
            return false;
        }
        digits.push_back(digit);
        states.push_back(std::move(*next));
        if (zero(states.back())) {
            out.status = OrbitStatus::Finite;
            out.pre = digits;
            return false;
        }
        if (states.size() > max_states) {
            out.status = OrbitStatus::Budget;
            return false;
        }
        return true;
    };

    std::size_t power = 1, lam = 1, tortoise = 0;
    if (!advance()) return out;
    while (!(states[tortoise] == states.back())) {
        if (power == lam) {
            tortoise = states.size() - 1;
            power *= 2;
            lam = 0;
        }
        if (!advance()) return out;
        ++lam;
    }
    std::size_t mu = 0;
    while (!(states[mu] == states[mu + lam])) ++mu;
    out.status = OrbitStatus::Periodic;
    out.pre.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(mu));
    out.per.assign(digits.begin() + static_cast<std::ptrdiff_t>(mu),
                   digits.begin() + static_cast<std::ptrdiff_t>(mu + lam));
    return out;
}

}  // namespace betanorm::detail
