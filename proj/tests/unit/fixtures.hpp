#pragma once

#include "betanorm/base.hpp"

namespace fixtures {

inline betanorm::BasePtr golden(int d = 2) { return betanorm::make_base(betanorm::MinimalPolynomial({-1, -1, 1}), d); }
inline betanorm::BasePtr tribonacci() { return betanorm::make_base(betanorm::MinimalPolynomial({-1, -1, -1, 1}), 2); }
// beta = golden^2 ~ 2.618; lacks the finiteness property.
inline betanorm::BasePtr square_golden() { return betanorm::make_base(betanorm::MinimalPolynomial({1, -3, 1}), 3); }

}  // namespace fixtures
