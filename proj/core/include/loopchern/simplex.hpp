#pragma once

#include <span>

namespace loopchern {

/// Integral over 0 <= t_1 <= ... <= t_M <= 1 of
///   exp(-t_1 a_0 - (t_2 - t_1) a_1 - ... - (1 - t_M) a_M),
/// i.e. the divided difference of exp(-x) at (a_0, ..., a_M). Evaluated as an
/// entry of the exponential of a bidiagonal matrix; stable for clustered
/// (even coincident) exponents. Requires every a_j >= 0.
double simplex_heat_integral(std::span<const double> exponents);

}  // namespace loopchern
