// Standard Gaussian tail probability.

#ifndef PARTINFO_QFUNC_HPP
#define PARTINFO_QFUNC_HPP

#include <cmath>
#include <limits>

#include "partinfo/errors.hpp"

namespace partinfo {

/// Q(x) = P(N(0,1) > x), evaluated through the complementary error function
/// (absolute error well under 1e-12 over the whole real line).
///
/// erfc underflows to zero near x = 38.6; the result is clamped to the
/// smallest positive double there, since Q is strictly positive for every
/// finite argument.
inline double q_function(double x) {
    if (!std::isfinite(x)) throw argument_error("q_function: non-finite argument");
    const double q = 0.5 * std::erfc(x / 1.4142135623730950488);
    if (q == 0.0) return std::numeric_limits<double>::denorm_min();
    return q;
}

/// The classical bound Q(x) <= exp(-x^2/2)/2 for x >= 0.
inline double q_chernoff(double x) { return 0.5 * std::exp(-0.5 * x * x); }

}  // namespace partinfo

#endif  // PARTINFO_QFUNC_HPP
