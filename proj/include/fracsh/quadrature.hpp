#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracsh/errors.hpp"

namespace fracsh {

struct QuadratureTolerance {
  double absolute = 1e-10;
  double relative = 1e-10;
  unsigned max_depth = 30;
};

/// Adaptive Gauss-Kronrod (7/15) integral of fn over [a, b]; b < a is allowed.
/// Throws QuadratureError if the error estimate stays above
/// max(absolute, relative * int |fn|).
template <class Fn>
double integrate(Fn&& fn, double a, double b, QuadratureTolerance tol = {}) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(fn, b, a, tol);
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      fn, a, b, tol.max_depth, tol.relative, &error, &l1);
  if (!std::isfinite(value) || error > std::max(tol.absolute, tol.relative * l1)) {
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "]: value " << value << ", error estimate "
        << error;
    throw QuadratureError(msg.str());
  }
  return value;
}

}  // namespace fracsh
