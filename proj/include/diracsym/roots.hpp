#pragma once

#include <functional>

namespace diracsym {

struct RootResult {
  double root = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method on a bracket with f(a) and f(b) of opposite sign (or one of
/// them zero). Iterates until the bracket is below xtol or 4 ulp, whichever is
/// larger; pass xtol = 0 for full double precision.
RootResult brent(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol = 0.0, int max_iter = 200);

/// Plain bisection, used where f is step-like and Brent's interpolation buys nothing.
RootResult bisect(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, double xtol = 0.0, int max_iter = 200);

}  // namespace diracsym
