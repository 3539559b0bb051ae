#include "diracsym/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace diracsym {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_bracket(double fa, double fb) {
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw std::invalid_argument("root bracket has non-finite function values");
  }
  if ((fa > 0.0 && fb > 0.0) || (fa < 0.0 && fb < 0.0)) {
    throw std::invalid_argument("root bracket does not straddle a sign change");
  }
}

}  // namespace

RootResult brent(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                 double xtol, int max_iter) {
  check_bracket(fa, fb);
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int it = 1; it <= max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * kEps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) {
      return {b, fb, it, true};
    }
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      // inverse quadratic interpolation, or secant when only two points differ
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if (!std::isfinite(fb)) {
      throw std::runtime_error("function became non-finite inside the root bracket");
    }
  }
  return {b, fb, max_iter, false};
}

RootResult bisect(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, double xtol, int max_iter) {
  check_bracket(fa, fb);
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    if (std::abs(b - a) <= 4.0 * kEps * std::abs(mid) + xtol || mid == a || mid == b) {
      return {mid, f(mid), it, true};
    }
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0, it, true};
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, f(mid), max_iter, false};
}

}  // namespace diracsym
