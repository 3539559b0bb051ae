#include "diracsym/parametric_solver.hpp"

#include <cmath>

namespace diracsym {

namespace {

double checked_sqrt(double value, const char* what) {
  if (!(value >= 0.0)) {
    throw NoRealExponent(std::string("no real exponent: negative discriminant in ") + what);
  }
  return std::sqrt(value);
}

}  // namespace

BranchSolution jacobi_exponents(const ParametricCoefficients& c) {
  if (c.c3 == 0.0) {
    throw std::invalid_argument("jacobi_exponents requires c3 != 0");
  }
  const double half = 0.5 * (1.0 - c.c1);
  const double d = c.c2 / c.c3 - c.c1 - 1.0;
  const double h = c.lambda1 / (c.c3 * c.c3) + c.lambda2 / c.c3 + c.lambda3;

  BranchSolution sol;
  sol.branch = Branch::Jacobi;
  // Both + roots: s^q0 regular at s = 0, and the large p0 root is the one
  // that can make (1 + c3 s)^(-p0) s^(q0 + n) decay.
  sol.q0 = half + checked_sqrt(half * half + c.lambda3, "q0");
  sol.p0 = 0.5 * d + checked_sqrt(0.25 * d * d + h, "p0");
  sol.alpha_idx = 2.0 * sol.q0 + c.c1 - 1.0;
  sol.beta_idx = -2.0 * sol.p0 - c.c1 + c.c2 / c.c3 - 1.0;
  return sol;
}

BranchSolution laguerre_exponents(const ParametricCoefficients& c) {
  if (c.c3 != 0.0) {
    throw std::invalid_argument("laguerre_exponents requires c3 == 0");
  }
  const double half = 0.5 * (1.0 - c.c1);
  BranchSolution sol;
  sol.branch = Branch::Laguerre;
  sol.q0 = half + checked_sqrt(half * half + c.lambda3, "q10");
  sol.p0 = 0.5 * c.c2 + checked_sqrt(0.25 * c.c2 * c.c2 + c.lambda1, "p10");
  sol.k_idx = c.c1 + 2.0 * sol.q0 - 1.0;
  return sol;
}

double jacobi_quantization_residual(const ParametricCoefficients& c, int n) {
  const BranchSolution sol = jacobi_exponents(c);
  const double ratio = c.c2 / c.c3;
  const double x = sol.q0 - sol.p0;
  const double nn = n;
  return x * x + (ratio + 2.0 * nn - 1.0) * x + nn * (nn + ratio - 1.0) -
         c.lambda1 / (c.c3 * c.c3);
}

double laguerre_quantization_residual(const ParametricCoefficients& c, int n) {
  const BranchSolution sol = laguerre_exponents(c);
  const double lhs = c.c1 * sol.p0 - sol.q0 * (c.c2 - 2.0 * sol.p0) - c.lambda2;
  const double rhs = n * (c.c2 - 2.0 * sol.p0);
  return lhs - rhs;
}

std::optional<double> normalizable_residual(const ParametricCoefficients& c, int n) {
  try {
    if (c.c3 != 0.0) {
      const BranchSolution sol = jacobi_exponents(c);
      const double t = 0.5 * (c.c2 / c.c3 - 1.0);
      const double disc = c.lambda1 / (c.c3 * c.c3) + t * t;
      if (!(disc >= 0.0)) {
        return std::nullopt;
      }
      return sol.q0 - sol.p0 + n + t + std::sqrt(disc);
    }
    const BranchSolution sol = laguerre_exponents(c);
    if (!(2.0 * sol.p0 - c.c2 > 0.0)) {
      return std::nullopt;
    }
    return laguerre_quantization_residual(c, n);
  } catch (const NoRealExponent&) {
    return std::nullopt;
  }
}

}  // namespace diracsym
