#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace diracsym {

/// Coefficients of the canonical second-order equation
///
///   phi'' + (c1 + c2 s) / (s (1 + c3 s)) phi'
///         + (-L1 s^2 + L2 s - L3) / (s^2 (1 + c3 s)^2) phi = 0,
///
/// evaluated at one trial energy. c3 != 0 selects the Jacobi branch,
/// c3 == 0 the Laguerre branch.
struct ParametricCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
};

enum class Branch { Jacobi, Laguerre };

/// Exponents and polynomial indices of the bound solution.
///
/// Jacobi: phi = (1 + c3 s)^(-p0) s^q0 P_n^(alpha_idx, beta_idx)(1 + 2 c3 s).
/// Laguerre: phi = exp(-p0 s) s^q0 L_n^k_idx((2 p0 - c2) s).
struct BranchSolution {
  Branch branch = Branch::Jacobi;
  double q0 = 0.0;
  double p0 = 0.0;
  double alpha_idx = 0.0;
  double beta_idx = 0.0;
  double k_idx = 0.0;
};

/// A square-root discriminant went negative: the trial energy lies outside
/// the window where a real bound solution can exist.
class NoRealExponent : public std::domain_error {
 public:
  explicit NoRealExponent(const std::string& what) : std::domain_error(what) {}
};

BranchSolution jacobi_exponents(const ParametricCoefficients& coeffs);
BranchSolution laguerre_exponents(const ParametricCoefficients& coeffs);

/// LHS - RHS of the general Jacobi-branch energy condition
///   (q0-p0)^2 + (c2/c3 + 2n - 1)(q0-p0) + n(n + c2/c3 - 1) = L1/c3^2.
double jacobi_quantization_residual(const ParametricCoefficients& coeffs, int n);

/// LHS - RHS of  c1 p0 - q0 (c2 - 2 p0) - L2 = n (c2 - 2 p0).
double laguerre_quantization_residual(const ParametricCoefficients& coeffs, int n);

/// Signed residual whose zeros are the normalizable solutions only.
///
/// The Jacobi condition is quadratic in q0 - p0; writing t = (c2/c3 - 1)/2 it
/// reads (q0 - p0 + n + t)^2 = L1/c3^2 + t^2, and the solution decays at large
/// s only on the negative root. The Laguerre condition is already linear.
/// Returns nullopt when any discriminant is negative.
std::optional<double> normalizable_residual(const ParametricCoefficients& coeffs, int n);

}  // namespace diracsym
