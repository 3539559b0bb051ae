#pragma once

#include <stdexcept>
#include <vector>

#include "diracsym/potentials.hpp"
#include "diracsym/quantum_numbers.hpp"

namespace diracsym {

/// Jacobi polynomial by the three-term recurrence. Rejects alpha or beta <= -1 and n > 200.
double jacobi_poly(int n, double alpha, double beta, double x);

/// Terminating hypergeometric series about the nearer of x = 1 and x = -1, for real
/// indices away from the poles of that series. Bound-state Jacobi factors have beta < -1.
double jacobi_poly_general(int n, double alpha, double beta, double x);

/// Generalized Laguerre polynomial by recurrence. Rejects k <= -1 and n > 200.
double laguerre_poly(int n, double k, double x);

struct RadialSolution {
  std::vector<double> r;
  std::vector<double> g;
  std::vector<double> f;
  double norm = 0.0;
  int nodes = 0;
  /// True when f (spin) or g (pseudospin) has been reconstructed.
  bool has_partner = false;
  Symmetry symmetry = Symmetry::Spin;

  /// The component that solves the decoupled second-order equation.
  const std::vector<double>& solved() const { return symmetry == Symmetry::Spin ? g : f; }
};

class CouplingSingular : public std::domain_error {
 public:
  explicit CouplingSingular(const std::string& what) : std::domain_error(what) {}
};

/// Odd-length grid: geometric on [r_min, r_switch], uniform on [r_switch, r_max].
std::vector<double> composite_grid(double r_min, double r_switch, double r_max, int points);

/// Grid suited to a bound level: starts at 1e-6 of the model length scale and
/// ends where the closed-form envelope has fallen by 1e-12 from its peak.
std::vector<double> wavefunction_grid(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double energy, int points = 4097);

/// Closed-form solved component on r_grid, scaled to peak magnitude 1 and
/// positive near the origin. Throws if energy is not a root of the quantization
/// residual to within root_tol.
RadialSolution assemble_wavefunction(const PotentialModel& model, const DiracContext& ctx,
                                     const QuantumState& state, double energy,
                                     const std::vector<double>& r_grid, double root_tol = 1e-8);

/// Reconstructs the other component from the first-order coupling and
/// normalizes both jointly. Throws CouplingSingular if the constant coupling
/// (E + m - C or E - m - C) vanishes.
RadialSolution partner_component(const PotentialModel& model, const DiracContext& ctx,
                                 const QuantumState& state, double energy,
                                 RadialSolution solution);

/// Composite Simpson rule on a non-uniform grid of odd length.
double simpson(const std::vector<double>& x, const std::vector<double>& y);

/// Five-point finite-difference derivative of the given order (1 or 2),
/// centered in the interior and one-sided at the two ends.
std::vector<double> derivative(const std::vector<double>& x, const std::vector<double>& y,
                               int order);

/// Interior sign changes, ignoring samples below threshold * max|y|.
int count_nodes(const std::vector<double>& y, double threshold = 1e-10);

/// max |u'' - (W - lambda) u| / max |u''| over interior points, where the
/// bracket W uses the same centrifugal treatment as the closed form.
double ode_residual(const PotentialModel& model, const DiracContext& ctx,
                    const QuantumState& state, double energy, const RadialSolution& solution);

/// max residual of the first-order equation not used to build the partner,
/// relative to the largest term in it. Needs has_partner.
double first_order_residual(const PotentialModel& model, const DiracContext& ctx,
                            const QuantumState& state, double energy,
                            const RadialSolution& solution);

}  // namespace diracsym
