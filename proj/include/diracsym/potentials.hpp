#pragma once

#include <string>
#include <variant>
#include <vector>

#include "diracsym/parametric_solver.hpp"

namespace diracsym {

/// -A(A+alpha)/cosh^2(alpha r) + B(B-alpha)/sinh^2(alpha r)
struct PoschlTeller {
  double A = 0.0;
  double B = 0.0;
  double alpha = 0.0;

  friend bool operator==(const PoschlTeller&, const PoschlTeller&) = default;
};

/// D [exp(-2 beta (r - r0)) - 2 exp(-beta (r - r0))]
struct Morse {
  double depth = 0.0;
  double beta = 0.0;
  double r0 = 0.0;

  friend bool operator==(const Morse&, const Morse&) = default;
};

/// V0 [ (a/r)^2 / 2 - a/r ]
struct Mie {
  double V0 = 0.0;
  double a = 0.0;

  friend bool operator==(const Mie&, const Mie&) = default;
};

/// V0 (r/r0 - r0/r)^2
struct Pseudoharmonic {
  double V0 = 0.0;
  double r0 = 0.0;

  friend bool operator==(const Pseudoharmonic&, const Pseudoharmonic&) = default;
};

/// De ((r - re)/r)^2
struct KratzerFues {
  double De = 0.0;
  double re = 0.0;

  friend bool operator==(const KratzerFues&, const KratzerFues&) = default;
};

using PotentialModel = std::variant<PoschlTeller, Morse, Mie, Pseudoharmonic, KratzerFues>;

enum class Symmetry { Spin, Pseudospin };

/// Which of Delta = V - S or Sigma = V + S is constant, and its value C.
///
/// Spin: Delta = C and Sigma carries the model profile.
/// Pseudospin: Sigma = C and Delta carries the model profile.
/// gamma is the strength of the tensor term U = -gamma/r.
struct DiracContext {
  double mass = 1.0;
  double C = 0.0;
  double gamma = 0.0;
  Symmetry symmetry = Symmetry::Spin;

  friend bool operator==(const DiracContext&, const DiracContext&) = default;
};

/// Whether the 1/r^2 term is kept exactly or replaced by the
/// model's solvable approximation (exponential form for Poschl-Teller,
/// Pekeris expansion for Morse). The remaining models are exact either way.
enum class Centrifugal { Exact, Approximate };

/// Energy-dependent couplings of the decoupled radial equation
///
///   -u'' + [omega * centrifugal(r) + coupling * V(r)] u = eigen_term * u.
///
/// Spin: coupling = E + m - C, eigen_term = coupling * (E - m).
/// Pseudospin: coupling = E - m - C, eigen_term = coupling * (E + m).
/// The nonrelativistic problem is the same equation with coupling = 2m and
/// eigen_term = 2m * epsilon.
struct ReducedCouplings {
  double coupling = 0.0;
  double eigen_term = 0.0;
  double omega = 0.0;
};

struct PekerisCoefficients {
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Leading small-r behaviour of the bracket in the reduced equation:
/// inverse_square / r^2 + inverse_linear / r + O(1).
struct SmallRadius {
  double inverse_square = 0.0;
  double inverse_linear = 0.0;
};

std::string model_name(const PotentialModel& model);
std::string symmetry_name(Symmetry symmetry);
Symmetry parse_symmetry(const std::string& name);

/// Throws std::invalid_argument if a scale parameter is not positive or the
/// Poschl-Teller strengths do not form a well.
void validate(const PotentialModel& model);
void validate(const DiracContext& ctx);

/// 1/alpha for Poschl-Teller, r0 for Morse and pseudoharmonic, a for Mie, re for Kratzer-Fues.
double length_scale(const PotentialModel& model);
/// Depth scale used to pad default search windows.
double well_depth(const PotentialModel& model);

/// The radial profile carried by Sigma (spin) or Delta (pseudospin).
double potential_profile(const PotentialModel& model, double r);

/// Throws std::invalid_argument for alpha <= 0.
PekerisCoefficients pekeris_coefficients(double alpha);

ReducedCouplings reduced_couplings(const DiracContext& ctx, int kappa, double energy);
ReducedCouplings schrodinger_couplings(double mass, int ell, double epsilon);

ParametricCoefficients parametric_form(const PotentialModel& model, const ReducedCouplings& rc);
ParametricCoefficients parametric_form(const PotentialModel& model, const DiracContext& ctx,
                                       int kappa, double energy);

/// 1/r^2 or its replacement. Unlike effective_potential this accepts any r
/// the replacement is defined at (the Pekeris form is finite for r <= 0).
double centrifugal_factor(const PotentialModel& model, double r, Centrifugal treatment);

/// Coefficient multiplying u in  u'' + c(r) u = -eigen_term u  at radius r,
/// i.e. -(omega * centrifugal(r) + coupling * V(r)). Rejects r <= 0.
double effective_potential(const PotentialModel& model, const DiracContext& ctx, int kappa,
                           double energy, double r, Centrifugal treatment);

/// Used by the shooting oracle to start the regular solution at small r.
SmallRadius small_radius_behaviour(const PotentialModel& model, const ReducedCouplings& rc);

/// True if the model's approximate form extends to the whole real line
/// (Pekeris-approximated Morse), so bound solutions live on r in (-inf, inf).
bool full_line_domain(const PotentialModel& model, Centrifugal treatment);

/// Human-readable warnings where an approximation is near breakdown.
std::vector<std::string> validity_warnings(const PotentialModel& model, const DiracContext& ctx);

}  // namespace diracsym
