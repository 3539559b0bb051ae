#pragma once

#include <optional>
#include <vector>

#include "diracsym/potentials.hpp"
#include "diracsym/spectrum.hpp"

namespace diracsym {

/// Fixed-step RK4 shooting setup.
///
/// Radial problems integrate on the mapped variable t = ln r + r / r_scale
/// with uniform steps in t, so the mesh is geometric near the origin and
/// uniform far out. Full-line problems (Pekeris-approximated Morse) use a
/// uniform mesh in r and allow r_min <= 0. The match point sits at
/// r_min + match_point * (r_max - r_min).
struct ShootingConfig {
  double r_min = 1e-6;
  double r_max = 50.0;
  int steps = 4000;
  double match_point = 0.5;
  double r_scale = 1.0;
  bool full_line = false;
};

/// Throws std::invalid_argument when the invariants do not hold.
void validate(const ShootingConfig& cfg);

struct ShootResult {
  /// Normalized Wronskian of the outward and inward solutions at the match point.
  double mismatch = 0.0;
  /// Sign changes of the stitched solution (joined at the outermost turning point).
  int nodes = 0;
};

struct ResolutionPolicy {
  /// Target product of step size and local wavenumber in the mapped variable.
  double phase_step = 0.02;
  int min_steps = 2000;
  int max_steps = 400000;
  /// WKB decay exponent required between the turning points and the boundaries.
  double decay_exponent = 36.0;
  double match_point = 0.5;
};

/// Chooses boundaries and step count for one trial energy. nullopt when the
/// equation has no classically allowed region or the tail does not decay
/// (E outside the bound-state window).
std::optional<ShootingConfig> auto_config(const PotentialModel& model, const ReducedCouplings& rc,
                                          Centrifugal mode, const ResolutionPolicy& policy = {});

/// Generic shoot for  -u'' + [omega c(r) + coupling V(r)] u = eigen_term u.
/// nullopt when the boundary data are not defined (no decaying tail, or an
/// inner 1/r^2 strength below -1/4).
std::optional<ShootResult> shoot(const PotentialModel& model, const ReducedCouplings& rc,
                                 const ShootingConfig& cfg, Centrifugal mode);

/// Zeros of the outward regular solution over the whole interval. At fixed
/// coefficients this counts the eigenvalues below the trial energy, so it
/// steps by one exactly where the mismatch changes sign.
std::optional<int> sturm_count(const PotentialModel& model, const ReducedCouplings& rc,
                               const ShootingConfig& cfg, Centrifugal mode);

std::optional<double> shoot_mismatch(const PotentialModel& model, const DiracContext& ctx,
                                     int kappa, double energy, const ShootingConfig& cfg,
                                     Centrifugal mode);

struct OracleOptions {
  /// Resolution for locating sign changes on the energy grid.
  ResolutionPolicy scan{0.06, 2000, 100000, 36.0, 0.5};
  /// Resolution for the final bracketed solve.
  ResolutionPolicy refine{};
  /// If set, every shoot uses this configuration instead of auto_config.
  std::optional<ShootingConfig> fixed;
  /// Energy samples across the window; adjacent samples whose node counts
  /// differ by two or more are subdivided, so this can stay coarse.
  int scan_points = 384;
  /// Recursion depth for that subdivision.
  int max_subdivisions = 10;
  /// Bisection steps toward the edge of the region where shooting is defined.
  int edge_iterations = 30;
  /// Skip brackets whose Sturm counts show only levels above this node count.
  std::optional<int> max_nodes;
};

/// Grid scan over the window plus bracketed refinement of the mismatch.
/// The radial quantum number of each level is its node count.
std::vector<EnergyLevel> oracle_levels(const PotentialModel& model, const DiracContext& ctx,
                                       int kappa, const SearchWindow& window, Centrifugal mode,
                                       const OracleOptions& options = {});

struct SchrodingerLevel {
  int n = 0;
  double energy = 0.0;
};

/// Nonrelativistic radial Schrodinger levels with the same machinery
/// (coupling 2m, eigen term 2m epsilon, omega = l(l+1)).
std::vector<SchrodingerLevel> schrodinger_levels(const PotentialModel& model, int ell,
                                                 double mass, const SearchWindow& window,
                                                 Centrifugal mode = Centrifugal::Exact,
                                                 const OracleOptions& options = {});

}  // namespace diracsym
