#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diracsym/potentials.hpp"
#include "diracsym/quantum_numbers.hpp"

namespace diracsym {

enum class LevelMethod { ClosedFormRoot, Oracle };

std::string method_name(LevelMethod method);
LevelMethod parse_method(const std::string& name);

struct EnergyLevel {
  QuantumState state;
  double gamma = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  LevelMethod method = LevelMethod::ClosedFormRoot;
  std::string model;
  Symmetry symmetry = Symmetry::Spin;
};

struct SearchWindow {
  double e_min = -1.0;
  double e_max = 1.0;
  int grid_points = 2048;

  /// Throws std::invalid_argument unless e_min < e_max and grid_points >= 16.
  void validate() const;

  friend bool operator==(const SearchWindow&, const SearchWindow&) = default;
};

/// (-m - |C| - depth, m + |C| + depth) on 2048 points.
SearchWindow default_window(const PotentialModel& model, const DiracContext& ctx);

/// Quantization residual at trial energy E, on the normalizable branch.
/// nullopt means E is outside the domain where a bound solution can exist.
std::optional<double> energy_residual(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double energy);

struct LevelSearch {
  std::vector<EnergyLevel> levels;
  std::vector<std::string> diagnostics;
  bool domain_excluded = false;
};

/// Scan-and-refine over the window. Levels come back sorted by energy.
LevelSearch find_levels(const PotentialModel& model, const DiracContext& ctx,
                        const QuantumState& state, const SearchWindow& window, double tol);

/// Convenience: the lowest level of find_levels over the default window, if any.
std::optional<EnergyLevel> find_level(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double tol = 1e-12);

enum class FormulaVariant { Printed, Derived };

/// One closed-form energy equation evaluated at a trial energy, lhs vs rhs.
struct FormulaCheck {
  std::string form;
  FormulaVariant variant = FormulaVariant::Printed;
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_residual = 0.0;
  /// False for printed forms known to be typeset incorrectly.
  bool reliable = true;
};

bool has_printed_formula(const PotentialModel& model, Symmetry symmetry);

/// Throws std::invalid_argument when no printed form exists for the pair.
/// A negative radicand yields relative_residual = NaN.
FormulaCheck printed_formula_residual(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double energy,
                                      FormulaVariant variant = FormulaVariant::Printed);

class PartnerNotFound : public std::runtime_error {
 public:
  explicit PartnerNotFound(const std::string& what) : std::runtime_error(what) {}
};

/// E(n, kappa = ell) - E(n, kappa = -ell - 1) at ctx.gamma.
double doublet_splitting(const PotentialModel& model, const DiracContext& ctx, int n, int ell,
                         double tol = 1e-12);

/// Schrodinger energy epsilon from the same quantization condition with
/// E + m -> 2m and E - m -> epsilon. nullopt if the state is not bound.
std::optional<double> nonrelativistic_limit(const PotentialModel& model, int n, int ell,
                                            double mass);

}  // namespace diracsym
