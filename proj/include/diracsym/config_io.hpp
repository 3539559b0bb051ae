#pragma once

#include <fstream>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diracsym/potentials.hpp"
#include "diracsym/quantum_numbers.hpp"
#include "diracsym/special_functions.hpp"
#include "diracsym/spectrum.hpp"

namespace diracsym {

/// Raised for schema violations; the message starts with the offending key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct Tolerances {
  double root = 1e-12;
  double ode = 1e-5;
  double quad = 1e-8;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct GammaSweep {
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  /// steps evenly spaced values from min to max inclusive.
  std::vector<double> values() const;

  friend bool operator==(const GammaSweep&, const GammaSweep&) = default;
};

struct Scenario {
  std::string name;
  PotentialModel model;
  DiracContext ctx;
  std::vector<QuantumState> states;
  /// Tensor strengths to evaluate. Empty means just ctx.gamma.
  std::vector<double> gammas;
  std::optional<GammaSweep> gamma_sweep;
  SearchWindow window;
  Tolerances tolerances;
  Centrifugal mode = Centrifugal::Approximate;

  std::vector<double> gamma_values() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ConfigError on a violated invariant.
void validate(const Scenario& scenario);

/// JSON document, strict: unknown keys are rejected. A missing window
/// falls back to default_window for the model and context.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Canonical JSON; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

std::vector<std::string> builtin_scenario_names();
/// Throws ConfigError for an unknown name.
Scenario builtin_scenario(const std::string& name);

std::string centrifugal_name(Centrifugal mode);
Centrifugal parse_centrifugal(const std::string& name);

/// %.12g rendering used by every CSV writer.
std::string format_real(double value);

/// model,symmetry,n,kappa,ell,j,gamma,energy,residual,method; rows sorted by (n, kappa, gamma).
void write_levels_csv(std::vector<EnergyLevel> levels, std::ostream& out);
void write_levels_csv(const std::vector<EnergyLevel>& levels, const std::string& path);

/// Array of objects with the CSV columns as keys, same order and rendering of values.
std::string levels_to_json(std::vector<EnergyLevel> levels);

/// r,g,f
void write_wavefunction_csv(const RadialSolution& solution, std::ostream& out);

/// Generic table writer for reports. Cells are written verbatim.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Opens path for writing or throws std::runtime_error.
std::ofstream open_output(const std::string& path);

}  // namespace diracsym
