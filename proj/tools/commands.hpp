#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diracsym/config_io.hpp"
#include "diracsym/oracle.hpp"
#include "diracsym/spectrum.hpp"

namespace diracsym::cli {

/// Exit statuses.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kToleranceViolation = 2;

/// Overrides shared by the subcommands. Unset fields keep the scenario values.
struct Overrides {
  std::optional<double> tol;
  std::optional<std::pair<double, double>> window;
  std::optional<int> grid;
  std::optional<Centrifugal> mode;
  /// Data destination; stdout when empty.
  std::string out;
};

/// A path to a JSON scenario, or the name of a built-in one.
Scenario resolve_scenario(const std::string& ref, const Overrides& over);

struct Table1Cell {
  QuantumState state;
  double gamma = 0.0;
  double published = 0.0;
  std::optional<EnergyLevel> computed;

  std::optional<double> delta() const;
};

std::vector<Table1Cell> table1_cells(double tol);

struct OmegaCell {
  int kappa = 0;
  double gamma = 0.0;
  double published = 0.0;
  double computed = 0.0;
  bool matches() const { return computed == published; }
};

struct Table2Report {
  std::vector<OmegaCell> omega;
  std::vector<double> gammas;
  std::vector<double> published_energy;
  std::vector<std::optional<double>> computed_energy;
};

Table2Report table2_report(double tol);

struct ComparisonRow {
  std::string check;  // oracle, printed or derived
  std::string form;
  std::string model;
  Symmetry symmetry = Symmetry::Spin;
  QuantumState state;
  double gamma = 0.0;
  double energy = 0.0;
  double reference = 0.0;
  double value = 0.0;
  double relative_difference = 0.0;
  std::string verdict;
  bool violation = false;
};

struct VerifyReport {
  std::vector<ComparisonRow> rows;
  int violations = 0;
  double worst_oracle_difference = 0.0;
};

/// Closed form against the oracle plus printed-formula adjudication for every
/// state and gamma in the scenario.
VerifyReport verify_scenario(const Scenario& scenario, const OracleOptions& options = {});

struct SplittingRow {
  double gamma = 0.0;
  int n = 0;
  int ell = 0;
  std::optional<double> splitting;
};

/// Doublets are the (n, kappa = l) states of the scenario whose partner
/// (n, kappa = -l - 1) is also listed.
std::vector<SplittingRow> gamma_sweep(const Scenario& scenario);

struct NonrelRow {
  int n = 0;
  int ell = 0;
  std::optional<double> closed_form;
  std::optional<double> oracle;
  double relative_difference() const;
};

std::vector<NonrelRow> nonrel_rows(const Scenario& scenario,
                                   const OracleOptions& options = {});

/// Relative agreement required between closed form and oracle in approx mode.
constexpr double kOracleTolerance = 1e-6;
/// Printed forms count as satisfied below this relative residual.
constexpr double kSatisfied = 1e-9;
/// and as violated above this one.
constexpr double kViolated = 1e-6;
/// Absolute tolerance for the Table 1 comparison.
constexpr double kTable1Tolerance = 2e-3;

int run_spectrum(const std::string& ref, const Overrides& over, std::ostream& out,
                 std::ostream& err);
int run_table1(const Overrides& over, std::ostream& out, std::ostream& err);
int run_table2(const Overrides& over, std::ostream& out, std::ostream& err);
int run_sweep_gamma(const std::string& ref, const Overrides& over, std::ostream& out,
                    std::ostream& err);
int run_wavefunction(const std::string& ref, const std::string& state, const Overrides& over,
                     std::ostream& out, std::ostream& err);
int run_verify(const std::string& ref, const Overrides& over, std::ostream& out,
               std::ostream& err, const OracleOptions& options = {});
int run_nonrel(const std::string& ref, const Overrides& over, std::ostream& out,
               std::ostream& err);

}  // namespace diracsym::cli
