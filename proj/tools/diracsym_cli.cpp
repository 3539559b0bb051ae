#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "commands.hpp"

namespace {

using namespace diracsym;

std::pair<double, double> parse_window(const std::string& text) {
  std::istringstream in(text);
  double lo = 0.0;
  double hi = 0.0;
  char comma = 0;
  if (!(in >> lo >> comma >> hi) || comma != ',' || !(in >> std::ws).eof() || !(lo < hi)) {
    throw CLI::ValidationError("--window", "expected E_MIN,E_MAX with E_MIN < E_MAX");
  }
  return {lo, hi};
}

struct Flags {
  double tol = 0.0;
  std::string window;
  int grid = 0;
  std::string mode;
  std::string out;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--tol", f.tol, "root tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--window", f.window, "energy window as E_MIN,E_MAX");
  cmd->add_option("--grid", f.grid, "energy grid points")->check(CLI::Range(16, 1 << 24));
  cmd->add_option("--mode", f.mode, "centrifugal treatment")
      ->check(CLI::IsMember({"approx", "exact"}));
  cmd->add_option("--out", f.out, "output file (default: stdout)");
}

cli::Overrides overrides(const CLI::App* cmd, const Flags& f) {
  cli::Overrides o;
  if (cmd->count("--tol")) o.tol = f.tol;
  if (cmd->count("--window")) o.window = parse_window(f.window);
  if (cmd->count("--grid")) o.grid = f.grid;
  if (cmd->count("--mode")) o.mode = parse_centrifugal(f.mode);
  o.out = f.out;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac spin and pseudospin bound states with a Coulomb-like tensor term"};
  app.require_subcommand(1, 1);

  Flags flags;
  std::string scenario;
  std::string state;

  auto* spectrum = app.add_subcommand("spectrum", "closed-form levels for a scenario, as CSV");
  auto* table1 = app.add_subcommand("table1", "Poschl-Teller spin table against published values");
  auto* table2 = app.add_subcommand("table2", "Omega and 1p1/2 energy versus gamma");
  auto* sweep = app.add_subcommand("sweep_gamma", "spin-doublet splittings versus gamma, as CSV");
  auto* wave = app.add_subcommand("wavefunction", "radial components g, f of one level, as CSV");
  auto* verify = app.add_subcommand("verify", "closed form against the shooting oracle");
  auto* nonrel = app.add_subcommand("nonrel", "nonrelativistic limit against Schrodinger shooting");

  for (auto* cmd : {spectrum, sweep, wave, verify, nonrel}) {
    cmd->add_option("scenario", scenario, "scenario file or built-in name")->required();
  }
  wave->add_option("--state", state, "shell label such as 1p1/2")->required();
  for (auto* cmd : {spectrum, table1, table2, sweep, wave, verify, nonrel}) add_flags(cmd, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const cli::Overrides over = overrides(cmd, flags);
    if (cmd == spectrum) return cli::run_spectrum(scenario, over, std::cout, std::cerr);
    if (cmd == table1) return cli::run_table1(over, std::cout, std::cerr);
    if (cmd == table2) return cli::run_table2(over, std::cout, std::cerr);
    if (cmd == sweep) return cli::run_sweep_gamma(scenario, over, std::cout, std::cerr);
    if (cmd == wave) return cli::run_wavefunction(scenario, state, over, std::cout, std::cerr);
    if (cmd == verify) return cli::run_verify(scenario, over, std::cout, std::cerr);
    return cli::run_nonrel(scenario, over, std::cout, std::cerr);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
}
