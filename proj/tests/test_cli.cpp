#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"

using namespace diracsym;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, sep);) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

std::vector<std::string> words(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string find_line(const std::string& text, const std::string& prefix) {
  for (const auto& line : lines_of(text)) {
    if (line.rfind(prefix, 0) == 0) return line;
  }
  return "";
}

struct Run {
  int status;
  std::string out;
  std::string err;
};

template <class F>
Run capture(F&& fn) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = fn(out, err);
  return {status, out.str(), err.str()};
}

/// Exit status of the real executable.
int exec(const std::string& args) {
  const std::string cmd = std::string(DIRACSYM_CLI) + " " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("table2 prints the omega rows and flags the discrepant cell") {
  const Run r = capture([](auto& o, auto& e) { return cli::run_table2({}, o, e); });
  CHECK(r.status == cli::kOk);
  const auto k1 = words(find_line(r.out, "Omega k=1 computed"));
  REQUIRE(k1.size() == 3 + 9);
  CHECK(std::vector<std::string>(k1.begin() + 3, k1.end()) ==
        std::vector<std::string>{"342", "72", "12", "2", "6", "42", "72", "132", "462"});
  const auto km2 = words(find_line(r.out, "Omega k=-2 computed"));
  REQUIRE(km2.size() == 3 + 9);
  CHECK(km2[3 + 4] == "0*");
  CHECK(r.out.find("discrepancy: Omega(kappa=-2, gamma=1) computes to 0, table lists 2") !=
        std::string::npos);
  CHECK(r.out.find("1 Omega cell(s) flagged") != std::string::npos);
}

TEST_CASE("table2 report cells") {
  const auto report = cli::table2_report(1e-12);
  REQUIRE(report.omega.size() == 18);
  int mismatched = 0;
  for (const auto& c : report.omega) {
    if (!c.matches()) {
      ++mismatched;
      CHECK(c.kappa == -2);
      CHECK(c.gamma == 1.0);
    }
  }
  CHECK(mismatched == 1);
  CHECK(report.computed_energy.size() == report.gammas.size());
}

TEST_CASE("table1 prints every cell with its delta and writes the CSV") {
  const auto path = (std::filesystem::temp_directory_path() / "diracsym_table1.csv").string();
  cli::Overrides over;
  over.out = path;
  const Run r = capture([&](auto& o, auto& e) { return cli::run_table1(over, o, e); });
  CHECK(r.status == cli::kOk);
  const auto out = lines_of(r.out);
  REQUIRE(out.size() == 1 + 13 + 1);
  CHECK(out.back().find("of 13 cells differ") != std::string::npos);
  const auto csv = lines_of(read_file(path));
  REQUIRE(csv.size() == 14);
  CHECK(csv[0] == "state,n,kappa,gamma,published,computed,delta,residual,status");
  CHECK(split(csv[1])[0] == "0s1/2");
  CHECK(split(csv[1])[4] == "0.0075");
  std::filesystem::remove(path);
}

TEST_CASE("gamma sweep splittings vanish exactly at gamma = 0") {
  const Run r = capture([](auto& o, auto& e) { return cli::run_sweep_gamma("table1", {}, o, e); });
  CHECK(r.status == cli::kOk);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() > 1);
  CHECK(lines[0] == "gamma,n,ell,splitting");
  int at_zero = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    REQUIRE(cells.size() == 4);
    if (cells[0] == "0") {
      ++at_zero;
      CHECK(cells[3] == "0");
    }
  }
  CHECK(at_zero == 3);

  const Run again =
      capture([](auto& o, auto& e) { return cli::run_sweep_gamma("table1", {}, o, e); });
  CHECK(again.out == r.out);
}

TEST_CASE("sweep without doublets is a usage error") {
  const Run r = capture([](auto& o, auto& e) { return cli::run_sweep_gamma("nonrel_mie", {}, o, e); });
  CHECK(r.status == cli::kUsage);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("verify passes on a shipped scenario") {
  const Run r = capture([](auto& o, auto& e) { return cli::run_verify("mie_spin", {}, o, e); });
  CHECK(r.status == cli::kOk);
  CHECK(r.err.find(" 0 violation(s)") != std::string::npos);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() > 1);
  CHECK(lines[0] ==
        "check,form,model,symmetry,n,kappa,gamma,energy,reference,value,relative_difference,verdict");
  int agree = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    REQUIRE(cells.size() == 12);
    if (cells[0] == "oracle") {
      CHECK(cells[11] == "agree");
      ++agree;
    }
  }
  CHECK(agree > 0);
}

TEST_CASE("verify exits 2 when the oracle disagrees") {
  // A box far too small for the Mie well pushes every oracle level up.
  OracleOptions boxed;
  boxed.fixed = ShootingConfig{1e-6, 1.5, 4000, 0.5, 1.0, false};
  const Run r =
      capture([&](auto& o, auto& e) { return cli::run_verify("mie_spin", {}, o, e, boxed); });
  CHECK(r.status == cli::kToleranceViolation);
  CHECK(r.err.find(" 0 violation(s)") == std::string::npos);
}

TEST_CASE("spectrum output is sorted and reproducible") {
  const Run a = capture([](auto& o, auto& e) { return cli::run_spectrum("table1", {}, o, e); });
  const Run b = capture([](auto& o, auto& e) { return cli::run_spectrum("table1", {}, o, e); });
  CHECK(a.status == cli::kOk);
  CHECK(a.out == b.out);
  const auto lines = lines_of(a.out);
  REQUIRE(lines.size() == 1 + 16);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const auto p = split(lines[i - 1]);
    const auto q = split(lines[i]);
    const auto key = [](const std::vector<std::string>& c) {
      return std::make_tuple(std::stoi(c[2]), std::stoi(c[3]), std::stod(c[6]));
    };
    CHECK(key(p) < key(q));
  }
}

TEST_CASE("overrides reach the scenario") {
  cli::Overrides over;
  over.window = std::make_pair(9.7, 9.8);
  over.grid = 256;
  over.mode = Centrifugal::Exact;
  over.tol = 1e-10;
  const Scenario s = cli::resolve_scenario("table1", over);
  CHECK(s.window.e_min == 9.7);
  CHECK(s.window.e_max == 9.8);
  CHECK(s.window.grid_points == 256);
  CHECK(s.mode == Centrifugal::Exact);
  CHECK(s.tolerances.root == 1e-10);

  const Run r = capture([&](auto& o, auto& e) { return cli::run_spectrum("table1", over, o, e); });
  for (std::size_t i = 1; i < lines_of(r.out).size(); ++i) {
    const double energy = std::stod(split(lines_of(r.out)[i])[7]);
    CHECK(energy > 9.7);
    CHECK(energy < 9.8);
  }

  CHECK_THROWS_AS(cli::resolve_scenario("no_such_scenario", {}), ConfigError);
  over.tol = -1.0;
  CHECK_THROWS_AS(cli::resolve_scenario("table1", over), ConfigError);
}

TEST_CASE("wavefunction dump") {
  const Run r = capture(
      [](auto& o, auto& e) { return cli::run_wavefunction("table1", "1p1/2", {}, o, e); });
  CHECK(r.status == cli::kOk);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() > 100);
  CHECK(lines[0] == "r,g,f");
  CHECK(r.err.find("nodes=1") != std::string::npos);

  cli::Overrides empty_window;
  empty_window.window = std::make_pair(0.0, 1.0);
  const Run none = capture([&](auto& o, auto& e) {
    return cli::run_wavefunction("table1", "1p1/2", empty_window, o, e);
  });
  CHECK(none.status == cli::kUsage);
  CHECK(none.out.empty());
}

TEST_CASE("nonrel matches the Schrodinger oracle") {
  const Run r = capture([](auto& o, auto& e) { return cli::run_nonrel("nonrel_mie", {}, o, e); });
  CHECK(r.status == cli::kOk);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 9);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    REQUIRE(cells.size() == 6);
    CHECK(std::stod(cells[5]) < 1e-6);
  }
}

TEST_CASE("executable exit statuses") {
  CHECK(exec("") == cli::kUsage);
  CHECK(exec("--help") == cli::kOk);
  CHECK(exec("table2") == cli::kOk);
  CHECK(exec("spectrum no_such_scenario") == cli::kUsage);
  CHECK(exec("spectrum table1 --mode sideways") == cli::kUsage);
  CHECK(exec("spectrum table1 --window 2,1") == cli::kUsage);
  CHECK(exec("table1 extra") == cli::kUsage);
  CHECK(exec("wavefunction table1") == cli::kUsage);
  CHECK(exec("wavefunction table1 --state 1q1/2") == cli::kUsage);
  CHECK(exec("verify mie_spin") == cli::kOk);
}
