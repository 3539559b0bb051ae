#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <map>
#include <ostream>
#include <set>

#include "diracsym/special_functions.hpp"

namespace diracsym::cli {

namespace {

double relative(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

/// Runs write(stream) against the --out file, or against out when none was given.
template <class F>
void emit(const Overrides& over, std::ostream& out, F&& write) {
  if (over.out.empty()) {
    write(out);
    return;
  }
  auto file = open_output(over.out);
  write(file);
}

/// Evaluates fn over the items concurrently and returns results in input order.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F fn) {
  using R = decltype(fn(items.front()));
  std::vector<std::future<R>> jobs;
  jobs.reserve(items.size());
  for (const auto& item : items) jobs.push_back(std::async(std::launch::async, fn, item));
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

DiracContext at_gamma(DiracContext ctx, double gamma) {
  ctx.gamma = gamma;
  return ctx;
}

struct Cell {
  QuantumState state;
  double gamma;
};

std::vector<Cell> cells_of(const Scenario& s) {
  std::vector<Cell> cells;
  for (double g : s.gamma_values()) {
    for (const auto& st : s.states) cells.push_back({st, g});
  }
  return cells;
}

void report_diagnostics(const LevelSearch& search, const Cell& cell, std::ostream& err) {
  for (const auto& d : search.diagnostics) {
    err << cell.state.label() << " gamma=" << format_real(cell.gamma) << ": " << d << '\n';
  }
}

const std::vector<double> kTable2Gammas = {-20, -10, -5, -3, 1, 5, 7, 10, 20};

/// Formula verdicts. A reliable printed form must be satisfied; for an
/// unreliable one the printed form must fail while the re-derived one holds.
std::string formula_verdict(const FormulaCheck& printed, const FormulaCheck& derived,
                            bool is_printed, bool& violation) {
  const auto satisfied = [](double rr) { return rr < kSatisfied; };
  const auto violated = [](double rr) { return std::isnan(rr) || rr > kViolated; };
  const FormulaCheck& self = is_printed ? printed : derived;
  if (!is_printed) {
    violation = !satisfied(self.relative_residual);
    return violation ? "not_satisfied" : "satisfied";
  }
  if (printed.reliable) {
    violation = !satisfied(printed.relative_residual);
    return violation ? "not_satisfied" : "satisfied";
  }
  if (violated(printed.relative_residual) && satisfied(derived.relative_residual)) {
    violation = false;
    return "typo_confirmed";
  }
  violation = true;
  return satisfied(printed.relative_residual) ? "typo_not_demonstrated" : "inconclusive";
}

}  // namespace

Scenario resolve_scenario(const std::string& ref, const Overrides& over) {
  Scenario s;
  if (std::filesystem::exists(ref)) {
    s = load_scenario(ref);
  } else {
    const auto names = builtin_scenario_names();
    if (std::find(names.begin(), names.end(), ref) == names.end()) {
      throw ConfigError(ref + ": no such scenario file or built-in scenario");
    }
    s = builtin_scenario(ref);
  }
  if (over.tol) s.tolerances.root = *over.tol;
  if (over.window) {
    s.window.e_min = over.window->first;
    s.window.e_max = over.window->second;
  }
  if (over.grid) s.window.grid_points = *over.grid;
  if (over.mode) s.mode = *over.mode;
  validate(s);
  return s;
}

std::optional<double> Table1Cell::delta() const {
  if (!computed) return std::nullopt;
  return computed->energy - published;
}

std::vector<Table1Cell> table1_cells(double tol) {
  const Scenario s = builtin_scenario("table1");
  // (state, gamma, published value) in table order
  const std::vector<std::tuple<QuantumState, double, double>> layout = {
      {make_state(0, -1), 0.0, 0.0075}, {make_state(1, -1), 0.0, 0.0300},
      {make_state(1, 1), 0.0, 0.0950},  {make_state(2, 2), 0.0, 0.2410},
      {make_state(2, 3), 0.0, 0.2950},  {make_state(0, -1), 2.0, 0.0150},
      {make_state(1, -1), 2.0, 0.0900}, {make_state(1, 1), 2.0, 0.1250},
      {make_state(2, 2), 2.0, 0.3250},  {make_state(2, 3), 2.0, 0.3650},
      {make_state(1, -2), 2.0, 0.0750}, {make_state(2, -3), 2.0, 0.2150},
      {make_state(2, -4), 2.0, 0.2350}};
  return parallel_map(layout, [&](const auto& entry) {
    const auto& [state, gamma, published] = entry;
    Table1Cell cell{state, gamma, published, std::nullopt};
    const auto found = find_levels(s.model, at_gamma(s.ctx, gamma), state, s.window, tol);
    if (!found.levels.empty()) cell.computed = found.levels.front();
    return cell;
  });
}

Table2Report table2_report(double tol) {
  Table2Report r;
  r.gammas = kTable2Gammas;
  r.published_energy = {0.609, 0.250, 0.131, 0.094, 0.125, 0.205, 0.256, 0.345, 0.789};
  const std::vector<double> omega_k1 = {342, 72, 12, 2, 6, 42, 72, 132, 462};
  const std::vector<double> omega_km2 = {462, 132, 42, 20, 2, 12, 30, 72, 342};
  for (std::size_t i = 0; i < r.gammas.size(); ++i) {
    r.omega.push_back({1, r.gammas[i], omega_k1[i], omega_spin(1, r.gammas[i])});
  }
  for (std::size_t i = 0; i < r.gammas.size(); ++i) {
    r.omega.push_back({-2, r.gammas[i], omega_km2[i], omega_spin(-2, r.gammas[i])});
  }
  const Scenario s = builtin_scenario("table2");
  r.computed_energy = parallel_map(r.gammas, [&](double g) -> std::optional<double> {
    const auto found = find_levels(s.model, at_gamma(s.ctx, g), make_state(1, 1), s.window, tol);
    if (found.levels.empty()) return std::nullopt;
    return found.levels.front().energy;
  });
  return r;
}

VerifyReport verify_scenario(const Scenario& s, const OracleOptions& base) {
  struct Job {
    int kappa;
    double gamma;
    int max_n;
  };
  std::map<std::pair<int, double>, int> max_n;
  for (double g : s.gamma_values()) {
    for (const auto& st : s.states) {
      auto& m = max_n[{st.kappa, g}];
      m = std::max(m, st.n);
    }
  }
  std::vector<Job> jobs;
  for (const auto& [key, n] : max_n) jobs.push_back({key.first, key.second, n});

  const auto results = parallel_map(jobs, [&](const Job& job) {
    const DiracContext ctx = at_gamma(s.ctx, job.gamma);
    OracleOptions opt = base;
    opt.max_nodes = job.max_n;
    std::vector<ComparisonRow> rows;
    const auto oracle = oracle_levels(s.model, ctx, job.kappa, s.window, s.mode, opt);
    for (const auto& st : s.states) {
      if (st.kappa != job.kappa) continue;
      const auto closed = find_levels(s.model, ctx, st, s.window, s.tolerances.root);
      const EnergyLevel* partner = nullptr;
      for (const auto& o : oracle) {
        if (o.state.n == st.n) partner = &o;
      }
      ComparisonRow base_row;
      base_row.check = "oracle";
      base_row.form = "-";
      base_row.model = model_name(s.model);
      base_row.symmetry = ctx.symmetry;
      base_row.state = st;
      base_row.gamma = job.gamma;
      if (closed.levels.empty()) {
        if (partner) {
          ComparisonRow row = base_row;
          row.energy = partner->energy;
          row.value = partner->energy;
          row.reference = std::nan("");
          row.relative_difference = std::nan("");
          row.verdict = "missing_in_closed_form";
          row.violation = s.mode == Centrifugal::Approximate;
          rows.push_back(row);
        }
        continue;
      }
      for (const auto& level : closed.levels) {
        ComparisonRow row = base_row;
        row.energy = level.energy;
        row.reference = level.energy;
        if (!partner) {
          row.value = std::nan("");
          row.relative_difference = std::nan("");
          row.verdict = "missing_in_oracle";
          row.violation = s.mode == Centrifugal::Approximate;
        } else {
          row.value = partner->energy;
          row.relative_difference = relative(level.energy, partner->energy);
          const bool agree = row.relative_difference <= kOracleTolerance;
          if (s.mode == Centrifugal::Approximate) {
            row.verdict = agree ? "agree" : "disagree";
            row.violation = !agree;
          } else {
            row.verdict = agree ? "agree" : "approximation_shift";
          }
        }
        rows.push_back(row);

        if (!has_printed_formula(s.model, ctx.symmetry)) continue;
        const auto printed =
            printed_formula_residual(s.model, ctx, st, level.energy, FormulaVariant::Printed);
        const auto derived =
            printed_formula_residual(s.model, ctx, st, level.energy, FormulaVariant::Derived);
        for (const bool is_printed : {true, false}) {
          const FormulaCheck& f = is_printed ? printed : derived;
          ComparisonRow fr = base_row;
          fr.check = is_printed ? "printed" : "derived";
          fr.form = f.form;
          fr.energy = level.energy;
          fr.reference = f.lhs;
          fr.value = f.rhs;
          fr.relative_difference = f.relative_residual;
          fr.verdict = formula_verdict(printed, derived, is_printed, fr.violation);
          rows.push_back(fr);
        }
      }
    }
    return rows;
  });

  VerifyReport report;
  for (const auto& rows : results) {
    for (const auto& row : rows) {
      if (row.violation) ++report.violations;
      if (row.check == "oracle" && std::isfinite(row.relative_difference)) {
        report.worst_oracle_difference =
            std::max(report.worst_oracle_difference, row.relative_difference);
      }
      report.rows.push_back(row);
    }
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) {
                     return std::tie(a.state.n, a.state.kappa, a.gamma) <
                            std::tie(b.state.n, b.state.kappa, b.gamma);
                   });
  return report;
}

std::vector<SplittingRow> gamma_sweep(const Scenario& s) {
  std::set<std::pair<int, int>> listed;
  for (const auto& st : s.states) listed.insert({st.n, st.kappa});
  std::vector<std::pair<int, int>> doublets;  // (n, l)
  for (const auto& [n, kappa] : listed) {
    if (kappa > 0 && listed.count({n, -kappa - 1})) doublets.push_back({n, kappa});
  }
  const std::vector<double> gammas =
      s.gamma_sweep ? s.gamma_sweep->values() : s.gamma_values();
  std::vector<SplittingRow> jobs;
  for (double g : gammas) {
    for (const auto& [n, ell] : doublets) jobs.push_back({g, n, ell, std::nullopt});
  }
  return parallel_map(jobs, [&](SplittingRow row) {
    try {
      row.splitting =
          doublet_splitting(s.model, at_gamma(s.ctx, row.gamma), row.n, row.ell, s.tolerances.root);
    } catch (const PartnerNotFound&) {
    }
    return row;
  });
}

double NonrelRow::relative_difference() const {
  if (!closed_form || !oracle) return std::nan("");
  return relative(*closed_form, *oracle);
}

std::vector<NonrelRow> nonrel_rows(const Scenario& s, const OracleOptions& base) {
  std::map<int, int> max_n;  // l -> largest n
  for (const auto& st : s.states) {
    auto& m = max_n[st.ell()];
    m = std::max(m, st.n);
  }
  std::vector<std::pair<int, int>> jobs(max_n.begin(), max_n.end());
  const auto per_ell = parallel_map(jobs, [&](const std::pair<int, int>& job) {
    OracleOptions opt = base;
    opt.max_nodes = job.second;
    return schrodinger_levels(s.model, job.first, s.ctx.mass, s.window, s.mode, opt);
  });
  std::set<std::pair<int, int>> seen;
  std::vector<NonrelRow> rows;
  for (const auto& st : s.states) {
    if (!seen.insert({st.n, st.ell()}).second) continue;
    NonrelRow row{st.n, st.ell(), nonrelativistic_limit(s.model, st.n, st.ell(), s.ctx.mass),
                  std::nullopt};
    const auto idx = static_cast<std::size_t>(
        std::distance(max_n.begin(), max_n.find(st.ell())));
    for (const auto& lv : per_ell[idx]) {
      if (lv.n == st.n) row.oracle = lv.energy;
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const NonrelRow& a, const NonrelRow& b) {
    return std::tie(a.ell, a.n) < std::tie(b.ell, b.n);
  });
  return rows;
}

int run_spectrum(const std::string& ref, const Overrides& over, std::ostream& out,
                 std::ostream& err) {
  const Scenario s = resolve_scenario(ref, over);
  const auto cells = cells_of(s);
  const auto searches = parallel_map(cells, [&](const Cell& c) {
    return find_levels(s.model, at_gamma(s.ctx, c.gamma), c.state, s.window, s.tolerances.root);
  });
  std::vector<EnergyLevel> levels;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    report_diagnostics(searches[i], cells[i], err);
    if (searches[i].levels.empty()) {
      err << cells[i].state.label() << " gamma=" << format_real(cells[i].gamma)
          << ": no bound level in the window\n";
    }
    levels.insert(levels.end(), searches[i].levels.begin(), searches[i].levels.end());
  }
  emit(over, out, [&](std::ostream& o) { write_levels_csv(levels, o); });
  return kOk;
}

int run_table1(const Overrides& over, std::ostream& out, std::ostream& /*err*/) {
  const double tol = over.tol.value_or(Tolerances{}.root);
  const auto cells = table1_cells(tol);
  int exceeded = 0;
  std::vector<std::vector<std::string>> rows;
  out << "state      gamma  published  computed          delta       status\n";
  for (const auto& c : cells) {
    const auto d = c.delta();
    const bool ok = d && std::abs(*d) <= kTable1Tolerance;
    if (!ok) ++exceeded;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %5.1f  %9.4f  %-16s  %-10s  %s\n",
                  c.state.label().c_str(), c.gamma, c.published,
                  c.computed ? fixed(c.computed->energy, 10).c_str() : "none",
                  d ? fixed(*d, 4).c_str() : "-", ok ? "ok" : "EXCEEDS");
    out << line;
    rows.push_back({c.state.label(), std::to_string(c.state.n), std::to_string(c.state.kappa),
                    format_real(c.gamma), format_real(c.published),
                    c.computed ? format_real(c.computed->energy) : "",
                    d ? format_real(*d) : "", c.computed ? format_real(c.computed->residual) : "",
                    ok ? "ok" : "exceeds"});
  }
  out << exceeded << " of " << cells.size() << " cells differ from the published value by more than "
      << format_real(kTable1Tolerance) << '\n';
  if (!over.out.empty()) {
    auto file = open_output(over.out);
    write_csv(file,
              {"state", "n", "kappa", "gamma", "published", "computed", "delta", "residual",
               "status"},
              rows);
  }
  return kOk;
}

int run_table2(const Overrides& over, std::ostream& out, std::ostream& /*err*/) {
  const double tol = over.tol.value_or(Tolerances{}.root);
  const Table2Report r = table2_report(tol);
  const auto row = [&](const std::string& title, const auto& cell_text) {
    char head[48];
    std::snprintf(head, sizeof head, "%-22s", title.c_str());
    out << head;
    for (std::size_t i = 0; i < r.gammas.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%9s", cell_text(i).c_str());
      out << buf;
    }
    out << '\n';
  };
  row("gamma", [&](std::size_t i) { return format_real(r.gammas[i]); });
  const auto omega_row = [&](int kappa, bool published) {
    return [&, kappa, published](std::size_t i) {
      for (const auto& c : r.omega) {
        if (c.kappa == kappa && c.gamma == r.gammas[i]) {
          const std::string text = format_real(published ? c.published : c.computed);
          return (!published && !c.matches()) ? text + "*" : text;
        }
      }
      return std::string("?");
    };
  };
  row("Omega k=1 published", omega_row(1, true));
  row("Omega k=1 computed", omega_row(1, false));
  row("Omega k=-2 published", omega_row(-2, true));
  row("Omega k=-2 computed", omega_row(-2, false));
  row("E 1p1/2 published", [&](std::size_t i) { return fixed(r.published_energy[i], 3); });
  row("E 1p1/2 computed", [&](std::size_t i) {
    return r.computed_energy[i] ? fixed(*r.computed_energy[i], 3) : std::string("none");
  });
  int flagged = 0;
  for (const auto& c : r.omega) {
    if (!c.matches()) {
      ++flagged;
      out << "* discrepancy: Omega(kappa=" << c.kappa << ", gamma=" << format_real(c.gamma)
          << ") computes to " << format_real(c.computed) << ", table lists "
          << format_real(c.published) << '\n';
    }
  }
  out << flagged << " Omega cell(s) flagged\n";
  if (!over.out.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : r.omega) {
      rows.push_back({"omega", std::to_string(c.kappa), format_real(c.gamma),
                      format_real(c.published), format_real(c.computed),
                      c.matches() ? "ok" : "flagged"});
    }
    for (std::size_t i = 0; i < r.gammas.size(); ++i) {
      rows.push_back({"energy_1p1/2", "1", format_real(r.gammas[i]),
                      format_real(r.published_energy[i]),
                      r.computed_energy[i] ? format_real(*r.computed_energy[i]) : "", "-"});
    }
    auto file = open_output(over.out);
    write_csv(file, {"quantity", "kappa", "gamma", "published", "computed", "status"}, rows);
  }
  return kOk;
}

int run_sweep_gamma(const std::string& ref, const Overrides& over, std::ostream& out,
                    std::ostream& err) {
  const Scenario s = resolve_scenario(ref, over);
  const auto rows = gamma_sweep(s);
  if (rows.empty()) {
    err << "scenario lists no spin doublet (n, kappa = l) with (n, kappa = -l-1)\n";
    return kUsage;
  }
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    if (!r.splitting) {
      err << "gamma=" << format_real(r.gamma) << " n=" << r.n << " l=" << r.ell
          << ": doublet partner not bound\n";
    }
    table.push_back({format_real(r.gamma), std::to_string(r.n), std::to_string(r.ell),
                     r.splitting ? format_real(*r.splitting) : ""});
  }
  emit(over, out, [&](std::ostream& o) { write_csv(o, {"gamma", "n", "ell", "splitting"}, table); });
  return kOk;
}

int run_wavefunction(const std::string& ref, const std::string& label, const Overrides& over,
                     std::ostream& out, std::ostream& err) {
  const Scenario s = resolve_scenario(ref, over);
  const QuantumState st = parse_shell_label(label);
  const DiracContext ctx = at_gamma(s.ctx, s.gamma_values().front());
  const auto found = find_levels(s.model, ctx, st, s.window, s.tolerances.root);
  if (found.levels.empty()) {
    err << st.label() << ": no bound level in the window\n";
    return kUsage;
  }
  const double e = found.levels.front().energy;
  const auto grid = wavefunction_grid(s.model, ctx, st, e);
  RadialSolution sol = assemble_wavefunction(s.model, ctx, st, e, grid);
  sol = partner_component(s.model, ctx, st, e, sol);
  err << st.label() << " E=" << format_real(e) << " nodes=" << sol.nodes
      << " ode_residual=" << scientific(ode_residual(s.model, ctx, st, e, sol)) << '\n';
  emit(over, out, [&](std::ostream& o) { write_wavefunction_csv(sol, o); });
  return kOk;
}

int run_verify(const std::string& ref, const Overrides& over, std::ostream& out,
               std::ostream& err, const OracleOptions& options) {
  const Scenario s = resolve_scenario(ref, over);
  const VerifyReport report = verify_scenario(s, options);
  std::vector<std::vector<std::string>> table;
  for (const auto& r : report.rows) {
    table.push_back({r.check, r.form, r.model, symmetry_name(r.symmetry), std::to_string(r.state.n),
                     std::to_string(r.state.kappa), format_real(r.gamma), format_real(r.energy),
                     format_real(r.reference), format_real(r.value),
                     format_real(r.relative_difference), r.verdict});
  }
  emit(over, out, [&](std::ostream& o) {
    write_csv(o,
              {"check", "form", "model", "symmetry", "n", "kappa", "gamma", "energy", "reference",
               "value", "relative_difference", "verdict"},
              table);
  });
  err << s.name << " (" << centrifugal_name(s.mode) << "): " << report.rows.size() << " checks, "
      << report.violations << " violation(s), worst oracle difference "
      << scientific(report.worst_oracle_difference) << '\n';
  return report.violations == 0 ? kOk : kToleranceViolation;
}

int run_nonrel(const std::string& ref, const Overrides& over, std::ostream& out,
               std::ostream& err) {
  const Scenario s = resolve_scenario(ref, over);
  const auto rows = nonrel_rows(s);
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    if (!r.closed_form || !r.oracle) {
      err << "n=" << r.n << " l=" << r.ell << ": level missing from "
          << (r.closed_form ? "the Schrodinger solver" : "the closed form") << '\n';
    }
    table.push_back({model_name(s.model), std::to_string(r.n), std::to_string(r.ell),
                     r.closed_form ? format_real(*r.closed_form) : "",
                     r.oracle ? format_real(*r.oracle) : "",
                     format_real(r.relative_difference())});
  }
  emit(over, out, [&](std::ostream& o) {
    write_csv(o, {"model", "n", "ell", "closed_form", "oracle", "relative_difference"}, table);
  });
  return kOk;
}

}  // namespace diracsym::cli
