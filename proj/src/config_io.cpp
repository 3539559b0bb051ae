#include "diracsym/config_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

namespace diracsym {

using nlohmann::json;

namespace {

/// Walks a JSON object, tracking the key path for error messages and
/// recording which keys were consumed so leftovers can be rejected.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  void require_object() const {
    if (!value_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  Node child(const std::string& key) {
    seen_.insert(key);
    if (!value_.contains(key)) {
      throw ConfigError(join(key) + ": missing required key");
    }
    return Node(value_.at(key), join(key));
  }

  std::optional<Node> optional_child(const std::string& key) {
    seen_.insert(key);
    if (!value_.contains(key)) return std::nullopt;
    return Node(value_.at(key), join(key));
  }

  Node element(std::size_t i) const {
    return Node(value_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::size_t array_size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  double number(const std::string& key) { return child(key).number(); }
  double number_or(const std::string& key, double fallback) {
    const auto c = optional_child(key);
    return c ? c->number() : fallback;
  }

  /// Throws for keys present in the object but never requested.
  void finish() const {
    for (const auto& item : value_.items()) {
      if (seen_.count(item.key()) == 0) {
        throw ConfigError(join(item.key()) + ": unknown key");
      }
    }
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& value_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Rethrows model and context validation failures with the key path.
template <class F>
void checked(const Node& at, F&& check) {
  try {
    check();
  } catch (const std::invalid_argument& e) {
    at.fail(e.what());
  }
}

PotentialModel parse_model(Node node) {
  node.require_object();
  const std::string type = node.child("type").string();
  Node params = node.child("params");
  params.require_object();
  PotentialModel model;
  if (type == "poschl_teller") {
    model = PoschlTeller{params.number("A"), params.number("B"), params.number("alpha")};
  } else if (type == "morse") {
    model = Morse{params.number("depth"), params.number("beta"), params.number("r0")};
  } else if (type == "mie") {
    model = Mie{params.number("V0"), params.number("a")};
  } else if (type == "pseudoharmonic") {
    model = Pseudoharmonic{params.number("V0"), params.number("r0")};
  } else if (type == "kratzer_fues") {
    model = KratzerFues{params.number("De"), params.number("re")};
  } else {
    node.child("type").fail("unknown model type '" + type + "'");
  }
  params.finish();
  node.finish();
  checked(node, [&] { validate(model); });
  return model;
}

json model_json(const PotentialModel& model) {
  json params = std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PoschlTeller>) {
          return {{"A", p.A}, {"B", p.B}, {"alpha", p.alpha}};
        } else if constexpr (std::is_same_v<T, Morse>) {
          return {{"depth", p.depth}, {"beta", p.beta}, {"r0", p.r0}};
        } else if constexpr (std::is_same_v<T, Mie>) {
          return {{"V0", p.V0}, {"a", p.a}};
        } else if constexpr (std::is_same_v<T, Pseudoharmonic>) {
          return {{"V0", p.V0}, {"r0", p.r0}};
        } else {
          return {{"De", p.De}, {"re", p.re}};
        }
      },
      model);
  return {{"type", model_name(model)}, {"params", params}};
}

DiracContext parse_context(Node node) {
  node.require_object();
  DiracContext ctx;
  ctx.mass = node.number("mass");
  ctx.C = node.number_or("C", 0.0);
  ctx.gamma = node.number_or("gamma", 0.0);
  if (auto s = node.optional_child("symmetry")) {
    const std::string name = s->string();
    checked(*s, [&] { ctx.symmetry = parse_symmetry(name); });
  }
  node.finish();
  checked(node, [&] { validate(ctx); });
  return ctx;
}

QuantumState parse_state(Node node) {
  if (node.raw().is_string()) {
    const std::string label = node.string();
    QuantumState s;
    checked(node, [&] { s = parse_shell_label(label); });
    return s;
  }
  node.require_object();
  const int n = node.child("n").integer();
  const int kappa = node.child("kappa").integer();
  node.finish();
  if (kappa == 0) node.fail("kappa must be nonzero");
  if (n < 0) node.fail("n must be non-negative");
  return make_state(n, kappa);
}

std::string render(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

void sort_levels(std::vector<EnergyLevel>& levels) {
  std::stable_sort(levels.begin(), levels.end(), [](const EnergyLevel& a, const EnergyLevel& b) {
    return std::tie(a.state.n, a.state.kappa, a.gamma) <
           std::tie(b.state.n, b.state.kappa, b.gamma);
  });
}

std::vector<std::string> level_fields(const EnergyLevel& l) {
  return {l.model,
          symmetry_name(l.symmetry),
          std::to_string(l.state.n),
          std::to_string(l.state.kappa),
          std::to_string(l.state.ell()),
          format_real(l.state.j()),
          format_real(l.gamma),
          format_real(l.energy),
          format_real(l.residual),
          method_name(l.method)};
}

const std::vector<std::string> kLevelHeader = {"model", "symmetry", "n",      "kappa",    "ell",
                                               "j",     "gamma",    "energy", "residual", "method"};

std::vector<QuantumState> low_states(int max_n, int max_abs_kappa) {
  std::vector<QuantumState> out;
  for (int n = 0; n <= max_n; ++n) {
    for (int k = -max_abs_kappa; k <= max_abs_kappa; ++k) {
      if (k != 0) out.push_back(make_state(n, k));
    }
  }
  return out;
}

/// n <= 2 and l <= 2 on the aligned branch kappa = -l - 1.
std::vector<QuantumState> aligned_states() {
  std::vector<QuantumState> out;
  for (int n = 0; n <= 2; ++n) {
    for (int ell = 0; ell <= 2; ++ell) out.push_back(make_state(n, -ell - 1));
  }
  return out;
}

Scenario make(std::string name, PotentialModel model, DiracContext ctx,
              std::vector<QuantumState> states, std::vector<double> gammas) {
  Scenario s;
  s.name = std::move(name);
  s.model = model;
  s.ctx = ctx;
  s.states = std::move(states);
  s.gammas = std::move(gammas);
  s.window = default_window(model, ctx);
  return s;
}

const PoschlTeller kTable1Well{2.09, 1.58, 0.3};

}  // namespace

std::vector<double> GammaSweep::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out.push_back(i + 1 == steps ? max : min + (max - min) * i / (steps - 1));
  }
  return out;
}

std::vector<double> Scenario::gamma_values() const {
  return gammas.empty() ? std::vector<double>{ctx.gamma} : gammas;
}

void validate(const Scenario& s) {
  if (s.states.empty()) throw ConfigError("states: at least one state is required");
  if (!(s.tolerances.root > 0.0) || !(s.tolerances.ode > 0.0) || !(s.tolerances.quad > 0.0)) {
    throw ConfigError("tolerances: all tolerances must be positive");
  }
  if (s.gamma_sweep && (s.gamma_sweep->steps < 2 || !(s.gamma_sweep->min < s.gamma_sweep->max))) {
    throw ConfigError("gamma_sweep: needs min < max and steps >= 2");
  }
  try {
    validate(s.model);
    validate(s.ctx);
    s.window.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string centrifugal_name(Centrifugal mode) {
  return mode == Centrifugal::Approximate ? "approx" : "exact";
}

Centrifugal parse_centrifugal(const std::string& name) {
  if (name == "approx") return Centrifugal::Approximate;
  if (name == "exact") return Centrifugal::Exact;
  throw std::invalid_argument("mode must be 'approx' or 'exact', got '" + name + "'");
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  }
  Node root(doc, "");
  root.require_object();
  Scenario s;
  s.name = root.child("name").string();
  s.model = parse_model(root.child("model"));
  s.ctx = parse_context(root.child("context"));

  Node states = root.child("states");
  for (std::size_t i = 0; i < states.array_size(); ++i) {
    s.states.push_back(parse_state(states.element(i)));
  }
  if (auto g = root.optional_child("gammas")) {
    for (std::size_t i = 0; i < g->array_size(); ++i) s.gammas.push_back(g->element(i).number());
  }
  if (auto g = root.optional_child("gamma_sweep")) {
    g->require_object();
    GammaSweep sweep{g->number("min"), g->number("max"), g->child("steps").integer()};
    g->finish();
    if (sweep.steps < 2 || !(sweep.min < sweep.max)) g->fail("needs min < max and steps >= 2");
    s.gamma_sweep = sweep;
  }
  if (auto w = root.optional_child("window")) {
    w->require_object();
    s.window.e_min = w->number("e_min");
    s.window.e_max = w->number("e_max");
    s.window.grid_points = w->child("grid_points").integer();
    w->finish();
    checked(*w, [&] { s.window.validate(); });
  } else {
    s.window = default_window(s.model, s.ctx);
  }
  if (auto t = root.optional_child("tolerances")) {
    t->require_object();
    const Tolerances d;
    s.tolerances.root = t->number_or("root", d.root);
    s.tolerances.ode = t->number_or("ode", d.ode);
    s.tolerances.quad = t->number_or("quad", d.quad);
    t->finish();
  }
  if (auto m = root.optional_child("mode")) {
    const std::string name = m->string();
    checked(*m, [&] { s.mode = parse_centrifugal(name); });
  }
  root.finish();
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["model"] = model_json(s.model);
  doc["context"] = {{"mass", s.ctx.mass},
                    {"C", s.ctx.C},
                    {"gamma", s.ctx.gamma},
                    {"symmetry", symmetry_name(s.ctx.symmetry)}};
  json states = json::array();
  for (const auto& st : s.states) states.push_back({{"n", st.n}, {"kappa", st.kappa}});
  doc["states"] = states;
  if (!s.gammas.empty()) doc["gammas"] = s.gammas;
  if (s.gamma_sweep) {
    doc["gamma_sweep"] = {
        {"min", s.gamma_sweep->min}, {"max", s.gamma_sweep->max}, {"steps", s.gamma_sweep->steps}};
  }
  doc["window"] = {{"e_min", s.window.e_min},
                   {"e_max", s.window.e_max},
                   {"grid_points", s.window.grid_points}};
  doc["tolerances"] = {
      {"root", s.tolerances.root}, {"ode", s.tolerances.ode}, {"quad", s.tolerances.quad}};
  doc["mode"] = centrifugal_name(s.mode);
  return doc.dump(2) + "\n";
}

std::vector<std::string> builtin_scenario_names() {
  return {"table1",
          "table2",
          "poschl_teller_spin",
          "poschl_teller_pseudospin",
          "morse_spin",
          "morse_pseudospin",
          "mie_spin",
          "mie_pseudospin",
          "pseudoharmonic_spin",
          "pseudoharmonic_pseudospin",
          "kratzer_fues_spin",
          "kratzer_fues_pseudospin",
          "nonrel_mie",
          "nonrel_pseudoharmonic",
          "nonrel_kratzer_fues"};
}

Scenario builtin_scenario(const std::string& name) {
  const DiracContext table1_ctx{10.0, 10.0, 0.0, Symmetry::Spin};
  const std::vector<double> zero_two{0.0, 2.0};
  const auto spin = [](double m, double c) { return DiracContext{m, c, 0.0, Symmetry::Spin}; };
  const auto pseudo = [](double m, double c) {
    return DiracContext{m, c, 0.0, Symmetry::Pseudospin};
  };

  if (name == "table1") {
    Scenario s = make(name, kTable1Well, table1_ctx,
                      {make_state(0, -1), make_state(1, -1), make_state(1, 1), make_state(2, 2),
                       make_state(2, 3), make_state(1, -2), make_state(2, -3), make_state(2, -4)},
                      zero_two);
    s.gamma_sweep = GammaSweep{0.0, 5.0, 51};
    return s;
  }
  if (name == "table2") {
    return make(name, kTable1Well, table1_ctx, {make_state(1, 1), make_state(1, -2)},
                {-20.0, -10.0, -5.0, -3.0, 1.0, 5.0, 7.0, 10.0, 20.0});
  }
  const auto states = low_states(2, 2);
  // The pseudospin wells use a negative C so that E - m - C stays positive
  // over the negative-energy band.
  if (name == "poschl_teller_spin") return make(name, kTable1Well, table1_ctx, states, zero_two);
  if (name == "poschl_teller_pseudospin") {
    return make(name, kTable1Well, pseudo(10.0, -30.0), states, zero_two);
  }
  if (name == "morse_spin") return make(name, Morse{5.0, 2.0, 2.0}, spin(1.0, 1.0), states, zero_two);
  if (name == "morse_pseudospin") {
    return make(name, Morse{5.0, 2.0, 2.0}, pseudo(1.0, -3.0), states, zero_two);
  }
  if (name == "mie_spin") return make(name, Mie{20.0, 1.0}, spin(1.0, 1.0), states, zero_two);
  if (name == "mie_pseudospin") return make(name, Mie{20.0, 1.0}, pseudo(1.0, -3.0), states, zero_two);
  if (name == "pseudoharmonic_spin") {
    return make(name, Pseudoharmonic{10.0, 1.0}, spin(1.0, 1.0), states, zero_two);
  }
  if (name == "pseudoharmonic_pseudospin") {
    return make(name, Pseudoharmonic{10.0, 1.0}, pseudo(1.0, -3.0), states, zero_two);
  }
  if (name == "kratzer_fues_spin") {
    return make(name, KratzerFues{20.0, 1.0}, spin(1.0, 1.0), states, zero_two);
  }
  if (name == "kratzer_fues_pseudospin") {
    return make(name, KratzerFues{20.0, 1.0}, pseudo(1.0, -3.0), states, zero_two);
  }
  // Shallow wells with C = 0 and no tensor term.
  const std::vector<QuantumState> s_p_d = aligned_states();
  if (name == "nonrel_mie") {
    Scenario s = make(name, Mie{2.0, 1.0}, spin(1.0, 0.0), s_p_d, {});
    s.window = SearchWindow{-2.0, -1e-9, 2048};
    s.mode = Centrifugal::Exact;
    return s;
  }
  if (name == "nonrel_pseudoharmonic") {
    Scenario s = make(name, Pseudoharmonic{1.0, 1.0}, spin(1.0, 0.0), s_p_d, {});
    s.window = SearchWindow{-1.0, 20.0, 2048};
    s.mode = Centrifugal::Exact;
    return s;
  }
  if (name == "nonrel_kratzer_fues") {
    Scenario s = make(name, KratzerFues{2.0, 1.0}, spin(1.0, 0.0), s_p_d, {});
    s.window = SearchWindow{1e-9, 2.0 - 1e-9, 2048};
    s.mode = Centrifugal::Exact;
    return s;
  }
  throw ConfigError("unknown built-in scenario '" + name + "'");
}

std::string format_real(double value) { return render("%.12g", value); }

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  const auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  if (!out) throw std::runtime_error("write failed");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

void write_levels_csv(std::vector<EnergyLevel> levels, std::ostream& out) {
  sort_levels(levels);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(levels.size());
  for (const auto& l : levels) rows.push_back(level_fields(l));
  write_csv(out, kLevelHeader, rows);
}

void write_levels_csv(const std::vector<EnergyLevel>& levels, const std::string& path) {
  auto out = open_output(path);
  write_levels_csv(levels, out);
}

std::string levels_to_json(std::vector<EnergyLevel> levels) {
  sort_levels(levels);
  json arr = json::array();
  for (const auto& l : levels) {
    const auto fields = level_fields(l);
    json row = json::object();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      // numeric columns stay numbers, parsed back from their CSV rendering
      if (i >= 2 && i <= 8) {
        const double v = std::stod(fields[i]);
        row[kLevelHeader[i]] = std::isfinite(v) ? json(v) : json(nullptr);
      } else {
        row[kLevelHeader[i]] = fields[i];
      }
    }
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

void write_wavefunction_csv(const RadialSolution& solution, std::ostream& out) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(solution.r.size());
  for (std::size_t i = 0; i < solution.r.size(); ++i) {
    rows.push_back({format_real(solution.r[i]), format_real(solution.g[i]),
                    format_real(solution.f[i])});
  }
  write_csv(out, {"r", "g", "f"}, rows);
}

}  // namespace diracsym
