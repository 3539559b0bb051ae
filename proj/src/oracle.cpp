#include "diracsym/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "diracsym/roots.hpp"

namespace diracsym {

namespace {

using CouplingFn = std::function<ReducedCouplings(double)>;

constexpr double kRescale = 1e100;

struct ShootFailed {};

/// Phase-step multiplier allowed in classically forbidden stretches of the full line.
constexpr double kForbiddenStretch = 20.0;

double bracket_term(const PotentialModel& model, const ReducedCouplings& rc, double r,
                    Centrifugal mode) {
  return rc.omega * centrifugal_factor(model, r, mode) + rc.coupling * potential_profile(model, r);
}

double mapped_t(double r, double rs) { return std::log(r) + r / rs; }

/// Inverse of t = ln r + r/rs by Newton iteration on y = ln r.
double radius_from_t(double t, double rs, double guess) {
  double y = std::log(guess);
  for (int it = 0; it < 60; ++it) {
    const double er = std::exp(y);
    const double step = (y + er / rs - t) / (1.0 + er / rs);
    y -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(y))) break;
  }
  return std::exp(y);
}

/// Energy-independent samples on the 2*steps+1 points of the RK4 mesh
/// (even indices are nodes, odd indices midpoints): radius, dr/dt, the
/// centrifugal factor and the potential profile.
struct Mesh {
  std::vector<double> r;
  std::vector<double> drdt;
  std::vector<double> cen;
  std::vector<double> pot;
  double h = 0.0;
  int steps = 0;
};

Mesh build_mesh(const PotentialModel& model, const ShootingConfig& cfg, Centrifugal mode) {
  Mesh mesh;
  mesh.steps = cfg.steps;
  const std::size_t count = 2 * static_cast<std::size_t>(cfg.steps) + 1;
  mesh.r.resize(count);
  mesh.drdt.resize(count);
  mesh.cen.resize(count);
  mesh.pot.resize(count);
  if (cfg.full_line) {
    mesh.h = (cfg.r_max - cfg.r_min) / cfg.steps;
    for (std::size_t j = 0; j < count; ++j) {
      mesh.r[j] = j + 1 == count ? cfg.r_max : cfg.r_min + 0.5 * mesh.h * static_cast<double>(j);
      mesh.drdt[j] = 1.0;
    }
  } else {
    const double rs = cfg.r_scale;
    const double t0 = mapped_t(cfg.r_min, rs);
    const double t1 = mapped_t(cfg.r_max, rs);
    mesh.h = (t1 - t0) / cfg.steps;
    double guess = cfg.r_min;
    for (std::size_t j = 0; j < count; ++j) {
      const double t = t0 + 0.5 * mesh.h * static_cast<double>(j);
      double r = j == 0 ? cfg.r_min : (j + 1 == count ? cfg.r_max : radius_from_t(t, rs, guess));
      mesh.r[j] = r;
      mesh.drdt[j] = r * rs / (rs + r);
      guess = r;
    }
  }
  for (std::size_t j = 0; j < count; ++j) {
    mesh.cen[j] = centrifugal_factor(model, mesh.r[j], mode);
    mesh.pot[j] = potential_profile(model, mesh.r[j]);
    if (!std::isfinite(mesh.cen[j]) || !std::isfinite(mesh.pot[j])) {
      throw std::runtime_error("non-finite potential at r = " + std::to_string(mesh.r[j]));
    }
  }
  return mesh;
}

/// W - lambda along a mesh for one set of couplings.
struct Equation {
  const Mesh& mesh;
  ReducedCouplings rc;

  double q(std::size_t j) const {
    return rc.omega * mesh.cen[j] + rc.coupling * mesh.pot[j] - rc.eigen_term;
  }
};

struct State {
  double u;
  double v;
};

/// One RK4 step between mesh points j0 and j0 +/- 2 (direction dir = +1 or -1).
State rk4_step(const Equation& eq, std::size_t j0, int dir, State y) {
  const Mesh& m = eq.mesh;
  const std::size_t jm = dir > 0 ? j0 + 1 : j0 - 1;
  const std::size_t j1 = dir > 0 ? j0 + 2 : j0 - 2;
  const double h = dir * m.h;
  const auto rhs = [&](std::size_t j, const State& s) {
    return State{s.v * m.drdt[j], eq.q(j) * s.u * m.drdt[j]};
  };
  const State k1 = rhs(j0, y);
  const State k2 = rhs(jm, {y.u + 0.5 * h * k1.u, y.v + 0.5 * h * k1.v});
  const State k3 = rhs(jm, {y.u + 0.5 * h * k2.u, y.v + 0.5 * h * k2.v});
  const State k4 = rhs(j1, {y.u + h * k3.u, y.v + h * k3.v});
  return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
          y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

void rescale(State& y, double length) {
  const double size = std::abs(y.u) + length * std::abs(y.v);
  if (size > kRescale) {
    y.u /= size;
    y.v /= size;
  }
}

std::optional<State> left_start(const Equation& eq, const PotentialModel& model,
                                const ShootingConfig& cfg) {
  const ReducedCouplings& rc = eq.rc;
  if (cfg.full_line) {
    if (!(eq.q(0) > 0.0)) return std::nullopt;
    return State{1.0, std::sqrt(eq.q(0))};
  }
  // regular Frobenius branch r^nu (1 + c r)
  const SmallRadius small = small_radius_behaviour(model, rc);
  if (!(small.inverse_square >= -0.25)) return std::nullopt;
  const double nu = 0.5 + std::sqrt(0.25 + small.inverse_square);
  const double c = small.inverse_linear / (2.0 * nu);
  const double r0 = cfg.r_min;
  return State{1.0 + c * r0, nu / r0 * (1.0 + c * r0) + c};
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

/// Radii and W - lambda on a probe grid, for choosing boundaries.
struct Probe {
  std::vector<double> r;
  std::vector<double> q;
};

Probe make_probe(const PotentialModel& model, const ReducedCouplings& rc, Centrifugal mode,
                 double lo, double hi, int count, bool logarithmic) {
  Probe p;
  p.r.resize(static_cast<std::size_t>(count));
  p.q.resize(p.r.size());
  for (int i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / (count - 1);
    const double r = logarithmic ? lo * std::pow(hi / lo, frac) : lo + (hi - lo) * frac;
    p.r[static_cast<std::size_t>(i)] = r;
    p.q[static_cast<std::size_t>(i)] = bracket_term(model, rc, r, mode) - rc.eigen_term;
  }
  return p;
}

/// Walks from index start in direction dir until the WKB exponent reaches
/// the target; returns the index reached (clamped to the probe ends).
std::size_t decay_index(const Probe& p, std::size_t start, int dir, double target) {
  double s = 0.0;
  std::size_t i = start;
  while (true) {
    if ((dir > 0 && i + 1 >= p.r.size()) || (dir < 0 && i == 0)) return i;
    const std::size_t j = dir > 0 ? i + 1 : i - 1;
    const double a = std::sqrt(std::max(p.q[i], 0.0));
    const double b = std::sqrt(std::max(p.q[j], 0.0));
    s += 0.5 * (a + b) * std::abs(p.r[j] - p.r[i]);
    i = j;
    if (s >= target) return i;
  }
}

int clamp_steps(double steps, const ResolutionPolicy& policy) {
  if (!std::isfinite(steps)) return policy.max_steps;
  return static_cast<int>(
      std::clamp(std::ceil(steps), static_cast<double>(policy.min_steps),
                 static_cast<double>(policy.max_steps)));
}

std::optional<ShootResult> shoot_on(const Equation& eq, const PotentialModel& model,
                                    const ShootingConfig& cfg) {
  const Mesh& mesh = eq.mesh;
  const std::size_t last = 2 * static_cast<std::size_t>(mesh.steps);
  if (!(eq.q(last) > 0.0)) return std::nullopt;

  const auto start = left_start(eq, model, cfg);
  if (!start) return std::nullopt;
  const State left = *start;
  State right{1.0, -std::sqrt(eq.q(last))};

  // node indices (0..steps)
  std::optional<std::size_t> turning;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(mesh.steps); ++k) {
    if (eq.q(2 * k) < 0.0) turning = k;
  }
  if (!turning) return std::nullopt;

  const double r_match = cfg.r_min + cfg.match_point * (cfg.r_max - cfg.r_min);
  std::size_t match = 1;
  for (std::size_t k = 1; k < static_cast<std::size_t>(mesh.steps); ++k) {
    if (std::abs(mesh.r[2 * k] - r_match) < std::abs(mesh.r[2 * match] - r_match)) match = k;
  }
  const std::size_t tp = *turning;
  const double length = cfg.r_scale;

  int nodes = 0;
  State at_match_left = left;
  {
    State y = left;
    int prev = sign_of(y.u);
    const std::size_t stop = std::max(match, tp);
    for (std::size_t k = 0; k < stop; ++k) {
      y = rk4_step(eq, 2 * k, +1, y);
      rescale(y, length);
      if (k + 1 <= tp) {
        const int s = sign_of(y.u);
        if (s != 0 && prev != 0 && s != prev) ++nodes;
        if (s != 0) prev = s;
      }
      if (k + 1 == match) at_match_left = y;
    }
    if (match == 0) at_match_left = left;
  }
  State at_match_right = right;
  {
    State y = right;
    int prev = sign_of(y.u);
    const std::size_t stop = std::min(match, tp);
    for (std::size_t k = static_cast<std::size_t>(mesh.steps); k > stop; --k) {
      y = rk4_step(eq, 2 * k, -1, y);
      rescale(y, length);
      if (k - 1 >= tp) {
        const int s = sign_of(y.u);
        if (s != 0 && prev != 0 && s != prev) ++nodes;
        if (s != 0) prev = s;
      }
      if (k - 1 == match) at_match_right = y;
    }
  }
  const State& a = at_match_left;
  const State& b = at_match_right;
  const double wronskian = length * (a.v * b.u - a.u * b.v);
  const double na = std::hypot(a.u, length * a.v);
  const double nb = std::hypot(b.u, length * b.v);
  if (!(na > 0.0) || !(nb > 0.0) || !std::isfinite(wronskian)) return std::nullopt;
  return ShootResult{wronskian / (na * nb), nodes};
}

std::optional<int> sturm_on(const Equation& eq, const PotentialModel& model,
                            const ShootingConfig& cfg) {
  const Mesh& mesh = eq.mesh;
  const auto start = left_start(eq, model, cfg);
  if (!start) return std::nullopt;
  State y = *start;
  int prev = sign_of(y.u);
  int nodes = 0;
  for (std::size_t k = 0; k < static_cast<std::size_t>(mesh.steps); ++k) {
    y = rk4_step(eq, 2 * k, +1, y);
    rescale(y, cfg.r_scale);
    const int s = sign_of(y.u);
    if (s != 0 && prev != 0 && s != prev) ++nodes;
    if (s != 0) prev = s;
  }
  return nodes;
}

struct Sample {
  double energy = 0.0;
  std::optional<int> count;
};

class Scanner {
 public:
  Scanner(const PotentialModel& model, CouplingFn couplings, Centrifugal mode,
          const OracleOptions& options)
      : model_(model), couplings_(std::move(couplings)), mode_(mode), options_(options) {}

  std::optional<ShootingConfig> config_at(double e, const ResolutionPolicy& policy) const {
    if (options_.fixed) return options_.fixed;
    return auto_config(model_, couplings_(e), mode_, policy);
  }

  std::optional<int> count_at(double e) const {
    const auto cfg = config_at(e, options_.scan);
    if (!cfg) return std::nullopt;
    return sturm_count(model_, couplings_(e), *cfg, mode_);
  }

  struct Root {
    double energy;
    double mismatch;
    int nodes;
    double lo;
    double hi;
  };

  std::vector<Root> run(const SearchWindow& window) {
    window.validate();
    const int npts = std::max(16, std::min(window.grid_points, options_.scan_points));
    std::vector<Sample> samples(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i) {
      const double e = i + 1 == npts
                           ? window.e_max
                           : window.e_min + (window.e_max - window.e_min) * i / (npts - 1);
      samples[static_cast<std::size_t>(i)] = {e, count_at(e)};
    }
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const Sample& a = samples[i];
      const Sample& b = samples[i + 1];
      if (a.count.has_value() != b.count.has_value()) {
        if (beyond_cap(a.count ? *a.count : *b.count)) continue;
        // Levels just below threshold hide next to the undefined region.
        const Sample edge = edge_sample(a.count ? a : b, a.count ? b : a);
        if (a.count) {
          process(a, edge, 0);
        } else {
          process(edge, b, 0);
        }
        continue;
      }
      process(a, b, 0);
    }
    // One level per node count; a duplicate comes from a spurious bracket.
    std::map<int, Root> best;
    for (const Root& r : roots_) {
      auto it = best.find(r.nodes);
      if (it == best.end() || std::abs(r.mismatch) < std::abs(it->second.mismatch)) {
        best[r.nodes] = r;
      }
    }
    std::vector<Root> out;
    for (const auto& kv : best) out.push_back(kv.second);
    std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) { return a.energy < b.energy; });
    return out;
  }

 private:
  bool beyond_cap(int count) const { return options_.max_nodes && count > *options_.max_nodes; }

  Sample edge_sample(Sample valid, double invalid_energy) {
    for (int k = 0; k < options_.edge_iterations; ++k) {
      const double mid = 0.5 * (valid.energy + invalid_energy);
      if (mid == valid.energy || mid == invalid_energy) break;
      const auto c = count_at(mid);
      if (c) {
        valid = {mid, c};
      } else {
        invalid_energy = mid;
      }
    }
    return valid;
  }
  Sample edge_sample(const Sample& valid, const Sample& invalid) {
    return edge_sample(valid, invalid.energy);
  }

  void process(const Sample& a, const Sample& b, int depth) {
    if (!a.count || !b.count) return;
    const int jump = std::abs(*a.count - *b.count);
    if (jump == 0 || beyond_cap(std::min(*a.count, *b.count))) return;
    if (jump == 1 || depth >= options_.max_subdivisions) {
      refine(a, b);
      return;
    }
    const double mid = 0.5 * (a.energy + b.energy);
    const Sample m{mid, count_at(mid)};
    process(a, m, depth + 1);
    process(m, b, depth + 1);
  }

  void refine(const Sample& a, const Sample& b) {
    Sample lo = a;
    Sample hi = b;
    for (int attempt = 0; attempt <= options_.edge_iterations; ++attempt) {
      if (try_refine(lo.energy, hi.energy)) return;
      // Shooting failed at an end or the mismatch did not straddle: shrink
      // the bracket around the count step and retry.
      const double mid = 0.5 * (lo.energy + hi.energy);
      if (mid == lo.energy || mid == hi.energy) return;
      const Sample m{mid, count_at(mid)};
      // an undefined gap inside the bracket leaves the step unlocated
      if (!m.count) return;
      if (*m.count == *lo.count) {
        lo = m;
      } else {
        hi = m;
      }
    }
  }

  bool try_refine(double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    std::optional<ShootingConfig> cfg = config_at(mid, options_.refine);
    if (!cfg) cfg = config_at(lo, options_.refine);
    if (!cfg) cfg = config_at(hi, options_.refine);
    if (!cfg) return false;
    try {
      const Mesh mesh = build_mesh(model_, *cfg, mode_);
      const auto f = [&](double e) {
        const auto r = shoot_on(Equation{mesh, couplings_(e)}, model_, *cfg);
        if (!r) throw ShootFailed{};
        return r->mismatch;
      };
      const double fa = f(lo);
      const double fb = f(hi);
      if (sign_of(fa) == sign_of(fb) && fa != 0.0) return false;
      const RootResult root = brent(f, lo, hi, fa, fb, 0.0, 300);
      const auto final_shot = shoot_on(Equation{mesh, couplings_(root.root)}, model_, *cfg);
      if (!final_shot) return false;
      roots_.push_back({root.root, final_shot->mismatch, final_shot->nodes, lo, hi});
      return true;
    } catch (const ShootFailed&) {
      return false;
    }
  }

  const PotentialModel& model_;
  CouplingFn couplings_;
  Centrifugal mode_;
  const OracleOptions& options_;
  std::vector<Root> roots_;
};

}  // namespace

void validate(const ShootingConfig& cfg) {
  if (cfg.steps < 2000) {
    throw std::invalid_argument("shooting needs at least 2000 steps");
  }
  if (!(cfg.match_point > 0.0 && cfg.match_point < 1.0)) {
    throw std::invalid_argument("match point must be a fraction in (0, 1)");
  }
  if (!(cfg.r_min < cfg.r_max) || (!cfg.full_line && !(cfg.r_min > 0.0))) {
    throw std::invalid_argument("shooting interval must satisfy 0 < r_min < r_max");
  }
  if (!(cfg.r_scale > 0.0)) {
    throw std::invalid_argument("r_scale must be positive");
  }
}

std::optional<ShootingConfig> auto_config(const PotentialModel& model, const ReducedCouplings& rc,
                                          Centrifugal mode, const ResolutionPolicy& policy) {
  const double scale = length_scale(model);
  ShootingConfig cfg;
  cfg.match_point = policy.match_point;

  if (full_line_domain(model, mode)) {
    const auto& mo = std::get<Morse>(model);
    const double range = 1.0 / mo.beta;
    const Probe p = make_probe(model, rc, mode, mo.r0 - 60.0 * range, mo.r0 + 600.0 * range, 8000,
                               false);
    std::size_t first = p.r.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      if (p.q[i] < 0.0) {
        first = std::min(first, i);
        last = i;
      }
    }
    if (first == p.r.size()) return std::nullopt;
    const std::size_t lo = decay_index(p, first, -1, policy.decay_exponent);
    const std::size_t hi = decay_index(p, last, +1, policy.decay_exponent);
    if (!(p.q[lo] > 0.0) || !(p.q[hi] > 0.0)) return std::nullopt;
    cfg.full_line = true;
    cfg.r_min = p.r[lo];
    cfg.r_max = p.r[hi];
    cfg.r_scale = range;
    // Under the wall the solution only grows in the integration direction and
    // the mismatch is scale-free, so those steps can be much longer.
    double kmax = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
      const double k = std::sqrt(std::abs(p.q[i]));
      kmax = std::max(kmax, p.q[i] < 0.0 ? k : k / kForbiddenStretch);
    }
    const double h = policy.phase_step / std::max(kmax, 1e-12);
    cfg.steps = clamp_steps((cfg.r_max - cfg.r_min) / h, policy);
    return cfg;
  }

  const SmallRadius small = small_radius_behaviour(model, rc);
  if (!(small.inverse_square >= -0.25)) return std::nullopt;
  const Probe p = make_probe(model, rc, mode, 1e-6 * scale, 1e5 * scale, 3000, true);
  std::optional<std::size_t> turning;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    if (p.q[i] < 0.0) turning = i;
  }
  if (!turning) return std::nullopt;
  const std::size_t hi = decay_index(p, *turning, +1, policy.decay_exponent);
  if (!(p.q[hi] > 0.0)) return std::nullopt;
  cfg.r_min = 1e-6 * scale;
  cfg.r_max = p.r[hi];
  cfg.r_scale = 0.5 * std::max(scale, p.r[*turning]);
  double kmax = 0.0;
  for (std::size_t i = 0; i <= hi; ++i) {
    const double r = p.r[i];
    kmax = std::max(kmax, std::sqrt(std::abs(p.q[i])) * r * cfg.r_scale / (cfg.r_scale + r));
  }
  const double t_range = mapped_t(cfg.r_max, cfg.r_scale) - mapped_t(cfg.r_min, cfg.r_scale);
  const double h = policy.phase_step / std::max(kmax, 1e-12);
  cfg.steps = clamp_steps(t_range / h, policy);
  return cfg;
}

void check_domain(const PotentialModel& model, const ShootingConfig& cfg, Centrifugal mode) {
  validate(cfg);
  if (cfg.full_line != full_line_domain(model, mode)) {
    throw std::invalid_argument("shooting config domain does not match the model treatment");
  }
}

std::optional<ShootResult> shoot(const PotentialModel& model, const ReducedCouplings& rc,
                                 const ShootingConfig& cfg, Centrifugal mode) {
  check_domain(model, cfg, mode);
  const Mesh mesh = build_mesh(model, cfg, mode);
  return shoot_on(Equation{mesh, rc}, model, cfg);
}

std::optional<int> sturm_count(const PotentialModel& model, const ReducedCouplings& rc,
                               const ShootingConfig& cfg, Centrifugal mode) {
  check_domain(model, cfg, mode);
  const Mesh mesh = build_mesh(model, cfg, mode);
  return sturm_on(Equation{mesh, rc}, model, cfg);
}

std::optional<double> shoot_mismatch(const PotentialModel& model, const DiracContext& ctx,
                                     int kappa, double energy, const ShootingConfig& cfg,
                                     Centrifugal mode) {
  const auto r = shoot(model, reduced_couplings(ctx, kappa, energy), cfg, mode);
  if (!r) return std::nullopt;
  return r->mismatch;
}

std::vector<EnergyLevel> oracle_levels(const PotentialModel& model, const DiracContext& ctx,
                                       int kappa, const SearchWindow& window, Centrifugal mode,
                                       const OracleOptions& options) {
  validate(model);
  validate(ctx);
  if (kappa == 0) throw std::invalid_argument("kappa must be nonzero");
  Scanner scanner(
      model, [ctx, kappa](double e) { return reduced_couplings(ctx, kappa, e); }, mode, options);
  std::vector<EnergyLevel> out;
  for (const auto& root : scanner.run(window)) {
    EnergyLevel level;
    level.state = QuantumState{root.nodes, kappa};
    level.gamma = ctx.gamma;
    level.energy = root.energy;
    level.residual = root.mismatch;
    level.bracket_lo = root.lo;
    level.bracket_hi = root.hi;
    level.method = LevelMethod::Oracle;
    level.model = model_name(model);
    level.symmetry = ctx.symmetry;
    out.push_back(level);
  }
  return out;
}

std::vector<SchrodingerLevel> schrodinger_levels(const PotentialModel& model, int ell,
                                                 double mass, const SearchWindow& window,
                                                 Centrifugal mode, const OracleOptions& options) {
  validate(model);
  if (ell < 0) throw std::invalid_argument("ell must be non-negative");
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  Scanner scanner(
      model, [mass, ell](double e) { return schrodinger_couplings(mass, ell, e); }, mode, options);
  std::vector<SchrodingerLevel> out;
  for (const auto& root : scanner.run(window)) {
    out.push_back({root.nodes, root.energy});
  }
  return out;
}

}  // namespace diracsym
