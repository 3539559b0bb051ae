#include "diracsym/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "diracsym/parametric_solver.hpp"
#include "diracsym/roots.hpp"

namespace diracsym {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxIsolationDepth = 60;

struct DomainGap {};

double soft_sqrt(double x) { return x >= 0.0 ? std::sqrt(x) : kNaN; }

double relative_gap(double lhs, double rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  if (lhs == rhs) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

std::string form_name(const PotentialModel& model, Symmetry symmetry) {
  return model_name(model) + "_" + symmetry_name(symmetry);
}

class LevelScanner {
 public:
  LevelScanner(const PotentialModel& model, const DiracContext& ctx, const QuantumState& state,
               double tol, LevelSearch& out)
      : model_(model), ctx_(ctx), state_(state), tol_(tol), out_(out) {}

  double eval(double e) const {
    const auto r = energy_residual(model_, ctx_, state_, e);
    if (!r) throw DomainGap{};
    return *r;
  }

  void refine(double a, double b, double fa, double fb, double lo, double hi, int depth) {
    const auto f = [this](double e) { return eval(e); };
    RootResult root;
    try {
      root = brent(f, a, b, fa, fb, 0.0);
    } catch (const DomainGap&) {
      std::ostringstream msg;
      msg << "sign change across a domain gap in [" << a << ", " << b << "] ignored";
      out_.diagnostics.push_back(msg.str());
      return;
    }
    // A bracket can hide an odd number of roots. Probe just beside the root;
    // a sign flip relative to the bracket end means another root on that side.
    const double delta = std::max(tol_, 64.0 * std::numeric_limits<double>::epsilon() *
                                            std::max(1.0, std::abs(root.root)));
    const auto probe_side = [&](double end, double f_end, double inner) {
      if ((end < inner) != (end < root.root) || std::abs(inner - end) <= delta) return;
      double f_inner;
      try {
        f_inner = eval(inner);
      } catch (const DomainGap&) {
        return;
      }
      if (f_inner == 0.0 || (f_inner > 0.0) == (f_end > 0.0)) return;
      if (depth >= kMaxIsolationDepth) {
        std::ostringstream msg;
        msg << "root isolation aborted after " << kMaxIsolationDepth << " levels near E = "
            << root.root;
        out_.diagnostics.push_back(msg.str());
        return;
      }
      if (end < inner) {
        refine(end, inner, f_end, f_inner, lo, hi, depth + 1);
      } else {
        refine(inner, end, f_inner, f_end, lo, hi, depth + 1);
      }
    };
    probe_side(a, fa, root.root - delta);
    probe_side(b, fb, root.root + delta);

    EnergyLevel level;
    level.state = state_;
    level.gamma = ctx_.gamma;
    level.energy = root.root;
    level.residual = root.value;
    level.bracket_lo = lo;
    level.bracket_hi = hi;
    level.method = LevelMethod::ClosedFormRoot;
    level.model = model_name(model_);
    level.symmetry = ctx_.symmetry;
    if (!root.converged) {
      out_.diagnostics.push_back("root refinement hit the iteration limit near E = " +
                                 std::to_string(root.root));
    }
    out_.levels.push_back(level);
  }

 private:
  const PotentialModel& model_;
  const DiracContext& ctx_;
  const QuantumState& state_;
  double tol_;
  LevelSearch& out_;
};

}  // namespace

std::string method_name(LevelMethod method) {
  return method == LevelMethod::ClosedFormRoot ? "closed_form_root" : "oracle";
}

LevelMethod parse_method(const std::string& name) {
  if (name == "closed_form_root") return LevelMethod::ClosedFormRoot;
  if (name == "oracle") return LevelMethod::Oracle;
  throw std::invalid_argument("unknown level method '" + name + "'");
}

void SearchWindow::validate() const {
  if (!std::isfinite(e_min) || !std::isfinite(e_max) || !(e_min < e_max)) {
    throw std::invalid_argument("search window requires finite e_min < e_max");
  }
  if (grid_points < 16) {
    throw std::invalid_argument("search window requires grid_points >= 16");
  }
}

SearchWindow default_window(const PotentialModel& model, const DiracContext& ctx) {
  const double reach = ctx.mass + std::abs(ctx.C) + well_depth(model);
  return SearchWindow{-reach, reach, 2048};
}

std::optional<double> energy_residual(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double energy) {
  if (!std::isfinite(energy)) return std::nullopt;
  return normalizable_residual(parametric_form(model, ctx, state.kappa, energy), state.n);
}

LevelSearch find_levels(const PotentialModel& model, const DiracContext& ctx,
                        const QuantumState& state, const SearchWindow& window, double tol) {
  window.validate();
  if (!(tol > 0.0)) {
    throw std::invalid_argument("root tolerance must be positive");
  }
  validate(model);
  validate(ctx);

  LevelSearch out;
  const int npts = window.grid_points;
  const double step = (window.e_max - window.e_min) / (npts - 1);
  std::vector<double> grid(static_cast<std::size_t>(npts));
  std::vector<std::optional<double>> values(grid.size());
  bool any_valid = false;
  for (int i = 0; i < npts; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    grid[idx] = i + 1 == npts ? window.e_max : window.e_min + i * step;
    values[idx] = energy_residual(model, ctx, state, grid[idx]);
    any_valid = any_valid || values[idx].has_value();
  }
  if (!any_valid) {
    out.domain_excluded = true;
    out.diagnostics.push_back("domain fully excluded: no grid energy in [" +
                              std::to_string(window.e_min) + ", " + std::to_string(window.e_max) +
                              "] admits real exponents for " + state.label());
    return out;
  }

  LevelScanner scanner(model, ctx, state, tol, out);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto& fa = values[i];
    const auto& fb = values[i + 1];
    if (fa.has_value() != fb.has_value()) {
      // A level can sit between the last valid node and the domain edge
      // (typically just below threshold), so close in on the edge first.
      double valid = fa ? grid[i] : grid[i + 1];
      double invalid = fa ? grid[i + 1] : grid[i];
      double f_valid = fa ? *fa : *fb;
      const double f_node = f_valid;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (valid + invalid);
        if (mid == valid || mid == invalid) break;
        const auto fm = energy_residual(model, ctx, state, mid);
        if (fm) {
          valid = mid;
          f_valid = *fm;
        } else {
          invalid = mid;
        }
      }
      const double node = fa ? grid[i] : grid[i + 1];
      if (f_valid != 0.0 && f_node != 0.0 && (f_valid > 0.0) != (f_node > 0.0)) {
        const double a = std::min(node, valid);
        const double b = std::max(node, valid);
        const double f_a = node < valid ? f_node : f_valid;
        const double f_b = node < valid ? f_valid : f_node;
        scanner.refine(a, b, f_a, f_b, grid[i], grid[i + 1], 0);
      }
      continue;
    }
    if (!fa || !fb) continue;
    if (*fa == 0.0) {
      // exact zero on a grid node: report once, bracketed by its neighbours
      const double lo = i > 0 ? grid[i - 1] : grid[i];
      scanner.refine(grid[i], grid[i], 0.0, 0.0, lo, grid[i + 1], 0);
      continue;
    }
    if (*fb == 0.0) continue;
    if ((*fa > 0.0) != (*fb > 0.0)) {
      scanner.refine(grid[i], grid[i + 1], *fa, *fb, grid[i], grid[i + 1], 0);
    }
  }
  if (!values.back() || *values.back() != 0.0) {
    // nothing to do; a zero on the last node is handled below
  } else {
    const std::size_t last = grid.size() - 1;
    scanner.refine(grid[last], grid[last], 0.0, 0.0, grid[last - 1], grid[last], 0);
  }

  std::sort(out.levels.begin(), out.levels.end(),
            [](const EnergyLevel& x, const EnergyLevel& y) { return x.energy < y.energy; });
  out.levels.erase(std::unique(out.levels.begin(), out.levels.end(),
                               [](const EnergyLevel& x, const EnergyLevel& y) {
                                 return x.energy == y.energy;
                               }),
                   out.levels.end());
  return out;
}

std::optional<EnergyLevel> find_level(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double tol) {
  const LevelSearch search = find_levels(model, ctx, state, default_window(model, ctx), tol);
  if (search.levels.empty()) return std::nullopt;
  return search.levels.front();
}

bool has_printed_formula(const PotentialModel& model, Symmetry symmetry) {
  if (std::holds_alternative<PoschlTeller>(model) || std::holds_alternative<Morse>(model)) {
    return true;
  }
  return symmetry == Symmetry::Spin;
}

FormulaCheck printed_formula_residual(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double energy,
                                      FormulaVariant variant) {
  const bool printed = variant == FormulaVariant::Printed;
  if (printed && !has_printed_formula(model, ctx.symmetry)) {
    throw std::invalid_argument("no printed energy formula for " +
                                form_name(model, ctx.symmetry));
  }
  const ReducedCouplings rc = reduced_couplings(ctx, state.kappa, energy);
  const double K = rc.coupling;
  const double lam = rc.eigen_term;
  const double om = rc.omega;
  const double n = state.n;
  const double nplushalf = n + 0.5;

  FormulaCheck out;
  out.form = form_name(model, ctx.symmetry);
  out.variant = variant;
  out.reliable = true;

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PoschlTeller>) {
          const double a2 = p.alpha * p.alpha;
          const double brace = nplushalf - 0.25 * soft_sqrt(1.0 + 4.0 / a2 * K * p.A * (p.A + p.alpha)) +
                               0.25 * soft_sqrt(1.0 + 4.0 / a2 * K * p.B * (p.B - p.alpha) + 4.0 * om);
          out.lhs = lam;
          out.rhs = -4.0 * a2 * brace * brace;
        } else if constexpr (std::is_same_v<T, Morse>) {
          const double alpha = p.r0 * p.beta;
          const PekerisCoefficients d = pekeris_coefficients(alpha);
          const double dr2 = p.depth * p.r0 * p.r0 * K;
          const double ratio = (2.0 * dr2 - om * d.d1) / (2.0 * soft_sqrt(dr2 + om * d.d2));
          const double shift = printed ? nplushalf * ctx.gamma : nplushalf * alpha;
          const double lead = printed ? om * p.depth : om * d.d0;
          const double brace = ratio - shift;
          out.lhs = lam;
          out.rhs = (lead - brace * brace) / (p.r0 * p.r0);
          out.reliable = !printed;
        } else if constexpr (std::is_same_v<T, Mie>) {
          const double l2 = p.a * p.V0 * K;
          const double den = 2.0 * n + 1.0 + soft_sqrt(1.0 + 4.0 * (om + 0.5 * p.a * p.a * p.V0 * K));
          out.lhs = lam;
          out.rhs = -l2 * l2 / (den * den);
        } else if constexpr (std::is_same_v<T, Pseudoharmonic>) {
          const double l3 = 0.25 * (om + K * p.V0 * p.r0 * p.r0);
          const double bracket = 2.0 * n + 1.0 + 0.5 * soft_sqrt(1.0 + 16.0 * l3);
          const double root = printed ? soft_sqrt(K / (4.0 * p.r0 * p.r0))
                                      : soft_sqrt(K * p.V0 / (4.0 * p.r0 * p.r0));
          out.lhs = 2.0 * p.V0 * K + lam;
          out.rhs = 4.0 * root * bracket;
          out.reliable = !printed;
        } else if constexpr (std::is_same_v<T, KratzerFues>) {
          const double l3 = om + p.re * p.re * K * p.De;
          const double den = 2.0 * n + 1.0 + soft_sqrt(1.0 + 4.0 * l3);
          const double numer = printed ? 4.0 * p.re * p.re * K
                                       : 4.0 * p.re * p.re * K * p.De * p.De;
          out.lhs = lam / K - p.De;
          out.rhs = -numer / (den * den);
          out.reliable = !printed;
        }
      },
      model);
  out.relative_residual = relative_gap(out.lhs, out.rhs);
  if (!std::isfinite(out.lhs) || !std::isfinite(out.rhs)) out.relative_residual = kNaN;
  return out;
}

double doublet_splitting(const PotentialModel& model, const DiracContext& ctx, int n, int ell,
                         double tol) {
  if (ell < 1) {
    throw std::invalid_argument("a spin doublet needs ell >= 1");
  }
  const QuantumState unaligned = make_state(n, ell);
  const QuantumState aligned = make_state(n, -ell - 1);
  const auto up = find_level(model, ctx, unaligned, tol);
  if (!up) throw PartnerNotFound("partner not found: no bound level for " + unaligned.label());
  const auto down = find_level(model, ctx, aligned, tol);
  if (!down) throw PartnerNotFound("partner not found: no bound level for " + aligned.label());
  return up->energy - down->energy;
}

std::optional<double> nonrelativistic_limit(const PotentialModel& model, int n, int ell,
                                            double mass) {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  validate(model);
  // Every mapping is affine in the eigen term; evaluate the rest at eigen_term = 0.
  const ReducedCouplings rc = schrodinger_couplings(mass, ell, 0.0);
  const ParametricCoefficients c = parametric_form(model, rc);
  const double nn = n;
  std::optional<double> lam;

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PoschlTeller>) {
          try {
            const BranchSolution sol = jacobi_exponents(c);
            const double x = sol.q0 - sol.p0 + nn;
            if (x < 0.0) lam = -4.0 * p.alpha * p.alpha * x * x;
          } catch (const NoRealExponent&) {
          }
        } else if constexpr (std::is_same_v<T, Morse>) {
          if (c.lambda1 > 0.0) {
            const double root_l3 = c.lambda2 / (2.0 * std::sqrt(c.lambda1)) - (nn + 0.5);
            if (root_l3 >= 0.0) {
              const double alpha = p.r0 * p.beta;
              // lambda3 = (omega D0 - lam r0^2)/alpha^2 and c.lambda3 holds omega D0/alpha^2
              lam = alpha * alpha * (c.lambda3 - root_l3 * root_l3) / (p.r0 * p.r0);
            }
          }
        } else if constexpr (std::is_same_v<T, Mie> || std::is_same_v<T, KratzerFues>) {
          const double disc = 1.0 + 4.0 * c.lambda3;
          if (disc >= 0.0 && c.lambda2 > 0.0) {
            const double den = 2.0 * nn + 1.0 + std::sqrt(disc);
            // Mie: lambda1 = -lam; Kratzer-Fues: lambda1 = K De - lam
            lam = c.lambda1 - c.lambda2 * c.lambda2 / (den * den);
          }
        } else if constexpr (std::is_same_v<T, Pseudoharmonic>) {
          const double disc = 1.0 + 16.0 * c.lambda3;
          if (disc >= 0.0 && c.lambda1 > 0.0) {
            // lambda2 = (2 V0 K + lam)/4, c.lambda2 holds 2 V0 K / 4
            lam = 4.0 * (std::sqrt(c.lambda1) * (2.0 * nn + 1.0 + 0.5 * std::sqrt(disc)) -
                         c.lambda2);
          }
        }
      },
      model);
  if (!lam) return std::nullopt;
  return *lam / rc.coupling;
}

}  // namespace diracsym
