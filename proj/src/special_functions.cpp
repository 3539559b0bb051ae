#include "diracsym/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>

#include "diracsym/parametric_solver.hpp"
#include "diracsym/spectrum.hpp"

namespace diracsym {

namespace {

constexpr int kMaxDegree = 200;
constexpr double kLogEnvelopeDrop = 27.631021115928547;  // ln(1e12)

void check_degree(int n) {
  if (n < 0 || n > kMaxDegree) {
    throw std::invalid_argument("polynomial degree must be in [0, 200]");
  }
}

double binomial(double z, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) {
    out *= (z - i) / (i + 1.0);
  }
  return out;
}

double log_sinh(double x) {
  return x > 20.0 ? x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x)) : std::log(std::sinh(x));
}

double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0); }

struct LogValue {
  double log_mag = -std::numeric_limits<double>::infinity();
  double sign = 0.0;
};

LogValue from_value(double v) {
  if (v == 0.0) return {};
  return {std::log(std::abs(v)), v > 0.0 ? 1.0 : -1.0};
}

/// Closed-form solved component at radius r, in log form.
class ClosedForm {
 public:
  ClosedForm(const PotentialModel& model, const ParametricCoefficients& coeffs, int n)
      : model_(model), n_(n) {
    if (coeffs.c3 != 0.0) {
      sol_ = jacobi_exponents(coeffs);
      coefficients_.resize(static_cast<std::size_t>(n) + 1);
      for (int k = 0; k <= n; ++k) {
        coefficients_[static_cast<std::size_t>(k)] =
            binomial(n + sol_.alpha_idx, n - k) * binomial(n + sol_.beta_idx, k);
      }
    } else {
      sol_ = laguerre_exponents(coeffs);
      arg_scale_ = 2.0 * sol_.p0 - coeffs.c2;
    }
  }

  LogValue operator()(double r) const {
    return std::visit(
        [&](const auto& p) -> LogValue {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, PoschlTeller>) {
            // s = sinh^2, 1 + s = cosh^2, P_n(1 + 2s) = (1+s)^n sum c_k tanh^(2k)
            const double x = p.alpha * r;
            const double log_s = 2.0 * log_sinh(x);
            const double log_1s = 2.0 * log_cosh(x);
            const double th = std::tanh(x);
            const double tau = th * th;
            double poly = 0.0;
            for (int k = n_; k >= 0; --k) {
              poly = poly * tau + coefficients_[static_cast<std::size_t>(k)];
            }
            LogValue lv = from_value(poly);
            lv.log_mag += (n_ - sol_.p0) * log_1s + sol_.q0 * log_s;
            return lv;
          } else if constexpr (std::is_same_v<T, Morse>) {
            const double alpha = p.r0 * p.beta;
            const double log_s = -alpha * (r - p.r0) / p.r0;
            const double s = std::exp(log_s);
            LogValue lv = from_value(laguerre_poly(n_, sol_.k_idx, arg_scale_ * s));
            lv.log_mag += -sol_.p0 * s + sol_.q0 * log_s;
            return lv;
          } else if constexpr (std::is_same_v<T, Pseudoharmonic>) {
            const double s = r * r;
            LogValue lv = from_value(laguerre_poly(n_, sol_.k_idx, arg_scale_ * s));
            lv.log_mag += std::log(r) - sol_.p0 * s + 2.0 * sol_.q0 * std::log(r);
            return lv;
          } else {
            // Mie and Kratzer-Fues: s = r, u = r G
            LogValue lv = from_value(laguerre_poly(n_, sol_.k_idx, arg_scale_ * r));
            lv.log_mag += std::log(r) - sol_.p0 * r + sol_.q0 * std::log(r);
            return lv;
          }
        },
        model_);
  }

 private:
  const PotentialModel& model_;
  int n_;
  BranchSolution sol_;
  std::vector<double> coefficients_;
  double arg_scale_ = 0.0;
};

/// Finite-difference weights for derivatives 0..2 at z on the nodes x (Fornberg).
std::array<std::array<double, 5>, 3> fd_weights(double z, const double* x) {
  constexpr int m = 5;
  std::array<std::array<double, 5>, 3> c{};
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < m; ++i) {
    const int mn = std::min(i, 2);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

double max_abs(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, std::abs(x));
  return out;
}

}  // namespace

double jacobi_poly(int n, double alpha, double beta, double x) {
  check_degree(n);
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw std::invalid_argument("jacobi_poly requires alpha > -1 and beta > -1");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = (alpha + 1.0) + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
  const double ab = alpha + beta;
  for (int k = 2; k <= n; ++k) {
    const double two_k_ab = 2.0 * k + ab;
    const double a1 = 2.0 * k * (k + ab) * (two_k_ab - 2.0);
    const double a2 = (two_k_ab - 1.0) * (alpha * alpha - beta * beta);
    const double a3 = (two_k_ab - 2.0) * (two_k_ab - 1.0) * two_k_ab;
    const double a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * two_k_ab;
    const double next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi_poly_general(int n, double alpha, double beta, double x) {
  check_degree(n);
  // Expand about the nearer endpoint; P(alpha, beta; x) = (-1)^n P(beta, alpha; -x).
  const bool beta_pole = beta <= -1.0 && beta == std::floor(beta);
  if (x < 0.0 && !beta_pole) {
    std::swap(alpha, beta);
    x = -x;
    if (n % 2 == 1) return -jacobi_poly_general(n, alpha, beta, x);
    return jacobi_poly_general(n, alpha, beta, x);
  }
  // (alpha+1)_n / n! 2F1(-n, n+alpha+beta+1; alpha+1; (1-x)/2). Its terms cancel far
  // less than the binomial sum's when beta < -1, and the extended accumulator absorbs the rest.
  const long double z = 0.5L * (1.0L - x);
  long double term = binomial(n + alpha, n);
  long double sum = 0.0L;
  for (int k = 0; k <= n; ++k) {
    sum += term;
    term *= (k - n) * (n + alpha + beta + 1.0L + k) / ((alpha + 1.0L + k) * (k + 1.0L)) * z;
  }
  return static_cast<double>(sum);
}

double laguerre_poly(int n, double k, double x) {
  check_degree(n);
  if (!(k > -1.0)) {
    throw std::invalid_argument("laguerre_poly requires k > -1");
  }
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> composite_grid(double r_min, double r_switch, double r_max, int points) {
  if (!(r_min > 0.0) || !(r_min < r_switch) || !(r_switch < r_max)) {
    throw std::invalid_argument("composite grid requires 0 < r_min < r_switch < r_max");
  }
  if (points < 9 || points % 2 == 0) {
    throw std::invalid_argument("composite grid needs an odd number of points >= 9");
  }
  const int n_geo = points / 4 + 1;
  const int n_uni = points - n_geo + 1;
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(points));
  const double ratio = std::log(r_switch / r_min) / (n_geo - 1);
  for (int i = 0; i < n_geo - 1; ++i) {
    r.push_back(r_min * std::exp(ratio * i));
  }
  const double h = (r_max - r_switch) / (n_uni - 1);
  for (int i = 0; i < n_uni; ++i) {
    r.push_back(i + 1 == n_uni ? r_max : r_switch + h * i);
  }
  return r;
}

std::vector<double> wavefunction_grid(const PotentialModel& model, const DiracContext& ctx,
                                      const QuantumState& state, double energy, int points) {
  const ParametricCoefficients coeffs = parametric_form(model, ctx, state.kappa, energy);
  const ClosedForm u(model, coeffs, state.n);
  const double scale = length_scale(model);
  const double r_min = 1e-6 * scale;

  constexpr int probes = 4000;
  const double log_lo = std::log(r_min);
  const double log_hi = std::log(1e4 * scale);
  std::vector<double> rs(probes);
  std::vector<double> logs(probes);
  double peak = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < probes; ++i) {
    rs[static_cast<std::size_t>(i)] = std::exp(log_lo + (log_hi - log_lo) * i / (probes - 1));
    logs[static_cast<std::size_t>(i)] = u(rs[static_cast<std::size_t>(i)]).log_mag;
    peak = std::max(peak, logs[static_cast<std::size_t>(i)]);
  }
  std::size_t last = 0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (logs[i] > peak - kLogEnvelopeDrop) last = i;
  }
  const double r_max = rs[std::min(last + 1, rs.size() - 1)];
  // Put the switch where the last geometric step equals the uniform step. A jump in
  // spacing there costs the difference stencils their order.
  const int n_geo = points / 4 + 1;
  const int n_uni = points - n_geo + 1;
  auto mismatch = [&](double rs) {
    return rs * std::log(rs / r_min) / (n_geo - 1) - (r_max - rs) / (n_uni - 1);
  };
  double lo = r_min * std::exp(1.0);
  double hi = r_max;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mismatch(mid) < 0.0 ? lo : hi) = mid;
  }
  return composite_grid(r_min, 0.5 * (lo + hi), r_max, points);
}

RadialSolution assemble_wavefunction(const PotentialModel& model, const DiracContext& ctx,
                                     const QuantumState& state, double energy,
                                     const std::vector<double>& r_grid, double root_tol) {
  const ParametricCoefficients coeffs = parametric_form(model, ctx, state.kappa, energy);
  const auto residual = energy_residual(model, ctx, state, energy);
  if (!residual || std::abs(*residual) > root_tol * (1.0 + std::abs(coeffs.lambda2))) {
    throw std::invalid_argument("energy is not a bound-state root for " + state.label());
  }
  if (r_grid.size() < 5) {
    throw std::invalid_argument("radial grid needs at least 5 points");
  }
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1]))) {
      throw std::invalid_argument("radial grid must be positive and strictly increasing");
    }
  }

  const ClosedForm u(model, coeffs, state.n);
  std::vector<LogValue> values(r_grid.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    values[i] = u(r_grid[i]);
    peak = std::max(peak, values[i].log_mag);
  }
  std::vector<double> component(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    component[i] = values[i].sign * std::exp(values[i].log_mag - peak);
  }
  for (double v : component) {
    if (std::abs(v) > 1e-6) {
      if (v < 0.0) {
        for (double& w : component) w = -w;
      }
      break;
    }
  }

  RadialSolution out;
  out.r = r_grid;
  out.symmetry = ctx.symmetry;
  out.nodes = count_nodes(component);
  if (ctx.symmetry == Symmetry::Spin) {
    out.g = std::move(component);
    out.f.assign(r_grid.size(), 0.0);
  } else {
    out.f = std::move(component);
    out.g.assign(r_grid.size(), 0.0);
  }
  return out;
}

// The coupling in the partner equation is the constant K, so the potential
// itself does not enter.
RadialSolution partner_component(const PotentialModel& /*model*/, const DiracContext& ctx,
                                 const QuantumState& state, double energy,
                                 RadialSolution solution) {
  if (solution.r.size() % 2 == 0) {
    throw std::invalid_argument("normalization needs an odd number of grid points");
  }
  const double coupling = ctx.symmetry == Symmetry::Spin ? energy + ctx.mass - ctx.C
                                                          : energy - ctx.mass - ctx.C;
  const double scale = std::abs(energy) + ctx.mass + std::abs(ctx.C);
  if (std::abs(coupling) <= 1e-13 * scale) {
    throw CouplingSingular("coupling singular: the constant coupling vanishes at E = " +
                           std::to_string(energy));
  }
  const double kg = state.kappa + ctx.gamma;
  const auto& r = solution.r;
  if (ctx.symmetry == Symmetry::Spin) {
    const std::vector<double> dg = derivative(r, solution.g, 1);
    for (std::size_t i = 0; i < r.size(); ++i) {
      solution.f[i] = (dg[i] + kg * solution.g[i] / r[i]) / coupling;
    }
  } else {
    const std::vector<double> df = derivative(r, solution.f, 1);
    for (std::size_t i = 0; i < r.size(); ++i) {
      solution.g[i] = -(df[i] - kg * solution.f[i] / r[i]) / coupling;
    }
  }
  std::vector<double> density(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    density[i] = solution.g[i] * solution.g[i] + solution.f[i] * solution.f[i];
  }
  const double norm = std::sqrt(simpson(r, density));
  for (std::size_t i = 0; i < r.size(); ++i) {
    solution.g[i] /= norm;
    solution.f[i] /= norm;
  }
  solution.norm = norm;
  solution.has_partner = true;
  return solution;
}

double simpson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3 || x.size() % 2 == 0) {
    throw std::invalid_argument("simpson needs matching arrays of odd length >= 3");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 < x.size(); i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    const double hs = h0 + h1;
    sum += hs / 6.0 *
           ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
  }
  return sum;
}

std::vector<double> derivative(const std::vector<double>& x, const std::vector<double>& y,
                               int order) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("derivative order must be 1 or 2");
  }
  if (x.size() != y.size() || x.size() < 5) {
    throw std::invalid_argument("derivative needs matching arrays of length >= 5");
  }
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::min(i >= 2 ? i - 2 : 0, n - 5);
    const auto w = fd_weights(x[i], &x[start]);
    double acc = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      acc += w[static_cast<std::size_t>(order)][j] * y[start + j];
    }
    out[i] = acc;
  }
  return out;
}

int count_nodes(const std::vector<double>& y, double threshold) {
  const double cut = threshold * max_abs(y);
  int nodes = 0;
  double last_sign = 0.0;
  for (double v : y) {
    if (std::abs(v) <= cut) continue;
    const double s = v > 0.0 ? 1.0 : -1.0;
    if (last_sign != 0.0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

double ode_residual(const PotentialModel& model, const DiracContext& ctx,
                    const QuantumState& state, double energy, const RadialSolution& solution) {
  const auto& u = solution.solved();
  const auto& r = solution.r;
  const std::vector<double> d2 = derivative(r, u, 2);
  const ReducedCouplings rc = reduced_couplings(ctx, state.kappa, energy);
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 2; i + 2 < r.size(); ++i) {
    const double w = rc.omega * centrifugal_factor(model, r[i], Centrifugal::Approximate) +
                     rc.coupling * potential_profile(model, r[i]);
    worst = std::max(worst, std::abs(d2[i] - (w - rc.eigen_term) * u[i]));
    scale = std::max(scale, std::abs(d2[i]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double first_order_residual(const PotentialModel& model, const DiracContext& ctx,
                            const QuantumState& state, double energy,
                            const RadialSolution& solution) {
  if (!solution.has_partner) {
    throw std::invalid_argument("first_order_residual needs both components");
  }
  const auto& r = solution.r;
  const double kg = state.kappa + ctx.gamma;
  double worst = 0.0;
  double scale = 0.0;
  if (ctx.symmetry == Symmetry::Spin) {
    // (d/dr - (kappa+gamma)/r) f = -(E - m - Sigma(r)) g
    const std::vector<double> df = derivative(r, solution.f, 1);
    for (std::size_t i = 2; i + 2 < r.size(); ++i) {
      const double lhs = df[i] - kg * solution.f[i] / r[i];
      const double rhs = -(energy - ctx.mass - potential_profile(model, r[i])) * solution.g[i];
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    }
  } else {
    // (d/dr + (kappa+gamma)/r) g = (E + m - Delta(r)) f
    const std::vector<double> dg = derivative(r, solution.g, 1);
    for (std::size_t i = 2; i + 2 < r.size(); ++i) {
      const double lhs = dg[i] + kg * solution.g[i] / r[i];
      const double rhs = (energy + ctx.mass - potential_profile(model, r[i])) * solution.f[i];
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace diracsym
