#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "diracsym/special_functions.hpp"
#include "diracsym/spectrum.hpp"
#include "support.hpp"

using namespace diracsym;
using doctest::Approx;

namespace {

struct Series {
  double value = 0.0;
  double magnitude = 0.0;  // sum of |terms|, the scale cancellation works against
};

/// (alpha+1)_n / n! * 2F1(-n, n+alpha+beta+1; alpha+1; (1-x)/2)
Series jacobi_series(int n, double a, double b, double x) {
  double pre = 1.0;
  for (int i = 1; i <= n; ++i) pre *= (a + i) / i;
  const double z = 0.5 * (1.0 - x);
  Series s;
  double term = 1.0;
  for (int k = 0; k <= n; ++k) {
    s.value += pre * term;
    s.magnitude += std::abs(pre * term);
    term *= (k - n) * (n + a + b + 1.0 + k) / ((a + 1.0 + k) * (k + 1.0)) * z;
  }
  return s;
}

/// (k+1)_n / n! * 1F1(-n; k+1; x)
Series laguerre_series(int n, double k, double x) {
  double pre = 1.0;
  for (int i = 1; i <= n; ++i) pre *= (k + i) / i;
  Series s;
  double term = 1.0;
  for (int j = 0; j <= n; ++j) {
    s.value += pre * term;
    s.magnitude += std::abs(pre * term);
    term *= (j - n) / ((k + 1.0 + j) * (j + 1.0)) * x;
  }
  return s;
}

struct Case {
  PotentialModel model;
  DiracContext ctx;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  const std::vector<std::pair<PotentialModel, std::pair<DiracContext, DiracContext>>> base{
      {PoschlTeller{2.09, 1.58, 0.3},
       {{10.0, 10.0, 0.0, Symmetry::Spin}, {10.0, -30.0, 0.0, Symmetry::Pseudospin}}},
      {Morse{5.0, 2.0, 2.0}, {{1.0, 1.0, 0.0, Symmetry::Spin}, {1.0, -3.0, 0.0, Symmetry::Pseudospin}}},
      {Mie{20.0, 1.0}, {{1.0, 1.0, 0.0, Symmetry::Spin}, {1.0, -3.0, 0.0, Symmetry::Pseudospin}}},
      {Pseudoharmonic{10.0, 1.0},
       {{1.0, 1.0, 0.0, Symmetry::Spin}, {1.0, -3.0, 0.0, Symmetry::Pseudospin}}},
      {KratzerFues{20.0, 1.0}, {{1.0, 1.0, 0.0, Symmetry::Spin}, {1.0, -3.0, 0.0, Symmetry::Pseudospin}}},
  };
  for (const auto& [model, ctxs] : base) {
    out.push_back({model, ctxs.first});
    out.push_back({model, ctxs.second});
  }
  return out;
}

RadialSolution solve(const PotentialModel& model, const DiracContext& ctx, const QuantumState& s,
                     double energy) {
  const auto grid = wavefunction_grid(model, ctx, s, energy);
  return partner_component(model, ctx, s, energy, assemble_wavefunction(model, ctx, s, energy, grid));
}

double joint_norm(const RadialSolution& sol) {
  std::vector<double> y(sol.r.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = sol.g[i] * sol.g[i] + sol.f[i] * sol.f[i];
  return simpson(sol.r, y);
}

}  // namespace

TEST_CASE("jacobi polynomial") {
  CHECK(jacobi_poly(0, 3.5, -0.2, 17.0) == 1.0);
  for (double x : {-1.0, -0.3, 0.0, 0.8, 2.0}) CHECK(jacobi_poly(1, 0.0, 0.0, x) == Approx(x));
  const Series s = jacobi_series(5, 1.3, 0.7, 0.4);
  CHECK(std::abs(jacobi_poly(5, 1.3, 0.7, 0.4) - s.value) < 1e-12 * std::max(1.0, s.magnitude));
  CHECK_THROWS_AS(jacobi_poly(2, -1.0, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(jacobi_poly(2, 0.0, -1.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(jacobi_poly(-1, 0.0, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(jacobi_poly(201, 0.0, 0.0, 0.5), std::invalid_argument);
}

TEST_CASE("laguerre polynomial") {
  CHECK(laguerre_poly(0, 4.2, -3.0) == 1.0);
  CHECK(laguerre_poly(1, 2.0, 1.0) == Approx(2.0));
  const Series s = laguerre_series(6, 2.5, 3.1);
  CHECK(std::abs(laguerre_poly(6, 2.5, 3.1) - s.value) < 1e-12 * std::max(1.0, s.magnitude));
  CHECK_THROWS_AS(laguerre_poly(3, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(laguerre_poly(201, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("polynomial reference values") {
  // 50-digit evaluations, rounded to 20 significant digits.
  struct J {
    int n;
    double a, b, x, value;
  };
  for (const J& c : {J{5, 1.3, 0.7, 0.4, 0.055955249999999838217},
                     J{3, 14.864091513765835, -23.246347028333396, 3.0, 262.94267568632115611},
                     J{8, 0.5, -20.3, 12.0, -12386948.561114975227},
                     J{14, -0.5, -31.25, 20.5, 461183723956581.16607},
                     J{20, 2.5, -3.5, -0.75, 0.0066625268082518788321}}) {
    CHECK(jacobi_poly_general(c.n, c.a, c.b, c.x) == Approx(c.value).epsilon(1e-12));
    if (c.b > -1.0) CHECK(jacobi_poly(c.n, c.a, c.b, c.x) == Approx(c.value).epsilon(1e-12));
  }
  CHECK(laguerre_poly(6, 2.5, 3.1) == Approx(1.902753188888889334).epsilon(1e-12));
  CHECK(laguerre_poly(12, 0.25, 7.5) == Approx(4.1666170839763052955).epsilon(1e-12));
  CHECK(laguerre_poly(20, 9.0, 33.0) == Approx(-228881.23880992716097).epsilon(1e-12));
}

TEST_CASE("polynomials against their hypergeometric series") {
  testing::for_all(2000, 51, [](testing::Gen& g) {
    const int n = g.integer(0, 20);
    const double a = g.uniform(-0.99, 10.0);
    const double b = g.uniform(-0.99, 10.0);
    const double x = g.uniform(-1.0, 1.0);
    const Series js = jacobi_series(n, a, b, x);
    CHECK(std::abs(jacobi_poly(n, a, b, x) - js.value) < 1e-12 * std::max(1.0, js.magnitude));
    CHECK(std::abs(jacobi_poly_general(n, a, b, x) - js.value) < 1e-12 * std::max(1.0, js.magnitude));

    // Bound-state factors have beta < -1, outside the recurrence's range.
    const double nb = g.uniform(-40.0, -1.01);
    const double xo = g.uniform(1.0, 30.0);
    const Series gs = jacobi_series(n, a, nb, xo);
    CHECK(std::abs(jacobi_poly_general(n, a, nb, xo) - gs.value) <
          1e-12 * std::max(1.0, gs.magnitude));

    const double k = g.uniform(-0.99, 20.0);
    const double y = g.uniform(0.0, 40.0);
    const Series ls = laguerre_series(n, k, y);
    CHECK(std::abs(laguerre_poly(n, k, y) - ls.value) < 1e-12 * std::max(1.0, ls.magnitude));
  });
}

TEST_CASE("quadrature and differences") {
  const auto r = composite_grid(1e-3, 0.5, 4.0, 401);
  REQUIRE(r.size() == 401);
  CHECK(r.front() == 1e-3);
  CHECK(r.back() == 4.0);
  for (std::size_t i = 1; i < r.size(); ++i) REQUIRE(r[i] > r[i - 1]);

  std::vector<double> quadratic(r.size());
  std::vector<double> quartic(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    quadratic[i] = 3 * r[i] * r[i] - r[i] + 1;
    quartic[i] = std::pow(r[i], 4) - 3 * r[i] * r[i];
  }
  const double a = 1e-3;
  const double b = 4.0;
  CHECK(simpson(r, quadratic) ==
        Approx((b * b * b - a * a * a) - 0.5 * (b * b - a * a) + (b - a)).epsilon(1e-13));

  const auto d1 = derivative(r, quartic, 1);
  const auto d2 = derivative(r, quartic, 2);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(d1[i] == Approx(4 * std::pow(r[i], 3) - 6 * r[i]).epsilon(1e-8));
    CHECK(d2[i] == Approx(12 * r[i] * r[i] - 6).epsilon(1e-6));
  }

  CHECK(count_nodes({1, 2, -1, -2, 3}) == 2);
  CHECK(count_nodes({1, 1e-14, -1e-14, 1}) == 0);
  CHECK(count_nodes({0, 1, 0.5, 0}) == 0);

  CHECK_THROWS_AS(composite_grid(1.0, 0.5, 4.0, 401), std::invalid_argument);
  CHECK_THROWS_AS(composite_grid(1e-3, 0.5, 4.0, 400), std::invalid_argument);
  CHECK_THROWS_AS(simpson({0.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(derivative(r, quadratic, 3), std::invalid_argument);
}

TEST_CASE("Poschl-Teller s ground state is positive and decays") {
  const PotentialModel pt = PoschlTeller{2.09, 1.58, 0.3};
  const DiracContext ctx{10.0, 10.0, 0.0, Symmetry::Spin};
  const auto s = make_state(0, -1);
  const auto level = find_level(pt, ctx, s);
  REQUIRE(level);
  const auto sol = solve(pt, ctx, s, level->energy);
  double peak = 0.0;
  for (std::size_t i = 1; i + 1 < sol.g.size(); ++i) {
    CHECK(sol.g[i] > 0.0);
    peak = std::max(peak, sol.g[i]);
  }
  CHECK(sol.nodes == 0);
  CHECK(std::abs(sol.g.back()) < 1e-5 * peak);
  CHECK(std::abs(sol.g.front()) < 1e-5 * peak);
}

TEST_CASE("Morse first excited node sits at the Laguerre zero") {
  const PotentialModel morse = Morse{20.0, 1.0, 2.0};
  const DiracContext ctx{1.0, 1.0, 0.0, Symmetry::Spin};
  const auto s = make_state(1, -1);
  const auto level = find_level(morse, ctx, s);
  REQUIRE(level);
  const auto sol = solve(morse, ctx, s, level->energy);
  REQUIRE(sol.nodes == 1);
  const auto ex = laguerre_exponents(parametric_form(morse, ctx, s.kappa, level->energy));
  const double alpha = 2.0 * 1.0;
  auto lag = [&](double r) {
    const double var = std::exp(-alpha * (r - 2.0) / 2.0);
    return laguerre_poly(1, ex.k_idx, 2.0 * ex.p0 * var);
  };
  int located = 0;
  for (std::size_t i = 1; i < sol.g.size(); ++i) {
    if ((sol.g[i - 1] > 0.0) != (sol.g[i] > 0.0) && std::abs(sol.g[i]) > 1e-12) {
      CHECK(lag(sol.r[i - 1]) * lag(sol.r[i]) <= 0.0);
      ++located;
    }
  }
  CHECK(located == 1);
}

TEST_CASE("wavefunction properties over the built-in parameter sets") {
  int checked = 0;
  for (const auto& [model, base] : cases()) {
    for (double gamma : {0.0, 1.0, 2.0}) {
      for (int kappa : {-3, -2, -1, 1, 2, 3}) {
        DiracContext ctx = base;
        ctx.gamma = gamma;
        for (int n = 0; n <= 5; ++n) {
          const auto s = make_state(n, kappa);
          const auto found = find_levels(model, ctx, s, default_window(model, ctx), 1e-12);
          for (const auto& level : found.levels) {
            CAPTURE(model_name(model));
            CAPTURE(symmetry_name(ctx.symmetry));
            CAPTURE(s.label());
            CAPTURE(gamma);
            const auto sol = solve(model, ctx, s, level.energy);
            CHECK(sol.nodes == n);
            CHECK(count_nodes(sol.solved()) == n);
            CHECK(std::abs(joint_norm(sol) - 1.0) < 1e-8);
            CHECK(ode_residual(model, ctx, s, level.energy, sol) < 1e-5);
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("spin partner follows the first-order relation") {
  const PotentialModel mie = Mie{20.0, 1.0};
  const DiracContext ctx{1.0, 1.0, 0.0, Symmetry::Spin};
  const auto s = make_state(1, -1);
  const auto level = find_level(mie, ctx, s);
  REQUIRE(level);
  const auto sol = solve(mie, ctx, s, level->energy);
  const double k = level->energy + ctx.mass - ctx.C;
  const auto dg = derivative(sol.r, sol.g, 1);
  double worst = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    worst = std::max(worst, std::abs(dg[i] + s.kappa * sol.g[i] / sol.r[i] - k * sol.f[i]));
    peak = std::max(peak, std::abs(dg[i]));
  }
  CHECK(worst < 1e-12 * peak);
  // Deep in the tail kappa/r is negligible next to the decay rate.
  const std::size_t i = sol.r.size() * 9 / 10;
  CHECK(sol.f[i] / sol.g[i] == Approx(dg[i] / sol.g[i] / k).epsilon(0.2));
  CHECK(first_order_residual(mie, ctx, s, level->energy, sol) < 1e-4);
}

TEST_CASE("exact spinors of one kappa are orthogonal") {
  // No centrifugal replacement here, so these are eigenvectors of one Dirac operator.
  const std::vector<PotentialModel> models{Mie{20.0, 1.0}, Pseudoharmonic{10.0, 1.0},
                                           KratzerFues{20.0, 1.0}};
  for (const auto& model : models) {
    for (const DiracContext& ctx :
         {DiracContext{1.0, 1.0, 0.0, Symmetry::Spin}, DiracContext{1.0, 1.0, 2.0, Symmetry::Spin},
          DiracContext{1.0, -3.0, 2.0, Symmetry::Pseudospin}}) {
      for (int kappa : {-2, -1, 1, 2}) {
        for (int n : {0, 1}) {
          const auto lo = find_level(model, ctx, make_state(n, kappa));
          const auto hi = find_level(model, ctx, make_state(n + 1, kappa));
          REQUIRE(lo);
          REQUIRE(hi);
          const auto grid = wavefunction_grid(model, ctx, hi->state, hi->energy);
          const auto a = partner_component(
              model, ctx, lo->state, lo->energy,
              assemble_wavefunction(model, ctx, lo->state, lo->energy, grid));
          const auto b = partner_component(
              model, ctx, hi->state, hi->energy,
              assemble_wavefunction(model, ctx, hi->state, hi->energy, grid));
          std::vector<double> y(grid.size());
          for (std::size_t i = 0; i < y.size(); ++i) y[i] = a.g[i] * b.g[i] + a.f[i] * b.f[i];
          CHECK(std::abs(simpson(grid, y)) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("assembly rejects non-roots and a vanishing coupling") {
  const PotentialModel mie = Mie{20.0, 1.0};
  const DiracContext ctx{1.0, 1.0, 0.0, Symmetry::Spin};
  const auto s = make_state(0, -1);
  const auto level = find_level(mie, ctx, s);
  REQUIRE(level);
  const auto grid = wavefunction_grid(mie, ctx, s, level->energy);
  CHECK_THROWS_AS(assemble_wavefunction(mie, ctx, s, level->energy + 1e-3, grid), std::invalid_argument);
  const auto sol = assemble_wavefunction(mie, ctx, s, level->energy, grid);
  CHECK_THROWS_AS(partner_component(mie, ctx, s, ctx.C - ctx.mass, sol), CouplingSingular);
  CHECK_THROWS_AS(first_order_residual(mie, ctx, s, level->energy, sol), std::invalid_argument);
  const std::vector<double> bad{1.0, 0.5, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(assemble_wavefunction(mie, ctx, s, level->energy, bad), std::invalid_argument);
}
