#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "diracsym/spectrum.hpp"
#include "support.hpp"

using namespace diracsym;
using doctest::Approx;

namespace {

const PotentialModel kPT = PoschlTeller{2.09, 1.58, 0.3};
const DiracContext kSpin{10.0, 10.0, 0.0, Symmetry::Spin};

DiracContext with_gamma(DiracContext ctx, double gamma) {
  ctx.gamma = gamma;
  return ctx;
}

/// |residual(E)| against the change one half unit of the last digit can make.
void check_within_rounding(const QuantumState& s, const DiracContext& ctx, double e, double digit) {
  const auto r = energy_residual(kPT, ctx, s, e);
  REQUIRE(r);
  const auto up = energy_residual(kPT, ctx, s, e + 0.5 * digit);
  const auto dn = energy_residual(kPT, ctx, s, e - 0.5 * digit);
  REQUIRE(up);
  REQUIRE(dn);
  CHECK(std::abs(*r) <= 0.5 * std::abs(*up - *dn));
}

struct Case {
  PotentialModel model;
  DiracContext ctx;
};

std::vector<Case> model_cases() {
  return {
      {kPT, kSpin},
      {Morse{5.0, 2.0, 2.0}, {1.0, 1.0, 0.0, Symmetry::Spin}},
      {Mie{20.0, 1.0}, {1.0, 1.0, 0.0, Symmetry::Spin}},
      {Pseudoharmonic{10.0, 1.0}, {1.0, 1.0, 0.0, Symmetry::Spin}},
      {KratzerFues{20.0, 1.0}, {1.0, 1.0, 0.0, Symmetry::Spin}},
  };
}

}  // namespace

TEST_CASE("published energies as roots of the residual") {
  check_within_rounding(make_state(0, -1), kSpin, 0.0075, 1e-4);
  check_within_rounding(make_state(1, 1), with_gamma(kSpin, 2.0), 0.1250, 1e-4);
}

TEST_CASE("s ground state in the published window") {
  const SearchWindow w{-10.0 + 1e-6, 10.0, 2048};
  const auto found = find_levels(kPT, kSpin, make_state(0, -1), w, 1e-10);
  REQUIRE(found.levels.size() == 1);
  CHECK(std::abs(found.levels[0].energy - 0.0075) < 2e-3);
}

TEST_CASE("pseudospin Poschl-Teller with the published numbers is bound only at negative energy") {
  DiracContext ctx = kSpin;
  ctx.symmetry = Symmetry::Pseudospin;
  std::vector<EnergyLevel> all;
  for (int kappa : {-3, -2, -1, 1, 2, 3}) {
    for (int n = 0; n <= 3; ++n) {
      const auto s = make_state(n, kappa);
      const auto found = find_levels(kPT, ctx, s, default_window(kPT, ctx), 1e-12);
      all.insert(all.end(), found.levels.begin(), found.levels.end());
    }
  }
  // An empty spectrum would satisfy "only negative" vacuously; it must not pass.
  REQUIRE_FALSE(all.empty());
  for (const auto& level : all) CHECK(level.energy < 0.0);
}

TEST_CASE("root residual identity") {
  // With Lambda1 = [(q0 - p0) + n]^2 by construction the Jacobi residual is exactly zero.
  testing::for_all(300, 41, [](testing::Gen& g) {
    const double l3 = g.uniform(0.0, 20.0);
    const double l2 = g.uniform(-l3, 20.0);
    const int n = g.integer(0, 4);
    ParametricCoefficients c{0.5, 1.0, 1.0, 0.0, 0.0, l3};
    // q0 - p0 does not depend on Lambda1 once H = Lambda1 + Lambda2 + Lambda3 is held fixed.
    const double h = l2 + l3;
    c.lambda2 = l2;
    const auto base = jacobi_exponents(c);
    const double x = base.q0 - base.p0 + n;
    c.lambda1 = x * x;
    c.lambda2 = h - c.lambda1 - l3;
    CHECK(std::abs(jacobi_quantization_residual(c, n)) <= 1e-12 * std::max(1.0, x * x));
  });
}

TEST_CASE("find_levels") {
  SUBCASE("levels are sorted, self-consistent and deterministic") {
    for (const auto& [model, ctx] : model_cases()) {
      for (int kappa : {-3, -1, 2}) {
        const QuantumState s = make_state(1, kappa);
        const double tol = 1e-11;
        const auto a = find_levels(model, ctx, s, default_window(model, ctx), tol);
        const auto b = find_levels(model, ctx, s, default_window(model, ctx), tol);
        REQUIRE(a.levels.size() == b.levels.size());
        for (std::size_t i = 0; i < a.levels.size(); ++i) {
          CHECK(a.levels[i].energy == b.levels[i].energy);
          if (i > 0) CHECK(a.levels[i - 1].energy < a.levels[i].energy);
          const auto r = energy_residual(model, ctx, s, a.levels[i].energy);
          REQUIRE(r);
          CHECK(std::abs(*r) < 10 * tol);
          CHECK(a.levels[i].bracket_lo <= a.levels[i].energy);
          CHECK(a.levels[i].energy <= a.levels[i].bracket_hi);
          CHECK(std::abs(a.levels[i].residual) < 10 * tol);
        }
      }
    }
  }
  SUBCASE("window fully out of domain") {
    // Far above threshold nothing is normalizable.
    const auto found = find_levels(kPT, kSpin, make_state(0, -1), {50.0, 60.0, 64}, 1e-12);
    CHECK(found.levels.empty());
    CHECK(found.domain_excluded);
    CHECK_FALSE(found.diagnostics.empty());
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(find_levels(kPT, kSpin, make_state(0, -1), {1.0, 0.0, 64}, 1e-12),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_levels(kPT, kSpin, make_state(0, -1), {0.0, 1.0, 4}, 1e-12),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_levels(kPT, kSpin, make_state(0, -1), {0.0, 1.0, 64}, 0.0),
                    std::invalid_argument);
  }
}

TEST_CASE("spin doublets are degenerate without the tensor term") {
  for (const auto& [model, ctx] : model_cases()) {
    for (int n = 0; n <= 2; ++n) {
      for (int ell = 1; ell <= 3; ++ell) {
        double split = 0.0;
        try {
          split = doublet_splitting(model, ctx, n, ell);
        } catch (const PartnerNotFound&) {
          // Both partners vanish together when they are degenerate.
          CHECK_FALSE(find_level(model, ctx, make_state(n, ell)));
          CHECK_FALSE(find_level(model, ctx, make_state(n, -ell - 1)));
          continue;
        }
        CHECK(std::abs(split) < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(doublet_splitting(kPT, kSpin, 0, 0), std::invalid_argument);
}

TEST_CASE("published splittings at gamma = 2") {
  const DiracContext ctx = with_gamma(kSpin, 2.0);
  CHECK(std::abs(doublet_splitting(kPT, ctx, 1, 1) - 0.05) < 4e-3);
  CHECK(std::abs(doublet_splitting(kPT, ctx, 2, 2) - 0.11) < 4e-3);
  CHECK(std::abs(doublet_splitting(kPT, ctx, 2, 3) - 0.13) < 4e-3);
}

TEST_CASE("integer tensor strength is a relabelling of kappa") {
  const std::vector<Case> cases{model_cases()[0], model_cases()[1]};
  for (const auto& [model, ctx] : cases) {
    for (int kappa : {-3, -2, -1, 1, 2, 3}) {
      for (int gamma : {-2, 1, 2, 4}) {
        int shifted = kappa + gamma;
        if (shifted == 0) shifted = -1;
        for (int n = 0; n <= 2; ++n) {
          const auto a = find_level(model, with_gamma(ctx, gamma), make_state(n, kappa));
          const auto b = find_level(model, ctx, make_state(n, shifted));
          REQUIRE(a.has_value() == b.has_value());
          if (a) CHECK(a->energy == Approx(b->energy).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("Poschl-Teller level ordering at gamma = 0") {
  const auto s0 = find_level(kPT, kSpin, make_state(0, -1));
  const auto s1 = find_level(kPT, kSpin, make_state(1, -1));
  const auto p1 = find_level(kPT, kSpin, make_state(1, 1));
  REQUIRE(s0);
  REQUIRE(s1);
  REQUIRE(p1);
  CHECK(s0->energy < s1->energy);
  CHECK(s1->energy < p1->energy);
}

TEST_CASE("printed energy formulas at closed-form roots") {
  const DiracContext unit{1.0, 1.0, 0.0, Symmetry::Spin};
  auto at_root = [](const PotentialModel& model, const DiracContext& ctx, const QuantumState& s,
                    FormulaVariant v) {
    const auto level = find_level(model, ctx, s);
    REQUIRE(level);
    return printed_formula_residual(model, ctx, s, level->energy, v);
  };

  SUBCASE("Poschl-Teller spin") {
    for (double gamma : {0.0, 1.0, 2.0}) {
      for (int kappa : {-2, -1, 1, 2}) {
        const auto check = at_root(kPT, with_gamma(kSpin, gamma), make_state(1, kappa),
                                   FormulaVariant::Printed);
        CHECK(check.reliable);
        CHECK(check.relative_residual < 1e-9);
      }
    }
  }
  SUBCASE("Mie spin") {
    const auto check = at_root(Mie{20.0, 1.0}, unit, make_state(1, 2), FormulaVariant::Printed);
    CHECK(check.reliable);
    CHECK(check.relative_residual < 1e-9);
  }
  SUBCASE("Kratzer-Fues: printed form misses De^2, derived form holds") {
    const PotentialModel kf = KratzerFues{20.0, 1.0};
    const auto printed = at_root(kf, unit, make_state(1, -1), FormulaVariant::Printed);
    CHECK_FALSE(printed.reliable);
    CHECK(printed.relative_residual > 1e-6);
    const auto derived = at_root(kf, unit, make_state(1, -1), FormulaVariant::Derived);
    CHECK(derived.relative_residual < 1e-9);
  }
  SUBCASE("unreliable printed forms are flagged") {
    const DiracContext pseudo{1.0, -3.0, 0.0, Symmetry::Pseudospin};
    CHECK_FALSE(printed_formula_residual(Morse{5, 2, 2}, unit, make_state(0, -1), 0.5).reliable);
    CHECK_FALSE(printed_formula_residual(Morse{5, 2, 2}, pseudo, make_state(0, 1), -1.5).reliable);
    CHECK_FALSE(printed_formula_residual(Pseudoharmonic{10, 1}, unit, make_state(0, -1), 2.0).reliable);
  }
  SUBCASE("no printed form for pseudospin Mie") {
    const DiracContext pseudo{1.0, -3.0, 0.0, Symmetry::Pseudospin};
    CHECK_FALSE(has_printed_formula(Mie{20.0, 1.0}, Symmetry::Pseudospin));
    CHECK_THROWS_AS(printed_formula_residual(Mie{20.0, 1.0}, pseudo, make_state(0, 1), -1.5),
                    std::invalid_argument);
  }
}

TEST_CASE("pseudoharmonic s-wave limit matches the shifted oscillator") {
  // V0 (r/r0 - r0/r)^2 = V0 r^2/r0^2 - 2 V0 + V0 r0^2/r^2
  testing::for_all(100, 43, [](testing::Gen& g) {
    const double v0 = g.uniform(0.2, 20.0);
    const double r0 = g.uniform(0.3, 3.0);
    const double m = g.uniform(0.3, 5.0);
    const int n = g.integer(0, 5);
    const int ell = g.integer(0, 3);
    const double omega = std::sqrt(2 * v0 / (m * r0 * r0));
    const double eff = -0.5 + std::sqrt((ell + 0.5) * (ell + 0.5) + 2 * m * v0 * r0 * r0);
    const double expected = omega * (2 * n + eff + 1.5) - 2 * v0;
    const auto eps = nonrelativistic_limit(Pseudoharmonic{v0, r0}, n, ell, m);
    REQUIRE(eps);
    CHECK(*eps == Approx(expected).epsilon(1e-7));
  });
}

TEST_CASE("Kratzer-Fues limit climbs to De from below") {
  const double de = 2.0;
  const PotentialModel kf = KratzerFues{de, 1.0};
  double previous = -1.0;
  for (int n = 0; n <= 200; n += 10) {
    const auto eps = nonrelativistic_limit(kf, n, 1, 1.0);
    REQUIRE(eps);
    CHECK(*eps < de);
    CHECK(*eps > previous);
    previous = *eps;
  }
  CHECK(de - previous < 1e-3);
}

TEST_CASE("names") {
  CHECK(parse_method(method_name(LevelMethod::Oracle)) == LevelMethod::Oracle);
  CHECK_THROWS(parse_method("guesswork"));
}
