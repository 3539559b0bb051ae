#include "diracsym/potentials.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "diracsym/quantum_numbers.hpp"

namespace diracsym {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

std::string model_name(const PotentialModel& model) {
  return std::visit(overloaded{
                        [](const PoschlTeller&) { return std::string("poschl_teller"); },
                        [](const Morse&) { return std::string("morse"); },
                        [](const Mie&) { return std::string("mie"); },
                        [](const Pseudoharmonic&) { return std::string("pseudoharmonic"); },
                        [](const KratzerFues&) { return std::string("kratzer_fues"); },
                    },
                    model);
}

std::string symmetry_name(Symmetry symmetry) {
  return symmetry == Symmetry::Spin ? "spin" : "pseudospin";
}

Symmetry parse_symmetry(const std::string& name) {
  if (name == "spin") return Symmetry::Spin;
  if (name == "pseudospin") return Symmetry::Pseudospin;
  throw std::invalid_argument("symmetry must be 'spin' or 'pseudospin', got '" + name + "'");
}

void validate(const PotentialModel& model) {
  std::visit(overloaded{
                 [](const PoschlTeller& p) {
                   require_positive(p.alpha, "alpha");
                   if (!(p.A * (p.A + p.alpha) > 0.0)) {
                     throw std::invalid_argument("Poschl-Teller requires A(A + alpha) > 0");
                   }
                   if (!(p.B * (p.B - p.alpha) >= 0.0)) {
                     throw std::invalid_argument("Poschl-Teller requires B(B - alpha) >= 0");
                   }
                 },
                 [](const Morse& p) {
                   require_positive(p.depth, "D");
                   require_positive(p.beta, "beta");
                   require_positive(p.r0, "r0");
                 },
                 [](const Mie& p) {
                   require_positive(p.V0, "V0");
                   require_positive(p.a, "a");
                 },
                 [](const Pseudoharmonic& p) {
                   require_positive(p.V0, "V0");
                   require_positive(p.r0, "r0");
                 },
                 [](const KratzerFues& p) {
                   require_positive(p.De, "De");
                   require_positive(p.re, "re");
                 },
             },
             model);
}

void validate(const DiracContext& ctx) {
  require_positive(ctx.mass, "mass");
  if (!std::isfinite(ctx.C) || !std::isfinite(ctx.gamma)) {
    throw std::invalid_argument("C and gamma must be finite");
  }
}

double length_scale(const PotentialModel& model) {
  return std::visit(overloaded{
                        [](const PoschlTeller& p) { return 1.0 / p.alpha; },
                        [](const Morse& p) { return p.r0; },
                        [](const Mie& p) { return p.a; },
                        [](const Pseudoharmonic& p) { return p.r0; },
                        [](const KratzerFues& p) { return p.re; },
                    },
                    model);
}

double well_depth(const PotentialModel& model) {
  return std::visit(overloaded{
                        [](const PoschlTeller& p) { return std::abs(p.A * (p.A + p.alpha)); },
                        [](const Morse& p) { return p.depth; },
                        [](const Mie& p) { return 0.5 * p.V0; },
                        [](const Pseudoharmonic& p) { return p.V0; },
                        [](const KratzerFues& p) { return p.De; },
                    },
                    model);
}

double potential_profile(const PotentialModel& model, double r) {
  return std::visit(
      overloaded{
          [r](const PoschlTeller& p) {
            const double ch = std::cosh(p.alpha * r);
            const double sh = std::sinh(p.alpha * r);
            return -p.A * (p.A + p.alpha) / (ch * ch) + p.B * (p.B - p.alpha) / (sh * sh);
          },
          [r](const Morse& p) {
            const double e = std::exp(-p.beta * (r - p.r0));
            return p.depth * (e * e - 2.0 * e);
          },
          [r](const Mie& p) {
            const double x = p.a / r;
            return p.V0 * (0.5 * x * x - x);
          },
          [r](const Pseudoharmonic& p) {
            const double x = r / p.r0 - p.r0 / r;
            return p.V0 * x * x;
          },
          [r](const KratzerFues& p) {
            const double x = (r - p.re) / r;
            return p.De * x * x;
          },
      },
      model);
}

PekerisCoefficients pekeris_coefficients(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("Pekeris coefficients require alpha > 0");
  }
  const double inv = 1.0 / alpha;
  return {1.0 - 3.0 * inv + 3.0 * inv * inv, 4.0 * inv - 6.0 * inv * inv,
          -inv + 3.0 * inv * inv};
}

ReducedCouplings reduced_couplings(const DiracContext& ctx, int kappa, double energy) {
  if (kappa == 0) {
    throw std::invalid_argument("kappa must be nonzero");
  }
  ReducedCouplings rc;
  if (ctx.symmetry == Symmetry::Spin) {
    rc.coupling = energy + ctx.mass - ctx.C;
    rc.eigen_term = rc.coupling * (energy - ctx.mass);
    rc.omega = omega_spin(kappa, ctx.gamma);
  } else {
    rc.coupling = energy - ctx.mass - ctx.C;
    rc.eigen_term = rc.coupling * (energy + ctx.mass);
    rc.omega = omega_pseudospin(kappa, ctx.gamma);
  }
  return rc;
}

ReducedCouplings schrodinger_couplings(double mass, int ell, double epsilon) {
  require_positive(mass, "mass");
  if (ell < 0) {
    throw std::invalid_argument("ell must be non-negative");
  }
  const double two_m = 2.0 * mass;
  return {two_m, two_m * epsilon, static_cast<double>(ell) * (ell + 1.0)};
}

ParametricCoefficients parametric_form(const PotentialModel& model, const ReducedCouplings& rc) {
  const double K = rc.coupling;
  const double lam = rc.eigen_term;
  const double om = rc.omega;
  return std::visit(
      overloaded{
          [&](const PoschlTeller& p) {
            // s = sinh^2(alpha r)
            const double four_a2 = 4.0 * p.alpha * p.alpha;
            const double h = lam / four_a2;
            const double l = K * p.A * (p.A + p.alpha) / four_a2;
            const double f = K * p.B * (p.B - p.alpha) / four_a2 + 0.25 * om;
            return ParametricCoefficients{0.5, 1.0, 1.0, -h, h + l - f, f};
          },
          [&](const Morse& p) {
            // s = exp(-alpha (r - r0)/r0), alpha = r0 beta
            const double alpha = p.r0 * p.beta;
            const PekerisCoefficients d = pekeris_coefficients(alpha);
            const double a2 = alpha * alpha;
            const double dr2 = K * p.depth * p.r0 * p.r0;
            return ParametricCoefficients{1.0,
                                          0.0,
                                          0.0,
                                          (om * d.d2 + dr2) / a2,
                                          (-om * d.d1 + 2.0 * dr2) / a2,
                                          (om * d.d0 - lam * p.r0 * p.r0) / a2};
          },
          [&](const Mie& p) {
            // s = r, G = g/r
            return ParametricCoefficients{2.0, 0.0, 0.0, -lam, p.a * p.V0 * K,
                                          om + 0.5 * p.a * p.a * p.V0 * K};
          },
          [&](const Pseudoharmonic& p) {
            // s = r^2, G = g/r
            return ParametricCoefficients{1.5,
                                          0.0,
                                          0.0,
                                          K * p.V0 / (4.0 * p.r0 * p.r0),
                                          0.25 * (2.0 * p.V0 * K + lam),
                                          0.25 * (om + K * p.V0 * p.r0 * p.r0)};
          },
          [&](const KratzerFues& p) {
            // s = r, G = g/r
            return ParametricCoefficients{2.0, 0.0, 0.0, K * p.De - lam, 2.0 * p.re * K * p.De,
                                          om + p.re * p.re * K * p.De};
          },
      },
      model);
}

ParametricCoefficients parametric_form(const PotentialModel& model, const DiracContext& ctx,
                                       int kappa, double energy) {
  return parametric_form(model, reduced_couplings(ctx, kappa, energy));
}

double centrifugal_factor(const PotentialModel& model, double r, Centrifugal treatment) {
  if (treatment == Centrifugal::Approximate) {
    if (const auto* pt = std::get_if<PoschlTeller>(&model)) {
      const double sh = std::sinh(pt->alpha * r);
      return pt->alpha * pt->alpha / (sh * sh);
    }
    if (const auto* mo = std::get_if<Morse>(&model)) {
      const double alpha = mo->r0 * mo->beta;
      const PekerisCoefficients d = pekeris_coefficients(alpha);
      const double e = std::exp(-alpha * (r - mo->r0) / mo->r0);
      return (d.d0 + d.d1 * e + d.d2 * e * e) / (mo->r0 * mo->r0);
    }
  }
  return 1.0 / (r * r);
}

double effective_potential(const PotentialModel& model, const DiracContext& ctx, int kappa,
                           double energy, double r, Centrifugal treatment) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("effective_potential requires r > 0");
  }
  const ReducedCouplings rc = reduced_couplings(ctx, kappa, energy);
  return -(rc.omega * centrifugal_factor(model, r, treatment) +
           rc.coupling * potential_profile(model, r));
}

SmallRadius small_radius_behaviour(const PotentialModel& model, const ReducedCouplings& rc) {
  const double K = rc.coupling;
  return std::visit(
      overloaded{
          [&](const PoschlTeller& p) {
            return SmallRadius{rc.omega + K * p.B * (p.B - p.alpha) / (p.alpha * p.alpha), 0.0};
          },
          [&](const Morse&) { return SmallRadius{rc.omega, 0.0}; },
          [&](const Mie& p) {
            return SmallRadius{rc.omega + 0.5 * K * p.V0 * p.a * p.a, -K * p.V0 * p.a};
          },
          [&](const Pseudoharmonic& p) {
            return SmallRadius{rc.omega + K * p.V0 * p.r0 * p.r0, 0.0};
          },
          [&](const KratzerFues& p) {
            return SmallRadius{rc.omega + K * p.De * p.re * p.re, -2.0 * K * p.De * p.re};
          },
      },
      model);
}

bool full_line_domain(const PotentialModel& model, Centrifugal treatment) {
  return treatment == Centrifugal::Approximate && std::holds_alternative<Morse>(model);
}

std::vector<std::string> validity_warnings(const PotentialModel& model, const DiracContext& ctx) {
  std::vector<std::string> out;
  if (const auto* mo = std::get_if<Morse>(&model)) {
    const double alpha = mo->r0 * mo->beta;
    const PekerisCoefficients d = pekeris_coefficients(alpha);
    if (d.d2 < 0.0) {
      std::ostringstream msg;
      msg << "Pekeris D2 = " << d.d2 << " < 0 (alpha = r0*beta = " << alpha
          << "): Lambda1 may turn negative for large centrifugal strengths";
      out.push_back(msg.str());
    }
  }
  if (const auto* pt = std::get_if<PoschlTeller>(&model)) {
    if (pt->alpha * pt->alpha > 0.25) {
      std::ostringstream msg;
      msg << "alpha^2 = " << pt->alpha * pt->alpha
          << " is not small: the exponential centrifugal replacement is inaccurate";
      out.push_back(msg.str());
    }
  }
  if (std::abs(ctx.gamma) > 50.0) {
    out.push_back("very large tensor strength gamma");
  }
  return out;
}

}  // namespace diracsym
