#pragma once

#include <string>
#include <utility>

namespace diracsym {

/// Radial quantum number n together with the spin-orbit number kappa.
///
/// kappa < 0 is the aligned case (j = l + 1/2, l = -kappa - 1), kappa > 0
/// the unaligned one (j = l - 1/2, l = kappa). The lower spinor component
/// carries the pseudo-orbital number l~ with kappa(kappa - 1) = l~(l~ + 1).
struct QuantumState {
  int n = 0;
  int kappa = -1;

  int ell() const;
  int ell_tilde() const;
  /// Total angular momentum j (a positive half-integer).
  double j() const;
  /// Spectroscopic label such as "1p1/2" (n followed by the orbital letter and j).
  std::string label() const;

  friend bool operator==(const QuantumState&, const QuantumState&) = default;
};

/// Throws std::invalid_argument for n < 0 or kappa == 0.
QuantumState make_state(int n, int kappa);

int kappa_from_lj(int ell, double j);
std::pair<int, double> lj_from_kappa(int kappa);

/// Parses labels like "2d3/2", "1p_{1/2}" or "0s1/2" into (n, kappa).
QuantumState parse_shell_label(const std::string& label);

char orbital_letter(int ell);

/// Centrifugal strength of the upper component with a Coulomb-like tensor
/// term U = -gamma/r: kappa(kappa+1) + 2 kappa gamma + gamma(gamma+1).
double omega_spin(int kappa, double gamma);

/// Lower-component counterpart: kappa(kappa-1) + 2 kappa gamma + gamma(gamma-1).
double omega_pseudospin(int kappa, double gamma);

}  // namespace diracsym
