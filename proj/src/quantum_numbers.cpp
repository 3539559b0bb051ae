#include "diracsym/quantum_numbers.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace diracsym {

namespace {

constexpr const char* kOrbitalLetters = "spdfghiklmnoqrtuv";

int two_j_from(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-12 || static_cast<long>(rounded) % 2 == 0) {
    throw std::invalid_argument("j must be a half-integer");
  }
  return static_cast<int>(rounded);
}

}  // namespace

int QuantumState::ell() const { return kappa < 0 ? -kappa - 1 : kappa; }

int QuantumState::ell_tilde() const { return kappa > 0 ? kappa - 1 : -kappa; }

double QuantumState::j() const { return std::abs(kappa) - 0.5; }

std::string QuantumState::label() const {
  const int twice_j = 2 * std::abs(kappa) - 1;
  return std::to_string(n) + orbital_letter(ell()) + std::to_string(twice_j) + "/2";
}

QuantumState make_state(int n, int kappa) {
  if (n < 0) {
    throw std::invalid_argument("radial quantum number n must be non-negative");
  }
  if (kappa == 0) {
    throw std::invalid_argument("kappa must be nonzero");
  }
  return QuantumState{n, kappa};
}

int kappa_from_lj(int ell, double j) {
  if (ell < 0) {
    throw std::invalid_argument("ell must be non-negative");
  }
  const int twice_j = two_j_from(j);
  if (twice_j <= 0) {
    throw std::invalid_argument("j must be positive");
  }
  if (twice_j == 2 * ell + 1) {
    return -(ell + 1);
  }
  if (twice_j == 2 * ell - 1) {
    return ell;
  }
  throw std::invalid_argument("|j - ell| must equal 1/2");
}

std::pair<int, double> lj_from_kappa(int kappa) {
  if (kappa == 0) {
    throw std::invalid_argument("kappa must be nonzero");
  }
  const QuantumState s{0, kappa};
  return {s.ell(), s.j()};
}

char orbital_letter(int ell) {
  static const std::string letters(kOrbitalLetters);
  if (ell < 0 || ell >= static_cast<int>(letters.size())) {
    throw std::invalid_argument("no spectroscopic letter for ell = " + std::to_string(ell));
  }
  return letters[static_cast<std::size_t>(ell)];
}

QuantumState parse_shell_label(const std::string& label) {
  // Accepted: <n><letter><2j>/2, optionally with "_", "{" and "}" around j.
  std::string compact;
  for (char c : label) {
    if (c != '_' && c != '{' && c != '}' && !std::isspace(static_cast<unsigned char>(c))) {
      compact.push_back(c);
    }
  }
  std::size_t pos = 0;
  while (pos < compact.size() && std::isdigit(static_cast<unsigned char>(compact[pos]))) {
    ++pos;
  }
  if (pos == 0 || pos >= compact.size()) {
    throw std::invalid_argument("malformed shell label '" + label + "'");
  }
  const int n = std::stoi(compact.substr(0, pos));
  const std::string letters(kOrbitalLetters);
  const auto letter_pos = letters.find(static_cast<char>(std::tolower(compact[pos])));
  if (letter_pos == std::string::npos) {
    throw std::invalid_argument("unknown orbital letter in '" + label + "'");
  }
  const int ell = static_cast<int>(letter_pos);
  const std::string jpart = compact.substr(pos + 1);
  const auto slash = jpart.find('/');
  if (slash == std::string::npos || jpart.substr(slash + 1) != "2" || slash == 0) {
    throw std::invalid_argument("malformed j in shell label '" + label + "'");
  }
  for (std::size_t i = 0; i < slash; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(jpart[i]))) {
      throw std::invalid_argument("malformed j in shell label '" + label + "'");
    }
  }
  const int twice_j = std::stoi(jpart.substr(0, slash));
  return make_state(n, kappa_from_lj(ell, 0.5 * twice_j));
}

double omega_spin(int kappa, double gamma) {
  const double k = kappa;
  return k * (k + 1.0) + 2.0 * k * gamma + gamma * (gamma + 1.0);
}

double omega_pseudospin(int kappa, double gamma) {
  const double k = kappa;
  return k * (k - 1.0) + 2.0 * k * gamma + gamma * (gamma - 1.0);
}

}  // namespace diracsym
