#include "selftrap/delta1d.hpp"

#include <cmath>
#include <stdexcept>

namespace selftrap::delta1d {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
}

}  // namespace

double psi_at_impurity(double beta, double gamma) {
  require_gamma(gamma);
  if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
  const double b = 0.5 * beta * gamma;
  // Rationalized for b > 0 to avoid cancellation at strong repulsion.
  if (b > 0.0) return 1.0 / (b + std::hypot(1.0, b));
  return -b + std::hypot(1.0, b);
}

DeltaSolution delta_solution(double beta, double gamma) {
  if (beta == 0.0) throw std::invalid_argument("delta_solution: beta = 0 leaves the condensate uniform");
  DeltaSolution s;
  s.psi0 = psi_at_impurity(beta, gamma);
  s.beta_gamma = beta * gamma;
  s.attractive = beta < 0.0;
  s.c = s.attractive ? std::atanh(1.0 / s.psi0) : std::atanh(s.psi0);
  return s;
}

double delta_profile(const DeltaSolution& s, double x) {
  const double t = std::tanh(std::abs(x) + s.c);
  return s.attractive ? 1.0 / t : t;
}

std::vector<double> delta_profile(double beta, double gamma, std::span<const double> x) {
  const DeltaSolution s = delta_solution(beta, gamma);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = delta_profile(s, x[i]);
  return out;
}

double deformation_energy(double beta, double gamma) {
  require_gamma(gamma);
  if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
  const double b = 0.5 * beta * gamma;
  const double b2 = b * b;
  const double s = 1.0 + b2;
  // 1 - s^{3/2} = (1 - s^3) / (1 + s^{3/2}), free of cancellation at small b.
  const double head = -b2 * (3.0 + 3.0 * b2 + b2 * b2) / (1.0 + s * std::sqrt(s));
  return 4.0 / (3.0 * gamma) * (head + b2 * b);
}

}  // namespace selftrap::delta1d
