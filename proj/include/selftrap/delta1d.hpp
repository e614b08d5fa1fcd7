#pragma once

#include <span>
#include <vector>

namespace selftrap::delta1d {

/// Condensate around a point impurity |chi|^2 = delta(x) in 1d.
struct DeltaSolution {
  double psi0 = 1.0;       // psi at the impurity
  double c = 0.0;          // offset of the tanh / coth profile, healing lengths
  bool attractive = false;
  double beta_gamma = 0.0;
};

/// Positive root of 1 - psi^2 = beta gamma psi.
double psi_at_impurity(double beta, double gamma);

/// Throws std::invalid_argument for beta = 0 (the profile is psi = 1).
DeltaSolution delta_solution(double beta, double gamma);

/// coth(|x| + c) for beta < 0, tanh(|x| + c) for beta > 0.
std::vector<double> delta_profile(double beta, double gamma, std::span<const double> x);
double delta_profile(const DeltaSolution& s, double x);

/// Condensate energy measured from the uniform background plus the interaction
/// energy beyond its first-order value beta.
double deformation_energy(double beta, double gamma);

}  // namespace selftrap::delta1d
