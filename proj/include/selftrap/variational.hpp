#pragma once

#include <optional>

#include "selftrap/core.hpp"

namespace selftrap::variational {

/// Exact 1d solution of the self-focusing equation obtained when the
/// condensate follows the impurity density locally (no condensate kinetic term).
struct SechSolution {
  double zeta = 0.0;
  double lambda = 0.0;         // localization length 2/zeta
  double epsilon_prime = 0.0;  // (epsilon - beta)/alpha = -zeta^2/8

  /// (2 lambda)^{-1/2} sech(x / lambda)
  double profile(double x) const;
};

SechSolution tf_sech(const ModelParams& m);

/// Local condensate density 1 - beta gamma^d |chi|^2 (may go negative for
/// strong repulsion; the caller decides how to clip).
double thomas_fermi_density(const ModelParams& m, double chi_squared);

/// Overlap integral h_d(sigma) = int int |chi_sigma|^2 G |chi_sigma|^2 for the
/// normalized Gaussian trial state, in overflow-safe scaled form.
double h_function(double sigma, int dim);
double h_function_derivative(double sigma, int dim);

/// Variational energy f(sigma) = alpha d / (4 sigma^2) - beta^2 gamma^d h_d(sigma).
double f_sigma(double sigma, const ModelParams& m);
double f_sigma_derivative(double sigma, const ModelParams& m);

struct VariationalResult {
  std::optional<double> sigma_min;  // absent: no self-trapped minimum
  std::optional<double> f_value;
  bool stable = false;              // f'' > 0 at sigma_min
  double zeta = 0.0;
};

/// Finite-sigma local minimum of f on a log scan of [1e-3, 1e3] (200 points
/// per decade) refined by golden section; the most localized minimum wins.
VariationalResult find_selftrap(const ModelParams& m);

/// Threshold of zeta above which f has an interior minimum: 0 in 1d, 2 pi in
/// 2d, bisected numerically in 3d.
double critical_zeta(int dim);

/// |beta| at the critical zeta for given alpha and gamma.
double critical_beta(int dim, double alpha, double gamma);

/// Green's function of (-Lap/2 + 2) in d dimensions at distance r > 0.
double helmholtz_green(double r, int dim);

/// Trial state of the collapse argument: Gaussian impurity of width sigma and
/// condensate 1 + s a sigma^{-delta/2} exp(-r^2/(b sigma^2)).
struct ScalingProbe {
  double a = 0.5;
  double b = 2.0;
  double delta = 2.0;
  double sigma = 1.0;
};

/// Energies of the probe state by Gauss-Legendre quadrature. The deformation
/// sign s lowers E_int (s = -1 for beta > 0, +1 for beta < 0). E_bec is
/// measured from the uniform background, so the undeformed condensate has
/// E_bec = 0.
EnergyBreakdown scaling_energy(const ModelParams& m, const ScalingProbe& p);

enum class CollapseClass { unbounded, marginal, bounded };

const char* to_string(CollapseClass c);

/// Compares the sigma -> 0 exponents of E_int (-delta), E_kin (-2) and the
/// E_bec terms (d - delta - 2, d - j delta/2 for j = 1..4).
CollapseClass collapse_diagnosis(const ModelParams& m, double delta);

/// True when some admissible exponent delta makes the energy unbounded below.
bool admits_unbounded_collapse(const ModelParams& m);

}  // namespace selftrap::variational
