#pragma once

#include <span>

#include "selftrap/core.hpp"

namespace selftrap::fitting {

/// Unit-normalized trial families in d dimensions.
/// Gaussian: (pi sigma^2)^{-d/4} exp(-r^2 / (2 sigma^2)).
double gaussian_profile(double sigma, int dim, double r);
/// Sech: N_lambda sech(r / lambda).
double sech_profile(double lambda, int dim, double r);
/// 1 / N_lambda^2 = S_d lambda^d int_0^inf sech^2(u) u^{d-1} du.
double sech_inverse_norm2(double lambda, int dim);

struct WidthFit {
  double width = 0.0;
  double residual = 0.0;
};

/// Best width and volume-weighted L2 residual sum_i w_i (chi_i - model_i)^2
/// over log width in [h, 2R]. Throws std::invalid_argument unless chi is
/// normalized to 1e-6.
WidthFit fit_gaussian(const RadialGrid& grid, std::span<const double> chi);
WidthFit fit_sech(const RadialGrid& grid, std::span<const double> chi);

struct FitResult {
  double sigma = 0.0;
  double lambda = 0.0;
  double s_sigma = 0.0;
  double s_lambda = 0.0;
  double r_fit = 0.0;    // +1 sech-like, -1 Gaussian-like
  double ell_loc = 0.0;  // width of the better-fitting family
  bool degenerate = false;
};

/// (s_sigma - s_lambda) / (s_sigma + s_lambda); 0 when both vanish.
double discriminator(double s_sigma, double s_lambda);

FitResult r_fit(const RadialGrid& grid, std::span<const double> chi);

}  // namespace selftrap::fitting
