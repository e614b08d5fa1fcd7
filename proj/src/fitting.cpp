#include "selftrap/fitting.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "selftrap/minimize.hpp"

namespace selftrap::fitting {

namespace {

constexpr double kNormTol = 1e-6;
constexpr int kScanPoints = 400;

void require_width(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("profile width must be positive");
}

WidthFit fit_family(const RadialGrid& grid, std::span<const double> chi,
                    const std::function<double(double, double)>& model) {
  grid.check_size(chi, "fit");
  const double norm = grid.norm2(chi);
  if (std::abs(norm - 1.0) > kNormTol) {
    throw std::invalid_argument("fit: impurity field is not normalized (norm^2 = " + std::to_string(norm) + ")");
  }

  const auto r = grid.nodes();
  const auto w = grid.weights();
  auto residual = [&](double log_width) {
    const double width = std::exp(log_width);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double d = chi[i] - model(width, r[i]);
      s += w[i] * d * d;
    }
    return s;
  };

  const double lo = std::log(grid.spacing());
  const double hi = std::log(2.0 * grid.radius());
  const double step = (hi - lo) / (kScanPoints - 1);
  int best = 0;
  double best_value = residual(lo);
  for (int k = 1; k < kScanPoints; ++k) {
    const double v = residual(lo + k * step);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  const double a = lo + std::max(0, best - 1) * step;
  const double b = lo + std::min(kScanPoints - 1, best + 1) * step;
  const ScalarMinimum m = golden_section(residual, a, b, 1e-12);
  return {std::exp(m.x), m.value};
}

}  // namespace

double gaussian_profile(double sigma, int dim, double r) {
  require_width(sigma);
  const double amp = std::pow(std::numbers::pi * sigma * sigma, -0.25 * dim);
  const double u = r / sigma;
  return amp * std::exp(-0.5 * u * u);
}

double sech_inverse_norm2(double lambda, int dim) {
  require_width(lambda);
  // int_0^inf sech^2(u) u^{d-1} du = 1, ln 2, pi^2/12.
  static constexpr double moments[] = {1.0, std::numbers::ln2, std::numbers::pi * std::numbers::pi / 12.0};
  validate_dimension(dim);
  return unit_sphere_surface(dim) * std::pow(lambda, dim) * moments[dim - 1];
}

double sech_profile(double lambda, int dim, double r) {
  const double amp = 1.0 / std::sqrt(sech_inverse_norm2(lambda, dim));
  return amp / std::cosh(r / lambda);
}

WidthFit fit_gaussian(const RadialGrid& grid, std::span<const double> chi) {
  const int d = grid.dim();
  return fit_family(grid, chi, [d](double s, double r) { return gaussian_profile(s, d, r); });
}

WidthFit fit_sech(const RadialGrid& grid, std::span<const double> chi) {
  const int d = grid.dim();
  return fit_family(grid, chi, [d](double l, double r) { return sech_profile(l, d, r); });
}

double discriminator(double s_sigma, double s_lambda) {
  const double sum = s_sigma + s_lambda;
  if (!(sum > 0.0)) return 0.0;
  return (s_sigma - s_lambda) / sum;
}

FitResult r_fit(const RadialGrid& grid, std::span<const double> chi) {
  const WidthFit g = fit_gaussian(grid, chi);
  const WidthFit s = fit_sech(grid, chi);
  FitResult out;
  out.sigma = g.width;
  out.lambda = s.width;
  out.s_sigma = g.residual;
  out.s_lambda = s.residual;
  out.degenerate = !(g.residual + s.residual > 0.0);
  out.r_fit = discriminator(g.residual, s.residual);
  out.ell_loc = out.r_fit < 0.0 ? out.sigma : out.lambda;
  return out;
}

}  // namespace selftrap::fitting
