#include "selftrap/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "selftrap/minimize.hpp"
#include "selftrap/quadrature.hpp"
#include "selftrap/specfun.hpp"

namespace selftrap::variational {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt2Pi = std::sqrt(2.0 * kPi);
const double kSqrtPi = std::sqrt(kPi);

constexpr double kScanLo = 1e-3;
constexpr double kScanHi = 1e3;
constexpr int kPointsPerDecade = 200;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double SechSolution::profile(double x) const {
  return 1.0 / (std::sqrt(2.0 * lambda) * std::cosh(x / lambda));
}

SechSolution tf_sech(const ModelParams& m) {
  m.validate();
  if (m.beta == 0.0) throw std::invalid_argument("tf_sech: beta = 0 gives a delocalized impurity");
  SechSolution s;
  s.zeta = m.zeta();
  s.lambda = 2.0 / s.zeta;
  s.epsilon_prime = -s.zeta * s.zeta / 8.0;
  return s;
}

double thomas_fermi_density(const ModelParams& m, double chi_squared) {
  return 1.0 - m.beta * m.gamma_pow_d() * chi_squared;
}

double h_function(double sigma, int dim) {
  validate_dimension(dim);
  require_positive(sigma, "sigma");
  switch (dim) {
    case 1:
      return 0.5 * specfun::erfcx(kSqrt2 * sigma);
    case 2:
      return specfun::exp_e1(2.0 * sigma * sigma) / (2.0 * kPi);
    default:
      return (1.0 / (kSqrt2Pi * sigma) - specfun::erfcx(kSqrt2 * sigma)) / kPi;
  }
}

double h_function_derivative(double sigma, int dim) {
  validate_dimension(dim);
  require_positive(sigma, "sigma");
  switch (dim) {
    case 1:
      return 2.0 * sigma * specfun::erfcx(kSqrt2 * sigma) - kSqrt2 / kSqrtPi;
    case 2:
      return 2.0 * sigma / kPi * specfun::exp_e1(2.0 * sigma * sigma) - 1.0 / (kPi * sigma);
    default:
      return (-1.0 / (kSqrt2Pi * sigma * sigma) - 4.0 * sigma * specfun::erfcx(kSqrt2 * sigma) +
              2.0 * kSqrt2 / kSqrtPi) /
             kPi;
  }
}

double f_sigma(double sigma, const ModelParams& m) {
  m.validate();
  require_positive(sigma, "sigma");
  const double b2gd = m.beta * m.beta * m.gamma_pow_d();
  return m.alpha * m.dim / (4.0 * sigma * sigma) - b2gd * h_function(sigma, m.dim);
}

double f_sigma_derivative(double sigma, const ModelParams& m) {
  m.validate();
  require_positive(sigma, "sigma");
  const double b2gd = m.beta * m.beta * m.gamma_pow_d();
  return -m.alpha * m.dim / (2.0 * sigma * sigma * sigma) - b2gd * h_function_derivative(sigma, m.dim);
}

VariationalResult find_selftrap(const ModelParams& m) {
  m.validate();
  VariationalResult result;
  result.zeta = m.zeta();
  if (m.beta == 0.0) return result;

  const int decades = static_cast<int>(std::lround(std::log10(kScanHi / kScanLo)));
  const int count = decades * kPointsPerDecade + 1;
  const double log_lo = std::log(kScanLo);
  const double step = (std::log(kScanHi) - log_lo) / (count - 1);

  std::vector<double> values(count);
  for (int i = 0; i < count; ++i) values[i] = f_sigma(std::exp(log_lo + i * step), m);

  // First interior local minimum from the small-sigma side.
  int found = -1;
  for (int i = 1; i + 1 < count; ++i) {
    if (values[i] < values[i - 1] && values[i] <= values[i + 1]) {
      found = i;
      break;
    }
  }
  if (found < 0) return result;

  const double lo = log_lo + (found - 1) * step;
  const double hi = log_lo + (found + 1) * step;
  auto f_log = [&](double t) { return f_sigma(std::exp(t), m); };
  double t_min = golden_section(f_log, lo, hi, 1e-12).x;

  // Polish on the analytic derivative; golden section alone stalls near
  // sqrt(machine epsilon) because f is flat at the minimum.
  auto df_log = [&](double t) { return f_sigma_derivative(std::exp(t), m); };
  if (df_log(lo) < 0.0 && df_log(hi) > 0.0) t_min = bisect_root(df_log, lo, hi);

  const double sigma = std::exp(t_min);
  const double ds = 1e-4 * sigma;
  const double curvature =
      (f_sigma_derivative(sigma + ds, m) - f_sigma_derivative(sigma - ds, m)) / (2.0 * ds);

  result.sigma_min = sigma;
  result.f_value = f_sigma(sigma, m);
  result.stable = curvature > 0.0;
  return result;
}

double critical_zeta(int dim) {
  validate_dimension(dim);
  if (dim == 1) return 0.0;
  if (dim == 2) return 2.0 * kPi;

  // f depends on beta only through zeta; probe with alpha = gamma = 1.
  auto has_minimum = [](double zeta) {
    ModelParams m{1.0, std::sqrt(zeta), 1.0, 3};
    return find_selftrap(m).sigma_min.has_value();
  };
  double lo = 20.0;
  double hi = 40.0;
  if (has_minimum(lo) || !has_minimum(hi)) throw std::logic_error("critical_zeta: bracket [20, 40] invalid");
  while ((hi - lo) > 1e-7 * hi) {
    const double mid = 0.5 * (lo + hi);
    (has_minimum(mid) ? hi : lo) = mid;
  }
  return hi;
}

double critical_beta(int dim, double alpha, double gamma) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  return std::sqrt(critical_zeta(dim) * alpha / std::pow(gamma, dim));
}

double helmholtz_green(double r, int dim) {
  validate_dimension(dim);
  require_positive(r, "r");
  switch (dim) {
    case 1:
      return 0.5 * std::exp(-2.0 * r);
    case 2:
      return specfun::bessel_k0(2.0 * r) / kPi;
    default:
      return std::exp(-2.0 * r) / (2.0 * kPi * r);
  }
}

EnergyBreakdown scaling_energy(const ModelParams& m, const ScalingProbe& p) {
  m.validate();
  require_positive(p.a, "probe amplitude a");
  require_positive(p.b, "probe width ratio b");
  require_positive(p.sigma, "probe sigma");
  if (!(p.delta > 0.0) || p.delta > m.dim) throw std::invalid_argument("probe exponent delta must lie in (0, d]");

  const int d = m.dim;
  const double sigma = p.sigma;
  const double sign = m.beta > 0.0 ? -1.0 : 1.0;
  const double amp = sign * p.a * std::pow(sigma, -0.5 * p.delta);
  const double surface = unit_sphere_surface(d);
  const double chi_norm = std::pow(kPi, -0.5 * d);  // |chi|^2 sigma^d at u = 0

  // Integrate in u = r / sigma; the integrands are Gaussians, far below
  // double precision beyond u_max.
  const double u_max = 12.0 * std::max(1.0, std::sqrt(p.b));
  static const GaussLegendre rule(16);
  const std::size_t panels = 64;

  auto measure = [&](double u) { return surface * std::pow(u, d - 1); };
  const double bec = rule.integrate(
      [&](double u) {
        const double dpsi = amp * std::exp(-u * u / p.b);
        const double grad = dpsi * (-2.0 * u / p.b);  // times 1/sigma
        const double psi2 = (1.0 + dpsi) * (1.0 + dpsi);
        return measure(u) * (0.5 * grad * grad / (sigma * sigma) + 0.5 * (psi2 - 1.0) * (psi2 - 1.0));
      },
      0.0, u_max, panels);
  const double inter = rule.integrate(
      [&](double u) {
        const double dpsi = amp * std::exp(-u * u / p.b);
        return measure(u) * chi_norm * std::exp(-u * u) * (1.0 + dpsi) * (1.0 + dpsi);
      },
      0.0, u_max, panels);
  const double kin = rule.integrate(
      [&](double u) { return measure(u) * chi_norm * std::exp(-u * u) * u * u; }, 0.0, u_max, panels);

  EnergyBreakdown e;
  e.e_bec = std::pow(sigma, d) * bec / m.gamma_pow_d();
  e.e_int = m.beta * inter;
  e.e_kin = 0.5 * m.alpha * kin / (sigma * sigma);
  e.e_tot = e.e_bec + e.e_int + e.e_kin;
  e.epsilon = e.e_kin + e.e_int;
  return e;
}

const char* to_string(CollapseClass c) {
  switch (c) {
    case CollapseClass::unbounded:
      return "unbounded";
    case CollapseClass::marginal:
      return "marginal";
    default:
      return "bounded";
  }
}

CollapseClass collapse_diagnosis(const ModelParams& m, double delta) {
  m.validate();
  if (!(delta > 0.0) || delta > m.dim) throw std::invalid_argument("collapse_diagnosis: delta must lie in (0, d]");
  if (m.beta >= 0.0) return CollapseClass::bounded;

  const double d = m.dim;
  const double interaction = -delta;
  double others = std::min(-2.0, d - delta - 2.0);
  for (int j = 1; j <= 4; ++j) others = std::min(others, d - j * delta / 2.0);

  constexpr double tie = 1e-12;
  if (interaction < others - tie) return CollapseClass::unbounded;
  if (std::abs(interaction - others) <= tie) return CollapseClass::marginal;
  return CollapseClass::bounded;
}

bool admits_unbounded_collapse(const ModelParams& m) {
  m.validate();
  constexpr int samples = 256;
  for (int k = 1; k <= samples; ++k) {
    const double delta = m.dim * static_cast<double>(k) / samples;
    if (collapse_diagnosis(m, delta) == CollapseClass::unbounded) return true;
  }
  return false;
}

}  // namespace selftrap::variational
