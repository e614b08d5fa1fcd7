#include "selftrap/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace selftrap {

void validate_dimension(int dim) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
}

double healing_length(const PhysicalParams& p) {
  return p.hbar / std::sqrt(p.boson_coupling * p.density * p.boson_mass);
}

double mean_spacing(const PhysicalParams& p) {
  return std::pow(p.density, -1.0 / p.dimension);
}

ModelParams to_dimensionless(const PhysicalParams& p) {
  validate_dimension(p.dimension);
  if (!(p.boson_coupling > 0.0)) throw std::invalid_argument("boson coupling g must be positive");
  if (!(p.impurity_mass > 0.0) || !(p.boson_mass > 0.0)) {
    throw std::invalid_argument("masses must be positive");
  }
  if (!(p.density > 0.0)) throw std::invalid_argument("density must be positive");
  if (!(p.hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
  if (!std::isfinite(p.impurity_coupling)) throw std::invalid_argument("impurity coupling must be finite");

  ModelParams m;
  m.alpha = p.boson_mass / p.impurity_mass;
  m.beta = p.impurity_coupling / p.boson_coupling;
  m.gamma = mean_spacing(p) / healing_length(p);
  m.dim = p.dimension;
  return m;
}

double ModelParams::gamma_pow_d() const { return std::pow(gamma, dim); }

double ModelParams::zeta() const { return beta * beta * gamma_pow_d() / alpha; }

void ModelParams::validate() const {
  validate_dimension(dim);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
}

double unit_sphere_surface(int dim) {
  validate_dimension(dim);
  switch (dim) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * std::numbers::pi;
    default:
      return 4.0 * std::numbers::pi;
  }
}

double ball_volume(int dim, double radius) {
  return unit_sphere_surface(dim) * std::pow(radius, dim) / dim;
}

RadialGrid::RadialGrid(int dim, double radius, std::size_t points)
    : dim_(dim), radius_(radius) {
  validate_dimension(dim);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("grid radius must be positive");
  if (points < 16) throw std::invalid_argument("grid needs at least 16 points");

  const std::size_t n = points;
  spacing_ = radius / static_cast<double>(n - 1);
  const double surface = unit_sphere_surface(dim);
  const double h = spacing_;

  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) nodes_[i] = static_cast<double>(i) * h;
  nodes_.back() = radius;

  // Cell boundaries at the faces; the first and last cells are half cells.
  auto shell = [&](double lo, double hi) {
    return surface * (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
  };
  weights_.resize(n);
  face_areas_.resize(n - 1);
  double lo = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double face = (static_cast<double>(i) + 0.5) * h;
    weights_[i] = shell(lo, face);
    face_areas_[i] = surface * std::pow(face, dim - 1);
    lo = face;
  }
  weights_[n - 1] = shell(lo, radius);

  volume_ = ball_volume(dim, radius);
}

void RadialGrid::check_size(std::span<const double> f, const char* what) const {
  if (f.size() != size()) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(size()) +
                                " values, got " + std::to_string(f.size()));
  }
}

double RadialGrid::integrate(std::span<const double> f) const {
  check_size(f, "integrate");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i];
  return s;
}

double RadialGrid::norm2(std::span<const double> f) const {
  check_size(f, "norm2");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i] * f[i];
  return s;
}

double RadialGrid::inner(std::span<const double> f, std::span<const double> g) const {
  check_size(f, "inner");
  check_size(g, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i] * g[i];
  return s;
}

double RadialGrid::gradient_energy(std::span<const double> f) const {
  check_size(f, "gradient_energy");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double d = f[i + 1] - f[i];
    s += face_areas_[i] * d * d;
  }
  return s / spacing_;
}

void RadialGrid::laplacian(std::span<const double> f, std::span<double> out) const {
  check_size(f, "laplacian");
  if (out.size() != f.size()) throw std::invalid_argument("laplacian: output size mismatch");
  const std::size_t n = f.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double flux = face_areas_[i] * (f[i + 1] - f[i]) / spacing_;
    out[i] += flux;
    out[i + 1] -= flux;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= weights_[i];
}

EnergyBreakdown energy_breakdown(const ModelParams& m, const RadialGrid& grid, const FieldPair& f) {
  m.validate();
  grid.check_size(f.psi, "energy_breakdown psi");
  grid.check_size(f.chi, "energy_breakdown chi");
  if (grid.dim() != m.dim) throw std::invalid_argument("energy_breakdown: grid and model dimension differ");

  const auto w = grid.weights();
  const std::size_t n = grid.size();

  double bulk = 0.0;
  double overlap = 0.0;
  double chi_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p2 = f.psi[i] * f.psi[i];
    const double c2 = f.chi[i] * f.chi[i];
    bulk += w[i] * (-p2 + 0.5 * p2 * p2);
    overlap += w[i] * c2 * p2;
    chi_norm += w[i] * c2;
  }

  EnergyBreakdown e;
  e.e_bec = (0.5 * grid.gradient_energy(f.psi) + bulk) / m.gamma_pow_d();
  e.e_int = m.beta * overlap;
  e.e_kin = 0.5 * m.alpha * grid.gradient_energy(f.chi);
  e.e_tot = e.e_bec + e.e_int + e.e_kin;

  // Rayleigh quotient in operator form; with chi(R) = 0 it equals
  // (E_kin + E_int) / <chi, chi> up to rounding.
  std::vector<double> lap(n);
  grid.laplacian(f.chi, lap);
  double numer = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    numer += w[i] * f.chi[i] *
             (-0.5 * m.alpha * lap[i] + m.beta * f.psi[i] * f.psi[i] * f.chi[i]);
  }
  e.epsilon = chi_norm > 0.0 ? numer / chi_norm : 0.0;
  return e;
}

double density_at_origin(const FieldPair& f) {
  if (f.psi.empty()) throw std::invalid_argument("density_at_origin: empty field");
  return f.psi.front() * f.psi.front();
}

}  // namespace selftrap
