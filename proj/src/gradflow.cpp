#include "selftrap/gradflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "selftrap/fitting.hpp"

namespace selftrap::gradflow {

namespace {

// Solves (I + tau diag(pot) - tau coef Lap) x = rhs on the first `m` nodes.
// Nodes beyond m are held at zero (Dirichlet).
void implicit_solve(const RadialGrid& grid, const std::vector<double>& pot, double coef, double tau,
                    const std::vector<double>& rhs, std::size_t m, std::vector<double>& x,
                    std::vector<double>& scratch_c, std::vector<double>& scratch_d) {
  const auto w = grid.weights();
  const auto area = grid.face_areas();
  const double k = tau * coef / grid.spacing();
  const std::size_t n = grid.size();
  x.assign(n, 0.0);
  scratch_c.resize(m);
  scratch_d.resize(m);

  // Thomas algorithm; row i couples to i-1 through face i-1 and to i+1
  // through face i. The face beyond node n-1 does not exist.
  double prev_c = 0.0;
  double prev_d = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i > 0 ? k * area[i - 1] / w[i] : 0.0;
    const double right = i + 1 < n ? k * area[i] / w[i] : 0.0;
    const double diag = 1.0 + tau * pot[i] + left + right;
    const double denom = diag + left * prev_c;
    if (!(std::abs(denom) > 0.0) || !std::isfinite(denom)) {
      throw std::runtime_error("implicit_solve: singular tridiagonal system");
    }
    prev_c = (i + 1 < m) ? -right / denom : 0.0;
    prev_d = (rhs[i] + left * prev_d) / denom;
    scratch_c[i] = prev_c;
    scratch_d[i] = prev_d;
  }
  x[m - 1] = scratch_d[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) x[i] = scratch_d[i] - scratch_c[i] * x[i + 1];
}

void scale_to(const RadialGrid& grid, std::vector<double>& f, double target) {
  const double norm = grid.norm2(f);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw std::runtime_error("projection of a vanishing field");
  const double s = std::sqrt(target / norm);
  for (double& v : f) v *= s;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// E_tot without the impurity eigenvalue; cheap enough to call every step.
double total_energy(const ModelParams& m, const RadialGrid& grid, const FieldPair& f) {
  const auto w = grid.weights();
  double bulk = 0.0;
  double overlap = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p2 = f.psi[i] * f.psi[i];
    bulk += w[i] * (-p2 + 0.5 * p2 * p2);
    overlap += w[i] * f.chi[i] * f.chi[i] * p2;
  }
  return (0.5 * grid.gradient_energy(f.psi) + bulk) / m.gamma_pow_d() + m.beta * overlap +
         0.5 * m.alpha * grid.gradient_energy(f.chi);
}

struct Stepper {
  const ModelParams& m;
  const RadialGrid& grid;
  Wall wall;
  std::vector<double> pot, scratch_c, scratch_d;

  Stepper(const ModelParams& model, const RadialGrid& g, Wall w) : m(model), grid(g), wall(w) {}

  void step(const FieldPair& in, FieldPair& out, double tau_psi, double tau_chi) {
    const std::size_t n = grid.size();
    const double coupling = m.beta * m.gamma_pow_d();
    pot.resize(n);

    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      pot[i] = coupling * in.chi[i] * in.chi[i] + in.psi[i] * in.psi[i];
      lowest = std::min(lowest, pot[i]);
    }
    // A constant shift only rescales the projected result but keeps the
    // implicit operator positive for attractive coupling.
    double shift = std::max(0.0, -lowest);
    for (std::size_t i = 0; i < n; ++i) pot[i] += shift;
    const std::size_t m_psi = wall == Wall::neumann ? n : n - 1;
    implicit_solve(grid, pot, 0.5, tau_psi, in.psi, m_psi, out.psi, scratch_c, scratch_d);
    scale_to(grid, out.psi, grid.volume());

    lowest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      pot[i] = m.beta * out.psi[i] * out.psi[i];
      lowest = std::min(lowest, pot[i]);
    }
    shift = std::max(0.0, -lowest);
    for (std::size_t i = 0; i < n; ++i) pot[i] += shift;
    implicit_solve(grid, pot, 0.5 * m.alpha, tau_chi, in.chi, n - 1, out.chi, scratch_c, scratch_d);
    scale_to(grid, out.chi, 1.0);
  }
};

void check_fields(const RadialGrid& grid, const FieldPair& f) {
  grid.check_size(f.psi, "psi");
  grid.check_size(f.chi, "chi");
}

bool collapsed_width(const RadialGrid& grid, const FieldPair& f, double floor) {
  const double h = grid.spacing();
  const auto r = grid.nodes();
  const auto w = grid.weights();
  double second = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) second += w[i] * f.chi[i] * f.chi[i] * r[i] * r[i];
  // A Gaussian of width sigma has rms radius sigma sqrt(d/2); skip the fit
  // when the state is clearly wide.
  const double rms = std::sqrt(second);
  if (rms > 4.0 * floor * h * std::sqrt(0.5 * grid.dim())) return false;
  return fitting::fit_gaussian(grid, f.chi).width < floor * h;
}

SolveReport run_flow(const ModelParams& m, const RadialGrid& grid, const FlowConfig& c, FieldPair state,
                     double seed_label) {
  SolveReport rep;
  rep.seed_width = seed_label;
  Stepper stepper(m, grid, c.condensate_wall);
  FieldPair next{std::vector<double>(grid.size()), std::vector<double>(grid.size())};

  double tau = c.time_step;
  double energy = total_energy(m, grid, state);
  double energy_at_check = energy;
  int passes = 0;

  auto finish = [&](Outcome o) {
    rep.outcome = o;
    rep.energies = energy_breakdown(m, grid, state);
    rep.residuals = stationary_residuals(m, grid, state, c.condensate_wall);
    rep.fields = std::move(state);
    return rep;
  };

  for (std::size_t k = 0; k < c.max_steps; ++k) {
    double new_energy = 0.0;
    for (;;) {
      stepper.step(state, next, std::min(tau, c.condensate_step_cap), tau);
      new_energy = total_energy(m, grid, next);
      const bool rose = new_energy > energy + c.monotonicity_tol * std::abs(energy);
      if (!rose || tau <= c.min_time_step) {
        if (rose) ++rep.violations;
        break;
      }
      tau = std::max(0.5 * tau, c.min_time_step);
      ++rep.rejected;
    }
    if (!std::isfinite(new_energy)) throw std::runtime_error("gradient flow produced a non-finite energy");

    const double change = std::max(max_abs_diff(next.psi, state.psi), max_abs_diff(next.chi, state.chi));
    const double d_energy = std::abs(new_energy - energy);
    std::swap(state, next);
    energy = new_energy;
    rep.flow_time += tau;
    rep.steps = k + 1;
    tau = std::min(c.max_time_step, tau * c.step_growth);

    if (d_energy <= c.energy_tol * std::max(1.0, std::abs(energy)) && change <= c.field_tol) {
      if (++passes >= 3) {
        const Residuals res = stationary_residuals(m, grid, state, c.condensate_wall);
        if (res.psi < c.residual_tol && res.chi < c.residual_tol) return finish(Outcome::converged);
        passes = 0;
      }
    } else {
      passes = 0;
    }

    if ((k + 1) % c.check_interval == 0) {
      if (c.trace) {
        *c.trace << seed_label << ',' << k + 1 << ',' << rep.flow_time << ',' << tau << ',' << energy << ','
                 << change << ',' << density_at_origin(state) << '\n';
      }
      const bool decreasing = energy < energy_at_check;
      energy_at_check = energy;
      if (decreasing && (density_at_origin(state) > c.density_cap ||
                         collapsed_width(grid, state, c.collapse_width_floor))) {
        return finish(Outcome::collapse_detected);
      }
    }
  }
  return finish(Outcome::max_steps_exceeded);
}

// Point-like impurity in a locally depleted (or enhanced) condensate.
FieldPair collapse_probe_seed(const ModelParams& m, const RadialGrid& grid, Wall wall) {
  const std::size_t n = grid.size();
  FieldPair f{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  f.chi[0] = 1.0;
  scale_to(grid, f.chi, 1.0);
  const double coupling = m.beta * m.gamma_pow_d();
  for (std::size_t i = 0; i < n; ++i) f.psi[i] = std::sqrt(std::max(0.0, 1.0 - coupling * f.chi[i] * f.chi[i]));
  if (wall == Wall::dirichlet) f.psi[n - 1] = 0.0;
  scale_to(grid, f.psi, grid.volume());
  return f;
}

}  // namespace

void FlowConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(time_step, "time_step");
  positive(max_time_step, "max_time_step");
  positive(condensate_step_cap, "condensate_step_cap");
  positive(min_time_step, "min_time_step");
  positive(energy_tol, "energy_tol");
  positive(field_tol, "field_tol");
  positive(residual_tol, "residual_tol");
  positive(density_cap, "density_cap");
  positive(monotonicity_tol, "monotonicity_tol");
  if (!(step_growth >= 1.0)) throw std::invalid_argument("step_growth must be >= 1");
  if (!(collapse_width_floor >= 1.0)) throw std::invalid_argument("collapse_width_floor must be >= 1");
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (check_interval == 0) throw std::invalid_argument("check_interval must be positive");
  if (min_time_step > time_step) throw std::invalid_argument("min_time_step exceeds time_step");
  for (double s : seed_widths) positive(s, "seed width");
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::converged:
      return "converged";
    case Outcome::collapse_detected:
      return "collapse_detected";
    case Outcome::no_ground_state:
      return "no_ground_state";
    default:
      return "max_steps_exceeded";
  }
}

FieldPair initialize(const ModelParams& m, const RadialGrid& grid, double seed_width, Wall wall) {
  m.validate();
  if (grid.dim() != m.dim) throw std::invalid_argument("initialize: grid and model dimension differ");
  if (!(seed_width > grid.spacing()) || !(seed_width < 0.5 * grid.radius())) {
    throw std::invalid_argument("initialize: seed width must lie in (h, R/2)");
  }
  const std::size_t n = grid.size();
  const auto r = grid.nodes();
  FieldPair f{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = r[i] / seed_width;
    f.chi[i] = std::exp(-0.5 * u * u);
    f.psi[i] = wall == Wall::neumann ? 1.0 : std::tanh(grid.radius() - r[i]);
  }
  f.chi[n - 1] = 0.0;
  project(grid, f);
  return f;
}

void project(const RadialGrid& grid, FieldPair& f) {
  check_fields(grid, f);
  scale_to(grid, f.psi, grid.volume());
  scale_to(grid, f.chi, 1.0);
}

FieldPair flow_step(const ModelParams& m, const RadialGrid& grid, const FieldPair& f, const FlowConfig& c) {
  m.validate();
  c.validate();
  check_fields(grid, f);
  Stepper stepper(m, grid, c.condensate_wall);
  FieldPair out;
  stepper.step(f, out, std::min(c.time_step, c.condensate_step_cap), c.time_step);
  return out;
}

Residuals stationary_residuals(const ModelParams& m, const RadialGrid& grid, const FieldPair& f, Wall wall) {
  check_fields(grid, f);
  const std::size_t n = grid.size();
  const auto w = grid.weights();
  std::vector<double> lap_psi(n);
  std::vector<double> lap_chi(n);
  grid.laplacian(f.psi, lap_psi);
  grid.laplacian(f.chi, lap_chi);

  const double coupling = m.beta * m.gamma_pow_d();
  const std::size_t m_psi = wall == Wall::neumann ? n : n - 1;
  std::vector<double> h_psi(n, 0.0);
  std::vector<double> h_chi(n, 0.0);
  double mu_num = 0.0;
  double mu_den = 0.0;
  double eps_num = 0.0;
  double eps_den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p2 = f.psi[i] * f.psi[i];
    if (i < m_psi) {
      h_psi[i] = -0.5 * lap_psi[i] + (coupling * f.chi[i] * f.chi[i] + p2) * f.psi[i];
      mu_num += w[i] * f.psi[i] * h_psi[i];
      mu_den += w[i] * p2;
    }
    if (i + 1 < n) {
      h_chi[i] = -0.5 * m.alpha * lap_chi[i] + m.beta * p2 * f.chi[i];
      eps_num += w[i] * f.chi[i] * h_chi[i];
      eps_den += w[i] * f.chi[i] * f.chi[i];
    }
  }
  Residuals res;
  res.mu = mu_num / mu_den;
  res.epsilon = eps_num / eps_den;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < m_psi) res.psi = std::max(res.psi, std::abs(h_psi[i] - res.mu * f.psi[i]));
    if (i + 1 < n) res.chi = std::max(res.chi, std::abs(h_chi[i] - res.epsilon * f.chi[i]));
  }
  return res;
}

SolveReport evolve(const ModelParams& m, const RadialGrid& grid, const FlowConfig& c, FieldPair start) {
  m.validate();
  c.validate();
  if (grid.dim() != m.dim) throw std::invalid_argument("evolve: grid and model dimension differ");
  check_fields(grid, start);
  project(grid, start);
  return run_flow(m, grid, c, std::move(start), 0.0);
}

SolveReport ground_state(const ModelParams& m, const RadialGrid& grid, const FlowConfig& c,
                         const FieldPair* warm_start) {
  m.validate();
  c.validate();
  if (grid.dim() != m.dim) throw std::invalid_argument("ground_state: grid and model dimension differ");

  const bool attractive_3d = m.dim == 3 && m.beta < 0.0;
  if (attractive_3d) {
    SolveReport probe = run_flow(m, grid, c, collapse_probe_seed(m, grid, c.condensate_wall), 0.0);
    if (probe.outcome == Outcome::collapse_detected) {
      probe.outcome = Outcome::no_ground_state;
      return probe;
    }
  }

  std::vector<double> seeds = c.seed_widths;
  if (seeds.empty()) seeds = {std::max(1.0, 4.0 * grid.spacing()), grid.radius() / 8.0};

  std::vector<SolveReport> runs;
  if (warm_start) {
    FieldPair start = *warm_start;
    check_fields(grid, start);
    project(grid, start);
    runs.push_back(run_flow(m, grid, c, std::move(start), 0.0));
  }
  for (double s : seeds) runs.push_back(run_flow(m, grid, c, initialize(m, grid, s, c.condensate_wall), s));

  for (SolveReport& r : runs) {
    if (r.outcome == Outcome::collapse_detected) {
      if (attractive_3d) r.outcome = Outcome::no_ground_state;
      return std::move(r);
    }
  }
  SolveReport* best = nullptr;
  for (SolveReport& r : runs) {
    if (r.outcome != Outcome::converged) continue;
    if (!best || r.energies.e_tot < best->energies.e_tot) best = &r;
  }
  if (best) return std::move(*best);
  for (SolveReport& r : runs) {
    if (!best || r.energies.e_tot < best->energies.e_tot) best = &r;
  }
  return std::move(*best);
}

}  // namespace selftrap::gradflow
