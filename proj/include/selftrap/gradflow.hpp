#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "selftrap/core.hpp"

namespace selftrap::gradflow {

/// Boundary condition for the condensate at r = R. The impurity always
/// vanishes there.
enum class Wall { neumann, dirichlet };

struct FlowConfig {
  double time_step = 1e-2;            // initial flow-time step
  double max_time_step = 1e3;         // ceiling of the adaptive step (impurity)
  double condensate_step_cap = 1.0;   // ceiling of the condensate step
  double min_time_step = 1e-10;
  double step_growth = 1.25;
  double energy_tol = 1e-10;          // relative |dE| per step
  double field_tol = 1e-8;            // max |d psi|, |d chi| per step
  double residual_tol = 1e-6;         // stationarity check at convergence
  std::size_t max_steps = 2'000'000;
  double collapse_width_floor = 2.0;  // in grid spacings
  double density_cap = 1e4;           // psi(0)^2
  double monotonicity_tol = 1e-9;     // relative energy rise tolerated
  std::size_t check_interval = 50;
  Wall condensate_wall = Wall::neumann;
  std::vector<double> seed_widths;    // empty: max(1, 4h) and R/8
  std::ostream* trace = nullptr;      // CSV: seed,step,flow_time,tau,e_tot,field_change,psi0_sq

  /// Throws std::invalid_argument on nonpositive tolerances or steps.
  void validate() const;
};

enum class Outcome { converged, collapse_detected, no_ground_state, max_steps_exceeded };

const char* to_string(Outcome o);

struct Residuals {
  double psi = 0.0;      // max |(-Lap/2 + beta gamma^d chi^2 + psi^2 - mu) psi|
  double chi = 0.0;      // max |(-alpha/2 Lap + beta psi^2 - epsilon) chi| over interior nodes
  double mu = 0.0;       // condensate Lagrange multiplier
  double epsilon = 0.0;  // impurity Lagrange multiplier
};

struct SolveReport {
  Outcome outcome = Outcome::max_steps_exceeded;
  FieldPair fields;
  EnergyBreakdown energies;
  Residuals residuals;
  std::size_t steps = 0;
  double flow_time = 0.0;
  std::size_t violations = 0;  // accepted energy rises beyond monotonicity_tol
  std::size_t rejected = 0;    // steps retried with a smaller time step
  double seed_width = 0.0;     // 0 for a warm start or the collapse probe
};

/// Normalized Gaussian impurity of width seed_width (h < seed_width < R/2)
/// and a condensate at the bulk density, flat for a Neumann wall and healed
/// to zero over one healing length for a Dirichlet wall.
FieldPair initialize(const ModelParams& m, const RadialGrid& grid, double seed_width,
                     Wall wall = Wall::neumann);

/// Norm targets: sum w psi^2 = ball volume, sum w chi^2 = 1.
void project(const RadialGrid& grid, FieldPair& f);

/// One alternating semi-implicit step of size c.time_step (condensate step
/// capped by c.condensate_step_cap), each field projected back to its norm.
FieldPair flow_step(const ModelParams& m, const RadialGrid& grid, const FieldPair& f, const FlowConfig& c);

Residuals stationary_residuals(const ModelParams& m, const RadialGrid& grid, const FieldPair& f,
                               Wall wall = Wall::neumann);

/// Lowest-energy converged state over the seeds and the optional warm start.
/// In 3d with beta < 0 a point-like impurity is flowed first; if it collapses
/// the result is no_ground_state.
SolveReport ground_state(const ModelParams& m, const RadialGrid& grid, const FlowConfig& c,
                         const FieldPair* warm_start = nullptr);

/// Runs the adaptive flow from a given state without seed selection.
SolveReport evolve(const ModelParams& m, const RadialGrid& grid, const FlowConfig& c, FieldPair start);

}  // namespace selftrap::gradflow
