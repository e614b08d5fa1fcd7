// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance          run all criteria
//   acceptance 5 7      run the listed criteria
//
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "run.hpp"
#include "selftrap/delta1d.hpp"
#include "selftrap/fitting.hpp"
#include "selftrap/gradflow.hpp"
#include "selftrap/variational.hpp"

using namespace selftrap;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failed += " [not met: " + what + "]";
    }
  }
};

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds
  std::function<void(Outcome&)> body;
};

cli::RunConfig threshold_config(int dim) {
  cli::RunConfig cfg;
  cfg.mode = cli::Mode::thresholds;
  cfg.model = ModelParams{1.0, 0.0, 0.5, dim};
  return cfg;
}

double fitted_sigma(const RadialGrid& g, const gradflow::SolveReport& r) {
  return fitting::fit_gaussian(g, r.fields.chi).width;
}

void ac1(Outcome& o) {
  const double z1 = variational::critical_zeta(1);
  const double z2 = variational::critical_zeta(2);
  const double z3 = variational::critical_zeta(3);
  o.check(z1 == 0.0, "zeta_crit(1d) == 0");
  o.check(z2 == 2.0 * pi, "zeta_crit(2d) == 2 pi");
  const bool below = !variational::find_selftrap(ModelParams{1.0, std::sqrt(0.99 * 2.0 * pi), 1.0, 2}).sigma_min;
  const bool above = variational::find_selftrap(ModelParams{1.0, std::sqrt(1.01 * 2.0 * pi), 1.0, 2}).sigma_min.has_value();
  o.check(below && above, "2d minimum appears between 0.99 and 1.01 of 2 pi");
  o.check(std::abs(z3 - 31.7) <= 0.3, "zeta_crit(3d) = 31.7 +- 0.3");
  const auto at = variational::find_selftrap(ModelParams{1.0, std::sqrt(31.7 / 0.125), 0.5, 3});
  o.check(at.sigma_min && std::abs(*at.sigma_min - 0.87) <= 0.02, "sigma(zeta = 31.7) = 0.87 +- 0.02");
  o.detail << "zeta_crit = " << z1 << ", " << z2 << ", " << z3 << "; sigma_min(31.7) = " << at.sigma_min.value_or(NAN);
}

void ac2(Outcome& o) {
  for (double zeta : {0.05, 0.1, 0.2}) {
    const auto r = variational::find_selftrap(ModelParams{1.0, std::sqrt(zeta / 0.5), 0.5, 1});
    const double ratio = r.sigma_min ? *r.sigma_min * zeta / std::sqrt(2.0 * pi) : NAN;
    o.check(std::abs(ratio - 1.0) < 0.02, "sigma zeta / sqrt(2 pi) within 2% at zeta = " + std::to_string(zeta));
    o.detail << "zeta " << zeta << ": ratio " << ratio << "; ";
  }
}

void ac3(Outcome& o) {
  double worst_f = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const ModelParams m{1.0, 1.0, 0.5, d};
    for (int k = 0; k < 20; ++k) {
      const double sigma = 0.05 * std::pow(10.0, 2.5 * k / 19.0);
      const double f_ref =
          m.alpha * d / (4.0 * sigma * sigma) - m.beta * m.beta * m.gamma_pow_d() * oracle::h_double_quadrature(sigma, d);
      worst_f = std::max(worst_f, std::abs(variational::f_sigma(sigma, m) / f_ref - 1.0));
    }
  }
  o.check(worst_f < 1e-5, "f_sigma vs double quadrature < 1e-5");
  double worst_e = 0.0;
  for (double bg : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
    const double beta = bg / 0.5;
    worst_e = std::max(worst_e, std::abs(delta1d::deformation_energy(beta, 0.5) /
                                             oracle::deformation_energy_quadrature(beta, 0.5) - 1.0));
  }
  o.check(worst_e < 1e-4, "deformation energy vs profile quadrature < 1e-4");
  o.detail << "max rel err f: " << worst_f << ", E_def: " << worst_e;
}

void ac4(Outcome& o) {
  const double gamma = 0.5;
  double worst_jump = 0.0;
  bool ordered = true;
  for (double beta = 0.05; beta <= 40.0; beta *= 1.25) {
    for (double b : {beta, -beta}) {
      const auto s = delta1d::delta_solution(b, gamma);
      const double p = s.psi0;
      worst_jump = std::max(worst_jump, std::abs(1.0 - p * p - b * gamma * p));
    }
    ordered = ordered && delta1d::deformation_energy(-beta, gamma) < delta1d::deformation_energy(beta, gamma);
  }
  o.check(worst_jump < 1e-12, "jump condition residual < 1e-12");
  o.check(ordered, "attractive below repulsive");
  double worst_weak = 0.0;
  for (double bg : {-0.1, 0.1}) {
    const double beta = bg / gamma;
    const double weak = -0.5 * beta * beta * gamma;
    worst_weak = std::max(worst_weak, std::abs(delta1d::deformation_energy(beta, gamma) / weak - 1.0));
  }
  o.check(worst_weak < 0.01, "weak-coupling limit -beta^2 gamma/2 within 1% at |beta gamma| = 0.1");
  o.detail << "jump residual " << worst_jump << ", weak-coupling rel dev " << worst_weak;
}

void ac5(Outcome& o) {
  auto cfg = threshold_config(2);
  cfg.radius = 64.0;
  cfg.points = 4096;
  const double b_var = variational::critical_beta(2, 1.0, 0.5);
  const auto b = cli::bisect_localization(cfg, 0.5 * b_var, 2.0 * b_var);
  o.check(b.value && *b.value >= 4.7 && *b.value <= 5.4, "beta_crit in [4.7, 5.4]");
  o.detail << "beta_crit = " << b.value.value_or(NAN) << " (bracket " << b.lo << ", " << b.hi << ")";
}

void ac6(Outcome& o) {
  auto cfg = threshold_config(2);
  const RadialGrid g(2, cfg.grid_radius(), cfg.grid_points());
  const auto strong = gradflow::ground_state(ModelParams{1.0, -12.0, 0.5, 2}, g, cfg.flow);
  o.check(strong.outcome == gradflow::Outcome::collapse_detected, "beta = -12 collapses");
  for (double beta : {-8.0, -7.0, -6.0}) {
    const auto r = gradflow::ground_state(ModelParams{1.0, beta, 0.5, 2}, g, cfg.flow);
    const bool localized = r.outcome == gradflow::Outcome::converged && fitted_sigma(g, r) < 0.25 * g.radius();
    o.check(localized, "converged localized at beta = " + std::to_string(beta));
  }
  const double b_var = variational::critical_beta(2, 1.0, 0.5);
  const auto b = cli::bisect_collapse(cfg, -4.0 * b_var, -0.5 * b_var);
  o.check(b.value && *b.value >= -12.0 && *b.value <= -8.0, "beta* in [-12, -8]");
  o.detail << "beta* = " << b.value.value_or(NAN);
}

void ac7(Outcome& o) {
  const double b_var = variational::critical_beta(3, 1.0, 0.5);
  o.check(std::abs(b_var - 15.9) <= 0.2, "variational beta_crit = 15.9 +- 0.2");
  auto cfg = threshold_config(3);
  const auto b = cli::bisect_localization(cfg, 0.5 * b_var, 2.0 * b_var);
  o.check(b.value && *b.value >= 17.5 && *b.value <= 20.5, "gradient-flow beta_crit in [17.5, 20.5]");
  o.check(b.value && *b.value > b_var, "gradient-flow beta_crit above variational");
  o.detail << "variational " << b_var << ", gradient flow " << b.value.value_or(NAN);
}

void ac8(Outcome& o) {
  const RadialGrid g(3, cli::default_radius(3), cli::default_points(3));
  for (double beta : {-1.0, -5.0}) {
    const auto r = gradflow::ground_state(ModelParams{1.0, beta, 0.5, 3}, g, gradflow::FlowConfig{});
    const bool ok = r.outcome == gradflow::Outcome::no_ground_state || r.outcome == gradflow::Outcome::collapse_detected;
    o.check(ok, "no ground state at beta = " + std::to_string(beta));
    o.detail << "beta " << beta << ": " << gradflow::to_string(r.outcome) << " (n0 " << density_at_origin(r.fields)
             << "); ";
  }
  // sigma -> 0 along 10^{-3} ... 10^{-10}, where the interaction term dominates.
  for (double beta : {-1.0, -5.0}) {
    const ModelParams m{1.0, beta, 0.5, 3};
    variational::ScalingProbe p;
    p.delta = 2.5;
    double prev = INFINITY;
    bool monotone = true;
    for (int k = 6; k <= 20; ++k) {
      p.sigma = std::pow(10.0, -0.5 * k);
      const double e = variational::scaling_energy(m, p).e_tot;
      monotone = monotone && e < prev;
      prev = e;
    }
    o.check(monotone, "scaling energy decreasing as sigma -> 0 at beta = " + std::to_string(beta));
    o.detail << "E(sigma = 1e-10) = " << prev << "; ";
  }
}

void ac9(Outcome& o) {
  cli::RunConfig cfg;
  cfg.model = ModelParams{1.0, 0.0, 0.5, 1};
  cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::vector<double> betas{-10, -6, -4, -2, -1, -0.5, 0.5, 1, 2, 5, 7, 10};
  const auto pts = cli::solve_many(cfg, betas);
  const double quarter = 0.25 * cfg.grid_radius();
  for (const auto& p : pts) {
    o.check(cli::is_localized(cfg, p), "localized at beta = " + std::to_string(p.beta));
  }
  auto at = [&](double beta) -> const cli::PointResult& {
    for (const auto& p : pts) {
      if (p.beta == beta) return p;
    }
    throw std::logic_error("beta not sampled");
  };
  o.check(at(-10).sigma < at(10).sigma, "sigma_attr < sigma_rep at |beta| = 10");

  // Attractive branch: n(x0) increases with |beta| and tracks the contact limit.
  const std::vector<double> attractive{-0.5, -1, -2, -4, -6, -10};
  double prev_n = 0.0;
  double prev_delta = 0.0;
  bool increasing = true;
  bool same_trend = true;
  double worst_ratio_dev = 0.0;
  for (double beta : attractive) {
    const double n0 = density_at_origin(at(beta).report.fields);
    const double psi = delta1d::psi_at_impurity(beta, 0.5);
    const double n_delta = psi * psi;
    increasing = increasing && n0 > prev_n;
    same_trend = same_trend && n_delta > prev_delta;
    if (std::abs(beta) * 0.5 >= 2.0) worst_ratio_dev = std::max(worst_ratio_dev, std::abs(n0 / n_delta - 1.0));
    o.detail << "n0(" << beta << ") = " << n0 << " vs " << n_delta << "; ";
    prev_n = n0;
    prev_delta = n_delta;
  }
  o.check(increasing, "n(x0) increasing in |beta| (attractive)");
  o.check(same_trend, "same monotone trend as the contact limit");
  o.check(worst_ratio_dev < 0.3, "n(x0) within 30% of the contact limit at |beta| gamma >= 2");

  // R_fit from near +1 to near -1 along the repulsive branch.
  const std::vector<double> repulsive{0.5, 1, 2, 5, 7, 10};
  std::vector<double> rf;
  for (double beta : repulsive) rf.push_back(at(beta).r_fit);
  bool trend = true;
  for (std::size_t i = 1; i < rf.size(); ++i) trend = trend && rf[i] <= rf[i - 1] + 0.05;
  o.check(rf.front() > 0.9, "R_fit near +1 at small beta");
  o.check(rf.back() < -0.9, "R_fit near -1 at large beta");
  o.check(trend, "R_fit decreasing in trend");
  o.detail << "R_fit:";
  for (double r : rf) o.detail << ' ' << r;
  o.detail << "; sigma(-10) = " << at(-10).sigma << ", sigma(10) = " << at(10).sigma << ", R/4 = " << quarter;
}

void ac10(Outcome& o) {
  using gradflow::Outcome;
  gradflow::FlowConfig c;

  // Reference runs: energy monotone, norms, residuals.
  struct Ref {
    ModelParams m;
    double radius;
    std::size_t points;
  };
  std::size_t violations = 0;
  double worst_residual = 0.0;
  double worst_norm = 0.0;
  for (const Ref& ref : {Ref{{1.0, 5.0, 0.5, 1}, 64.0, 4096}, Ref{{1.0, -6.0, 0.5, 2}, 64.0, 4096},
                         Ref{{1.0, 25.0, 0.5, 3}, 32.0, 4096}}) {
    const RadialGrid g(ref.m.dim, ref.radius, ref.points);
    const auto r = gradflow::ground_state(ref.m, g, c);
    o.check(r.outcome == Outcome::converged, "reference run converged (d = " + std::to_string(ref.m.dim) + ")");
    violations += r.violations;
    worst_residual = std::max({worst_residual, r.residuals.psi, r.residuals.chi});
    worst_norm = std::max({worst_norm, std::abs(g.norm2(r.fields.chi) - 1.0),
                           std::abs(g.norm2(r.fields.psi) / g.volume() - 1.0)});
  }
  // Fixed-step flow: every step keeps both norms and lowers the energy.
  {
    const ModelParams m{1.0, 5.0, 0.5, 1};
    const RadialGrid g(1, 64.0, 4096);
    auto f = gradflow::initialize(m, g, 4.0);
    double e = energy_breakdown(m, g, f).e_tot;
    for (int k = 0; k < 10000; ++k) {
      f = gradflow::flow_step(m, g, f, c);
      const double next = energy_breakdown(m, g, f).e_tot;
      if (next > e + c.monotonicity_tol * std::abs(e)) ++violations;
      e = next;
      worst_norm = std::max({worst_norm, std::abs(g.norm2(f.chi) - 1.0), std::abs(g.norm2(f.psi) / g.volume() - 1.0)});
    }
  }
  o.check(violations == 0, "zero monotonicity violations");
  o.check(worst_norm < 1e-10, "norms preserved to 1e-10");
  o.check(worst_residual < 1e-6, "stationary residuals < 1e-6");

  std::vector<double> e;
  for (std::size_t n : {513u, 1025u, 2049u}) {
    const RadialGrid g(1, 32.0, n);
    e.push_back(gradflow::ground_state(ModelParams{1.0, 5.0, 0.5, 1}, g, c).energies.e_tot);
  }
  const double order = std::log2((e[1] - e[0]) / (e[2] - e[1]));
  o.check(order >= 1.8, "grid convergence order >= 1.8");

  const double radius = 8.0;
  const RadialGrid g(1, radius, 2049);
  const auto box = gradflow::ground_state(ModelParams{1.0, 0.0, 0.5, 1}, g, c);
  const double expected = pi * pi / (8.0 * radius * radius);
  const double box_err = std::abs(box.energies.epsilon / expected - 1.0);
  o.check(box.outcome == Outcome::converged && box_err < 1e-3, "box eigenvalue within 0.1%");

  o.detail << "violations " << violations << ", norm dev " << worst_norm << ", residual " << worst_residual
           << ", order " << order << ", box rel err " << box_err;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "variational critical values", 1.0, ac1},
      {2, "1d asymptotic width law", 1.0, ac2},
      {3, "closed forms vs quadrature oracles", 30.0, ac3},
      {4, "point-impurity exactness", 1.0, ac4},
      {5, "2d self-trapping threshold", 300.0, ac5},
      {6, "2d collapse", 300.0, ac6},
      {7, "3d thresholds", 600.0, ac7},
      {8, "3d attractive regime", 120.0, ac8},
      {9, "1d phenomenology", 300.0, ac9},
      {10, "solver correctness", 120.0, ac10},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(seconds < c.time_limit, "runtime under " + std::to_string(c.time_limit) + " s");
    std::printf("AC%-2d %s  %-36s %8.2fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, seconds, (o.detail.str() + o.failed).c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
