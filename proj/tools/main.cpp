#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "run.hpp"

namespace {

int fail(const std::string& kind, const std::string& message, int status) {
  nlohmann::json rec = {{"error", {{"kind", kind}, {"message", message}, {"status", status}}}};
  std::cerr << rec.dump() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace selftrap;
  cli::RunConfig cfg;
  CLI::App app{"Self-trapped impurity in a condensate: variational, delta-impurity and gradient-flow solvers"};
  app.set_config("--config", "", "Flat key = value file; command-line flags override it");

  std::string mode = "groundstate";
  std::string format = "csv";
  std::string beta_range;
  std::string crit_bracket;
  std::string collapse_bracket;
  double radius = 0.0;
  std::size_t points = 0;
  std::size_t jobs = 1;

  app.add_option("--mode", mode, "variational-scan | tf | delta1d | groundstate | sweep | thresholds")
      ->capture_default_str();
  app.add_option("--dim", cfg.model.dim, "Spatial dimension (1, 2, 3)")->capture_default_str();
  app.add_option("--alpha", cfg.model.alpha, "Boson to impurity mass ratio")->capture_default_str();
  app.add_option("--beta", cfg.model.beta, "Impurity to boson coupling ratio")->capture_default_str();
  app.add_option("--gamma", cfg.model.gamma, "Mean spacing over healing length")->capture_default_str();
  app.add_option("--beta-range", beta_range, "a:b:n, inclusive, n points");
  app.add_option("--radius", radius, "Box radius in healing lengths (default by dimension)");
  app.add_option("--points", points, "Radial grid points (default by dimension)");
  app.add_option("--tau", cfg.flow.time_step, "Initial flow time step")->capture_default_str();
  app.add_option("--tol", cfg.flow.field_tol, "Field change tolerance per step")->capture_default_str();
  app.add_option("--energy-tol", cfg.flow.energy_tol, "Relative energy change tolerance per step")
      ->capture_default_str();
  app.add_option("--max-steps", cfg.flow.max_steps, "Flow step limit per seed")->capture_default_str();
  app.add_option("--seed-widths", cfg.flow.seed_widths, "Gaussian seed widths (default max(1, 4h) and R/8)");
  app.add_flag("--dirichlet-condensate", "Condensate vanishes at the wall instead of zero flux");
  app.add_flag("--continuation", cfg.continuation, "Sweep sequentially, warm-starting from the previous beta");
  app.add_option("--crit-range", crit_bracket, "thresholds: a:b bracket for the localization onset");
  app.add_option("--collapse-range", collapse_bracket, "thresholds: a:b bracket for the collapse onset");
  app.add_option("--resolution", cfg.resolution, "thresholds: bisection resolution in beta")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads for sweeps")->envname("SELFTRAP_JOBS")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_option("--trace", cfg.trace, "groundstate: convergence trace CSV");
  app.add_option("--fields-out", cfg.fields_out, "groundstate: r, psi, chi profile CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    cfg.mode = cli::parse_mode(mode);
    cfg.format = cli::parse_format(format);
    if (!beta_range.empty()) {
      cfg.beta_range = cli::BetaRange::parse(beta_range);
      cfg.has_beta_range = true;
    }
    if (!crit_bracket.empty()) cfg.crit_bracket = cli::BetaRange::parse(crit_bracket);
    if (!collapse_bracket.empty()) cfg.collapse_bracket = cli::BetaRange::parse(collapse_bracket);
    if (app.count("--radius")) cfg.radius = radius;
    if (app.count("--points")) cfg.points = points;
    if (app.count("--dirichlet-condensate")) cfg.flow.condensate_wall = gradflow::Wall::dirichlet;
    cfg.jobs = jobs;
    cfg.validate();
  } catch (const std::exception& e) {
    return fail("config", e.what(), 2);
  }

  cli::RunResult result;
  try {
    result = cli::run(cfg);
  } catch (const cli::RunError& e) {
    return fail(e.kind, e.what(), e.status);
  } catch (const std::invalid_argument& e) {
    return fail("config", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("solver", e.what(), 1);
  }

  const std::string text =
      cfg.format == cli::Format::csv ? cli::to_csv(result.table) : cli::to_json(cfg, result.table).dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os || !(os << text)) return fail("io", "cannot write " + cfg.out, 4);
  }
  if (result.status != 0) return fail("max_steps_exceeded", result.warning.value_or(""), result.status);
  return 0;
}
