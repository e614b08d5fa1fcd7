#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "selftrap/core.hpp"
#include "selftrap/gradflow.hpp"

namespace selftrap::cli {

enum class Mode { variational_scan, tf, delta1d, groundstate, sweep, thresholds };
enum class Format { csv, json };

Mode parse_mode(const std::string& s);
const char* to_string(Mode m);
Format parse_format(const std::string& s);

struct BetaRange {
  double start = 0.0;
  double end = 0.0;
  std::size_t count = 1;

  /// "a:b:n" (n >= 1) or "a:b" (n = 2). Throws std::invalid_argument.
  static BetaRange parse(const std::string& s);
  std::vector<double> values() const;
};

struct RunConfig {
  Mode mode = Mode::groundstate;
  ModelParams model;
  std::optional<double> radius;        // default depends on dimension
  std::optional<std::size_t> points;
  gradflow::FlowConfig flow;
  BetaRange beta_range;
  bool has_beta_range = false;
  std::optional<BetaRange> crit_bracket;      // thresholds: localization onset
  std::optional<BetaRange> collapse_bracket;  // thresholds: collapse onset
  double resolution = 0.05;
  bool continuation = false;
  std::size_t jobs = 1;
  std::string out;                     // empty: stdout
  std::string trace;                   // convergence trace CSV path
  std::string fields_out;              // groundstate: profile CSV path
  Format format = Format::csv;

  double grid_radius() const;
  std::size_t grid_points() const;
  void validate() const;
};

/// Default radial grids: 1d R = 256, n = 8192; 2d R = 64, n = 4096;
/// 3d R = 32, n = 4096.
double default_radius(int dim);
std::size_t default_points(int dim);

/// Error that maps to a nonzero exit status and a machine-readable record.
struct RunError : std::runtime_error {
  std::string kind;
  int status;
  RunError(std::string k, const std::string& msg, int code)
      : std::runtime_error(msg), kind(std::move(k)), status(code) {}
};

/// A table of output rows; each row holds the same keys in column order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct RunResult {
  Table table;
  int status = 0;                        // 0, or 3 when a solve hit max_steps
  std::optional<std::string> warning;    // attached to the error record
};

/// Ground-state summary for one beta.
struct PointResult {
  double beta = 0.0;
  gradflow::SolveReport report;
  double sigma = 0.0;
  double lambda = 0.0;
  double r_fit = 0.0;
};

PointResult solve_point(const RunConfig& cfg, double beta, const FieldPair* warm = nullptr);

/// Solves every beta; in parallel over cfg.jobs workers, or sequentially
/// with warm starts when cfg.continuation is set. Results keep input order.
std::vector<PointResult> solve_many(const RunConfig& cfg, const std::vector<double>& betas);

/// Bisection of the smallest beta in [lo, hi] at which `pred` holds, assuming
/// pred(lo) is false and pred(hi) is true. Returns nullopt if not bracketed.
struct Bisection {
  std::optional<double> value;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t evaluations = 0;
};

/// Localization onset: converged with fitted Gaussian width < R/4.
bool is_localized(const RunConfig& cfg, const PointResult& p);
Bisection bisect_localization(const RunConfig& cfg, double lo, double hi);
/// Collapse onset: the solver reports collapse or no ground state. lo lies
/// on the collapsing side (more attractive).
Bisection bisect_collapse(const RunConfig& cfg, double lo, double hi);

RunResult run(const RunConfig& cfg);

nlohmann::json config_echo(const RunConfig& cfg);
std::string to_csv(const Table& t);
nlohmann::json to_json(const RunConfig& cfg, const Table& t);

}  // namespace selftrap::cli
