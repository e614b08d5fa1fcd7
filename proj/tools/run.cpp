#include "run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "selftrap/delta1d.hpp"
#include "selftrap/fitting.hpp"
#include "selftrap/variational.hpp"

namespace selftrap::cli {

using nlohmann::json;

Mode parse_mode(const std::string& s) {
  if (s == "variational-scan") return Mode::variational_scan;
  if (s == "tf") return Mode::tf;
  if (s == "delta1d") return Mode::delta1d;
  if (s == "groundstate") return Mode::groundstate;
  if (s == "sweep") return Mode::sweep;
  if (s == "thresholds") return Mode::thresholds;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::variational_scan:
      return "variational-scan";
    case Mode::tf:
      return "tf";
    case Mode::delta1d:
      return "delta1d";
    case Mode::groundstate:
      return "groundstate";
    case Mode::sweep:
      return "sweep";
    default:
      return "thresholds";
  }
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("unknown output format '" + s + "'");
}

BetaRange BetaRange::parse(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 2 && parts.size() != 3) throw std::invalid_argument("range must be a:b or a:b:n, got '" + s + "'");
  BetaRange r;
  try {
    std::size_t used = 0;
    r.start = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    r.end = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    r.count = 2;
    if (parts.size() == 3) {
      const long n = std::stol(parts[2], &used);
      if (used != parts[2].size() || n < 1) throw std::invalid_argument(parts[2]);
      r.count = static_cast<std::size_t>(n);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed range '" + s + "'");
  }
  if (!std::isfinite(r.start) || !std::isfinite(r.end)) throw std::invalid_argument("range bounds must be finite");
  if (r.count == 1 && r.start != r.end) throw std::invalid_argument("a range with one point needs a == b");
  return r;
}

std::vector<double> BetaRange::values() const {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = count == 1 ? start : start + (end - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return v;
}

double default_radius(int dim) {
  validate_dimension(dim);
  static constexpr double radii[] = {256.0, 64.0, 32.0};
  return radii[dim - 1];
}

std::size_t default_points(int dim) {
  validate_dimension(dim);
  return dim == 1 ? 8192 : 4096;
}

double RunConfig::grid_radius() const { return radius.value_or(default_radius(model.dim)); }
std::size_t RunConfig::grid_points() const { return points.value_or(default_points(model.dim)); }

void RunConfig::validate() const {
  model.validate();
  flow.validate();
  if (!(grid_radius() > 0.0)) throw std::invalid_argument("radius must be positive");
  if (grid_points() < 16) throw std::invalid_argument("points must be at least 16");
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (jobs == 0) throw std::invalid_argument("jobs must be at least 1");
  const bool needs_range = mode == Mode::variational_scan || mode == Mode::tf || mode == Mode::delta1d ||
                           mode == Mode::sweep;
  if (needs_range && !has_beta_range) {
    throw std::invalid_argument(std::string("mode ") + to_string(mode) + " needs --beta-range");
  }
}

PointResult solve_point(const RunConfig& cfg, double beta, const FieldPair* warm) {
  ModelParams m = cfg.model;
  m.beta = beta;
  const RadialGrid grid(m.dim, cfg.grid_radius(), cfg.grid_points());
  PointResult p;
  p.beta = beta;
  p.report = gradflow::ground_state(m, grid, cfg.flow, warm);
  const double norm = grid.norm2(p.report.fields.chi);
  if (std::abs(norm - 1.0) < 1e-6) {
    const fitting::FitResult fit = fitting::r_fit(grid, p.report.fields.chi);
    p.sigma = fit.sigma;
    p.lambda = fit.lambda;
    p.r_fit = fit.r_fit;
  } else {
    p.sigma = p.lambda = p.r_fit = std::nan("");
  }
  return p;
}

std::vector<PointResult> solve_many(const RunConfig& cfg, const std::vector<double>& betas) {
  std::vector<PointResult> out(betas.size());
  if (cfg.continuation) {
    const FieldPair* warm = nullptr;
    for (std::size_t i = 0; i < betas.size(); ++i) {
      out[i] = solve_point(cfg, betas[i], warm);
      warm = out[i].report.outcome == gradflow::Outcome::converged ? &out[i].report.fields : nullptr;
    }
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(betas.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < betas.size(); i = next++) {
      try {
        out[i] = solve_point(cfg, betas[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(cfg.jobs, std::max<std::size_t>(1, betas.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

bool is_localized(const RunConfig& cfg, const PointResult& p) {
  return p.report.outcome == gradflow::Outcome::converged && p.sigma < 0.25 * cfg.grid_radius();
}

namespace {

bool is_collapsed(const PointResult& p) {
  return p.report.outcome == gradflow::Outcome::collapse_detected ||
         p.report.outcome == gradflow::Outcome::no_ground_state;
}

// Boundary between pred(lo) and pred(hi), which must differ.
Bisection bisect(double lo, double hi, double resolution, const std::function<bool(double)>& pred) {
  Bisection b;
  b.lo = lo;
  b.hi = hi;
  const bool at_lo = pred(lo);
  const bool at_hi = pred(hi);
  b.evaluations = 2;
  if (at_lo == at_hi) return b;
  while (b.hi - b.lo > resolution) {
    const double mid = 0.5 * (b.lo + b.hi);
    ++b.evaluations;
    (pred(mid) == at_lo ? b.lo : b.hi) = mid;
  }
  b.value = 0.5 * (b.lo + b.hi);
  return b;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> provenance_columns() { return {"alpha", "beta", "gamma", "dim", "radius", "points", "tau"}; }

std::vector<json> provenance(const RunConfig& cfg, double beta) {
  return {cfg.model.alpha, beta, cfg.model.gamma, cfg.model.dim, cfg.grid_radius(), cfg.grid_points(),
          cfg.flow.time_step};
}

Table solve_table(const RunConfig& cfg, const std::vector<PointResult>& points) {
  Table t;
  t.columns = provenance_columns();
  for (const char* c : {"outcome", "sigma", "lambda", "r_fit", "n0", "epsilon", "e_tot", "e_bec", "e_int", "e_kin",
                        "mu", "steps", "flow_time", "violations", "rejected"}) {
    t.columns.emplace_back(c);
  }
  for (const PointResult& p : points) {
    auto row = provenance(cfg, p.beta);
    const auto& r = p.report;
    const auto& e = r.energies;
    for (json v : {json(gradflow::to_string(r.outcome)), number_or_null(p.sigma), number_or_null(p.lambda),
                   number_or_null(p.r_fit), number_or_null(density_at_origin(r.fields)), number_or_null(e.epsilon),
                   number_or_null(e.e_tot), number_or_null(e.e_bec), number_or_null(e.e_int),
                   number_or_null(e.e_kin), number_or_null(r.residuals.mu), json(r.steps), json(r.flow_time),
                   json(r.violations), json(r.rejected)}) {
      row.push_back(std::move(v));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void check_max_steps(const std::vector<PointResult>& points, RunResult& result) {
  for (const PointResult& p : points) {
    if (p.report.outcome == gradflow::Outcome::max_steps_exceeded) {
      result.status = 3;
      char buf[128];
      std::snprintf(buf, sizeof buf, "max steps exceeded at beta = %.17g", p.beta);
      result.warning = buf;
      return;
    }
  }
}

void write_fields(const RunConfig& cfg, const PointResult& p) {
  std::ofstream os(cfg.fields_out);
  if (!os) throw RunError("io", "cannot open " + cfg.fields_out, 4);
  const RadialGrid grid(cfg.model.dim, cfg.grid_radius(), cfg.grid_points());
  os << "r,psi,chi\n";
  char buf[96];
  const auto r = grid.nodes();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r[i], p.report.fields.psi[i], p.report.fields.chi[i]);
    os << buf;
  }
}

Table variational_table(const RunConfig& cfg) {
  Table t;
  t.columns = provenance_columns();
  for (const char* c : {"zeta", "sigma_min", "f_min", "stable"}) t.columns.emplace_back(c);
  for (double beta : cfg.beta_range.values()) {
    ModelParams m = cfg.model;
    m.beta = beta;
    const auto v = variational::find_selftrap(m);
    auto row = provenance(cfg, beta);
    row.push_back(v.zeta);
    row.push_back(v.sigma_min ? json(*v.sigma_min) : json(nullptr));
    row.push_back(v.f_value ? json(*v.f_value) : json(nullptr));
    row.push_back(v.stable);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table tf_table(const RunConfig& cfg) {
  Table t;
  t.columns = provenance_columns();
  for (const char* c : {"zeta", "lambda", "epsilon_prime"}) t.columns.emplace_back(c);
  for (double beta : cfg.beta_range.values()) {
    ModelParams m = cfg.model;
    m.beta = beta;
    auto row = provenance(cfg, beta);
    if (beta == 0.0) {
      row.insert(row.end(), {json(0.0), json(nullptr), json(0.0)});
    } else {
      const auto s = variational::tf_sech(m);
      row.insert(row.end(), {json(s.zeta), json(s.lambda), json(s.epsilon_prime)});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table delta_table(const RunConfig& cfg) {
  if (cfg.model.dim != 1) throw std::invalid_argument("delta1d mode is one-dimensional; use --dim 1");
  Table t;
  t.columns = provenance_columns();
  for (const char* c : {"psi0", "offset", "e_def", "e_weak"}) t.columns.emplace_back(c);
  const double g = cfg.model.gamma;
  for (double beta : cfg.beta_range.values()) {
    auto row = provenance(cfg, beta);
    row.push_back(delta1d::psi_at_impurity(beta, g));
    row.push_back(beta == 0.0 ? json(nullptr) : json(delta1d::delta_solution(beta, g).c));
    row.push_back(delta1d::deformation_energy(beta, g));
    row.push_back(-0.5 * beta * beta * g + 0.0);  // no negative zero
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table threshold_table(const RunConfig& cfg) {
  Table t;
  t.columns = provenance_columns();
  for (const char* c : {"quantity", "value", "bracket_lo", "bracket_hi", "resolution", "evaluations", "variational"}) {
    t.columns.emplace_back(c);
  }
  const int d = cfg.model.dim;
  const double b_var = variational::critical_beta(d, cfg.model.alpha, cfg.model.gamma);

  auto add = [&](const char* name, const Bisection& b, json variational) {
    auto row = provenance(cfg, b.value.value_or(std::nan("")));
    row[1] = b.value ? json(*b.value) : json(nullptr);
    row.insert(row.end(), {json(name), b.value ? json(*b.value) : json(nullptr), json(b.lo), json(b.hi),
                           json(cfg.resolution), json(b.evaluations), std::move(variational)});
    t.rows.push_back(std::move(row));
  };

  if (d > 1) {
    const BetaRange crit = cfg.crit_bracket.value_or(BetaRange{0.5 * b_var, 2.0 * b_var, 2});
    add("beta_crit", bisect_localization(cfg, crit.start, crit.end), json(b_var));
    const BetaRange col = cfg.collapse_bracket.value_or(BetaRange{-4.0 * b_var, -0.5 * b_var, 2});
    add("beta_star", bisect_collapse(cfg, col.start, col.end), json(nullptr));
  } else {
    // Every beta != 0 localizes in 1d; bisect only inside explicit brackets.
    if (cfg.crit_bracket) add("beta_crit", bisect_localization(cfg, cfg.crit_bracket->start, cfg.crit_bracket->end), json(0.0));
    if (cfg.collapse_bracket) {
      add("beta_star", bisect_collapse(cfg, cfg.collapse_bracket->start, cfg.collapse_bracket->end), json(nullptr));
    }
  }
  return t;
}

}  // namespace

Bisection bisect_localization(const RunConfig& cfg, double lo, double hi) {
  return bisect(lo, hi, cfg.resolution, [&](double beta) { return is_localized(cfg, solve_point(cfg, beta)); });
}

Bisection bisect_collapse(const RunConfig& cfg, double lo, double hi) {
  return bisect(lo, hi, cfg.resolution, [&](double beta) { return is_collapsed(solve_point(cfg, beta)); });
}

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  RunResult result;
  switch (cfg.mode) {
    case Mode::variational_scan:
      result.table = variational_table(cfg);
      break;
    case Mode::tf:
      result.table = tf_table(cfg);
      break;
    case Mode::delta1d:
      result.table = delta_table(cfg);
      break;
    case Mode::groundstate: {
      RunConfig one = cfg;
      std::ofstream trace;
      if (!cfg.trace.empty()) {
        trace.open(cfg.trace);
        if (!trace) throw RunError("io", "cannot open " + cfg.trace, 4);
        trace << "seed,step,flow_time,tau,e_tot,field_change,psi0_sq\n";
        trace.precision(17);
        one.flow.trace = &trace;
      }
      const std::vector<PointResult> points{solve_point(one, cfg.model.beta)};
      if (!cfg.fields_out.empty()) write_fields(cfg, points.front());
      result.table = solve_table(cfg, points);
      check_max_steps(points, result);
      break;
    }
    case Mode::sweep: {
      const auto points = solve_many(cfg, cfg.beta_range.values());
      result.table = solve_table(cfg, points);
      check_max_steps(points, result);
      break;
    }
    case Mode::thresholds:
      result.table = threshold_table(cfg);
      break;
  }
  return result;
}

json config_echo(const RunConfig& cfg) {
  json j;
  j["mode"] = to_string(cfg.mode);
  j["alpha"] = cfg.model.alpha;
  j["beta"] = cfg.model.beta;
  j["gamma"] = cfg.model.gamma;
  j["dim"] = cfg.model.dim;
  j["radius"] = cfg.grid_radius();
  j["points"] = cfg.grid_points();
  j["tau"] = cfg.flow.time_step;
  j["tol"] = cfg.flow.field_tol;
  j["energy_tol"] = cfg.flow.energy_tol;
  j["max_steps"] = cfg.flow.max_steps;
  j["continuation"] = cfg.continuation;
  j["resolution"] = cfg.resolution;
  if (cfg.has_beta_range) {
    j["beta_range"] = {{"start", cfg.beta_range.start}, {"end", cfg.beta_range.end}, {"count", cfg.beta_range.count}};
  }
  return j;
}

namespace {

std::string csv_field(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  if (v.is_number()) return v.dump();
  std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += '\n';
  }
  return out;
}

json to_json(const RunConfig& cfg, const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return {{"config", config_echo(cfg)}, {"rows", std::move(rows)}};
}

}  // namespace selftrap::cli
