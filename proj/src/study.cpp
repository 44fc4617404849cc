#include "fracvisco/study.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "fracvisco/kernels.hpp"
#include "fracvisco/mesh.hpp"

#ifndef FRACVISCO_GIT_DESCRIBE
#define FRACVISCO_GIT_DESCRIBE "unknown"
#endif

namespace fracvisco {

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

std::string format_error(double e, int precision) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(precision - 1) << e;
  return os.str();
}

double rounded(double e, int precision) { return std::strtod(format_error(e, precision).c_str(), nullptr); }

std::string format_rate(const std::optional<double>& rate, bool floor) {
  if (floor) return "floor";
  if (!rate) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *rate);
  return buf;
}

std::string csv_header(const StudyConfig& config, std::string_view what) {
  std::ostringstream os;
  os << "# fracvisco " << git_describe() << '\n';
  os << "# " << config.describe() << '\n';
  os << "# " << what << '\n';
  if (config.timing) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# wall_clock " << buf << '\n';
  }
  return os.str();
}

double norm_value(const ErrorNorms& e, Norm norm) {
  switch (norm) {
    case Norm::l2: return e.l2;
    case Norm::h1: return e.h1;
    case Norm::energy: return e.energy;
  }
  return 0.0;
}

void log_cell(const CellResult& r) {
  std::fprintf(stderr, "  h=1/%zu N=%zu dofs=%zu  L2=%.4e H1=%.4e E=%.4e  cg=%zu  %.2fs\n", r.cells,
               r.steps, r.dofs, r.errors.l2, r.errors.h1, r.errors.energy, r.cg_iterations,
               r.runtime_s);
}

CellResult run_logged(const StudyConfig& config, std::size_t cells, std::size_t steps) {
  CellResult r = solve_cell(config, cells, steps).result;
  log_cell(r);
  return r;
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::table: return "table";
    case Mode::rates: return "rates";
    case Mode::diagonal: return "diagonal";
    case Mode::single: return "single";
  }
  return "?";
}

const char* to_string(Norm norm) {
  switch (norm) {
    case Norm::l2: return "l2";
    case Norm::h1: return "h1";
    case Norm::energy: return "energy";
  }
  return "?";
}

const char* git_describe() { return FRACVISCO_GIT_DESCRIBE; }

void StudyConfig::validate() const {
  if (example == CaseName::custom) throw ConfigError("example must be example1 or example2");
  try {
    material().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T must be positive");
  if (degree != 1 && degree != 2) throw ConfigError("degree must be 1 or 2");
  if (!(cg_tol > 0.0 && cg_tol < 1.0)) throw ConfigError("cg-tol must lie in (0, 1)");
  if (h_list.empty()) throw ConfigError("h-list must not be empty");
  if (mode != Mode::diagonal && dt_list.empty()) throw ConfigError("dt-list must not be empty");
  for (auto m : h_list)
    if (m == 0) throw ConfigError("h-list entries must be positive");
  for (auto n : dt_list)
    if (n == 0) throw ConfigError("dt-list entries must be positive");
  if (mode == Mode::rates && dt_list.size() != 1)
    throw ConfigError("rates mode needs exactly one dt-list entry");
  if ((mode == Mode::rates || mode == Mode::diagonal) && h_list.size() < 2)
    throw ConfigError("a refinement study needs at least two h-list entries");
  if (precision < 2 || precision > 17) throw ConfigError("precision must lie in [2, 17]");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if ((!dump_steps.empty() || !dump_mesh.empty()) && mode != Mode::single)
    throw ConfigError("--dump-steps and --dump-mesh need --mode single");
  if (out.empty()) throw ConfigError("out must not be empty");
}

Material StudyConfig::material() const {
  Material m;
  m.rho = rho;
  m.lambda_hat = lambda_hat;
  m.mu_hat = mu_hat;
  m.alpha = alpha;
  return m;
}

SolverOptions StudyConfig::solver_options() const {
  SolverOptions opts;
  const Exec exec = serial ? Exec::serial : Exec::parallel;
  opts.cg.tol = cg_tol;
  opts.cg.jacobi = true;
  opts.cg.exec = exec;
  opts.assembly.exec = exec;
  return opts;
}

std::string StudyConfig::describe() const {
  std::ostringstream os;
  os << "example=" << to_string(example) << " alpha=" << shortest(alpha) << " T=" << shortest(T)
     << " degree=" << degree << " h_list=" << join(h_list);
  if (mode != Mode::diagonal) os << " dt_list=" << join(dt_list);
  os << " rho=" << shortest(rho) << " lambda_hat=" << shortest(lambda_hat)
     << " mu_hat=" << shortest(mu_hat) << " cg_tol=" << shortest(cg_tol)
     << " mode=" << to_string(mode) << " exec=" << (serial ? "serial" : "parallel");
  return os.str();
}

StudyConfig parse_config(std::span<const std::string> args) {
  StudyConfig cfg;
  CLI::App app{"Fractional-order viscoelasticity FEM convergence studies", "fracvisco"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "TOML/INI file with defaults for any flag");

  const std::map<std::string, CaseName> examples{{"example1", CaseName::example1},
                                                 {"example2", CaseName::example2}};
  const std::map<std::string, Mode> modes{{"table", Mode::table},
                                          {"rates", Mode::rates},
                                          {"diagonal", Mode::diagonal},
                                          {"single", Mode::single}};
  app.add_option("--example", cfg.example, "Manufactured case")
      ->transform(CLI::CheckedTransformer(examples, CLI::ignore_case));
  app.add_option("--alpha", cfg.alpha, "Fractional order in (0, 1)");
  app.add_option("--T", cfg.T, "Final time");
  app.add_option("--degree", cfg.degree, "Lagrange degree (1 or 2)");
  app.add_option("--h-list", cfg.h_list, "Comma-separated cells per side (h = 1/m)")
      ->delimiter(',');
  app.add_option("--dt-list", cfg.dt_list, "Comma-separated step counts (dt = T/N)")
      ->delimiter(',');
  app.add_option("--rho", cfg.rho, "Density");
  app.add_option("--lambda-hat", cfg.lambda_hat, "Relaxation tensor lambda");
  app.add_option("--mu-hat", cfg.mu_hat, "Relaxation tensor mu");
  app.add_option("--cg-tol", cfg.cg_tol, "Relative CG tolerance");
  app.add_option("--mode", cfg.mode, "table | rates | diagonal | single")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_option("--out", cfg.out, "Output file prefix");
  app.add_option("--threads", cfg.threads, "OpenMP threads (0 keeps the runtime default)");
  app.add_flag("--serial", cfg.serial, "Use the serial reference kernels");
  app.add_flag("--check", cfg.check, "Check the measured rates; exit 3 on failure");
  app.add_option("--precision", cfg.precision, "Significant digits of printed errors");
  bool no_timing = false;
  app.add_flag("--no-timing", no_timing, "Omit wall-clock header and runtime column");
  app.add_option("--dump-steps", cfg.dump_steps, "Write every W^n as text (single mode)");
  app.add_option("--dump-mesh", cfg.dump_mesh, "Write the mesh as text (single mode)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  cfg.timing = !no_timing;
  cfg.validate();
  return cfg;
}

CellError::CellError(std::size_t cells, std::size_t steps, const std::string& what)
    : std::runtime_error("cell h=1/" + std::to_string(cells) + " N=" + std::to_string(steps) + ": " +
                         what),
      cells_(cells),
      steps_(steps) {}

ManufacturedCase study_case(const StudyConfig& config) {
  const Material material = config.material();
  switch (config.example) {
    case CaseName::example1: return example1(material);
    case CaseName::example2: return example2(material);
    case CaseName::custom: break;
  }
  throw ConfigError("no shipped case for 'custom'");
}

CellRun solve_cell(const StudyConfig& config, std::size_t cells, std::size_t steps) {
  const auto start = std::chrono::steady_clock::now();
  const ManufacturedCase mc = study_case(config);
  auto mesh = std::make_shared<const Mesh>(build_unit_square(cells));
  auto space = std::make_shared<const FeSpace>(
      mesh, config.degree, std::set<Side>(all_sides.begin(), all_sides.end()));

  ProblemSetup setup;
  setup.space = space;
  setup.material = mc.material;
  setup.T = config.T;
  setup.N = steps;
  setup.f = [mc](const Point& p, double t) { return forcing(mc, p, t); };
  setup.w0_grad = [mc](const Point& p) { return exact_gradient(mc, p, 0.0); };

  const SolverOptions opts = config.solver_options();
  CellRun run;
  try {
    run.record = fracvisco::run(setup, opts);
  } catch (const std::runtime_error& e) {
    throw CellError(cells, steps, e.what());
  }
  run.space = space;

  const double T = config.T;
  CellResult& r = run.result;
  r.cells = cells;
  r.steps = steps;
  r.h = 1.0 / static_cast<double>(cells);
  r.dt = T / static_cast<double>(steps);
  r.dofs = space->n_dofs();
  r.errors = error_norms(
      *space, run.record.steps.back(), [&mc, T](const Point& p) { return exact_velocity(mc, p, T); },
      [&mc, T](const Point& p) { return exact_gradient(mc, p, T); }, mc.material, opts.assembly);
  for (const auto& rep : run.record.cg_reports) r.cg_iterations += rep.iterations;
  r.max_residual = run.record.max_checked_residual;
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

double convergence_rate(double e1, double e2, double h1, double h2) {
  return std::log(e1 / e2) / std::log(h1 / h2);
}

std::vector<RateRow> rate_rows(std::span<const CellResult> cells, int precision) {
  std::vector<RateRow> rows;
  rows.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const CellResult& c = cells[i];
    RateRow row;
    row.h = c.h;
    row.dt = c.dt;
    row.err_l2 = rounded(c.errors.l2, precision);
    row.err_h1 = rounded(c.errors.h1, precision);
    row.err_energy = rounded(c.errors.energy, precision);
    row.runtime_s = c.runtime_s;
    if (i > 0) {
      const RateRow& prev = rows.back();
      row.floor_l2 = row.err_l2 <= error_floor && prev.err_l2 <= error_floor;
      row.floor_h1 = row.err_h1 <= error_floor && prev.err_h1 <= error_floor;
      if (!row.floor_l2) row.rate_l2 = convergence_rate(prev.err_l2, row.err_l2, prev.h, row.h);
      if (!row.floor_h1) row.rate_h1 = convergence_rate(prev.err_h1, row.err_h1, prev.h, row.h);
    }
    rows.push_back(row);
  }
  return rows;
}

TableResult run_table(const StudyConfig& config) {
  config.validate();
  TableResult table;
  table.cells = config.h_list;
  table.steps = config.dt_list;
  for (auto m : table.cells) {
    auto& row = table.results.emplace_back();
    for (auto n : table.steps) row.push_back(run_logged(config, m, n));
  }
  return table;
}

std::vector<RateRow> run_spatial_rates(const StudyConfig& config) {
  config.validate();
  if (config.dt_list.size() != 1) throw ConfigError("rates mode needs exactly one dt-list entry");
  std::vector<CellResult> cells;
  for (auto m : config.h_list) cells.push_back(run_logged(config, m, config.dt_list.front()));
  return rate_rows(cells, config.precision);
}

std::vector<RateRow> run_diagonal(const StudyConfig& config) {
  config.validate();
  std::vector<CellResult> cells;
  for (auto m : config.h_list) cells.push_back(run_logged(config, m, m));
  return rate_rows(cells, config.precision);
}

std::string format_table_csv(const StudyConfig& config, const TableResult& table, Norm norm) {
  std::ostringstream os;
  os << csv_header(config, std::string("final-time ") + to_string(norm) +
                               " errors; rows h, columns dt");
  os << 'h';
  for (auto n : table.steps) os << ",dt=" << shortest(config.T / static_cast<double>(n));
  os << '\n';
  for (std::size_t i = 0; i < table.cells.size(); ++i) {
    os << shortest(1.0 / static_cast<double>(table.cells[i]));
    for (const auto& cell : table.results[i])
      os << ',' << format_error(norm_value(cell.errors, norm), config.precision);
    os << '\n';
  }
  return os.str();
}

std::string format_rates_csv(const StudyConfig& config, std::span<const RateRow> rows) {
  std::ostringstream os;
  os << csv_header(config, std::string(to_string(config.mode)) +
                               " study; rate = log(e1/e2)/log(h1/h2) on the printed errors");
  os << "h,dt,err_l2,err_h1,err_energy,rate_l2,rate_h1";
  if (config.timing) os << ",runtime_s";
  os << '\n';
  for (const auto& r : rows) {
    os << shortest(r.h) << ',' << shortest(r.dt) << ',' << format_error(r.err_l2, config.precision)
       << ',' << format_error(r.err_h1, config.precision) << ','
       << format_error(r.err_energy, config.precision) << ',' << format_rate(r.rate_l2, r.floor_l2)
       << ',' << format_rate(r.rate_h1, r.floor_h1);
    if (config.timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", r.runtime_s);
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string format_plot_data(const StudyConfig& config, std::span<const RateRow> rows, Norm norm) {
  std::ostringstream os;
  os << csv_header(config, std::string(to_string(norm)) + " error against h (log-log)");
  os << "# h error\n";
  for (const auto& r : rows) {
    const double e = norm == Norm::l2 ? r.err_l2 : norm == Norm::h1 ? r.err_h1 : r.err_energy;
    os << shortest(r.h) << ' ' << format_error(e, config.precision) << '\n';
  }
  return os.str();
}

std::vector<std::string> check_table(const StudyConfig&, const TableResult& table) {
  std::vector<std::string> failures;
  if (table.cells.size() < 2 || table.steps.empty()) return failures;
  // Finest dt column.
  const auto j = static_cast<std::size_t>(
      std::max_element(table.steps.begin(), table.steps.end()) - table.steps.begin());
  std::vector<std::size_t> order(table.cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return table.cells[a] < table.cells[b]; });
  for (Norm norm : {Norm::l2, Norm::h1}) {
    for (std::size_t k = 1; k < order.size(); ++k) {
      const double coarse = norm_value(table.results[order[k - 1]][j].errors, norm);
      const double fine = norm_value(table.results[order[k]][j].errors, norm);
      if (!(fine < coarse))
        failures.push_back(std::string(to_string(norm)) + " error does not decrease from h=1/" +
                           std::to_string(table.cells[order[k - 1]]) + " to h=1/" +
                           std::to_string(table.cells[order[k]]));
    }
  }
  return failures;
}

namespace {

void check_window(std::vector<std::string>& failures, const char* what,
                  const std::optional<double>& rate, bool floor, double lo, double hi) {
  if (floor) return;
  if (!rate) {
    failures.push_back(std::string(what) + " rate missing");
    return;
  }
  if (!(*rate >= lo && *rate <= hi)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s rate %.3f outside [%.2f, %.2f]", what, *rate, lo, hi);
    failures.emplace_back(buf);
  }
}

}  // namespace

std::vector<std::string> check_rates(const StudyConfig& config, std::span<const RateRow> rows) {
  std::vector<std::string> failures;
  if (rows.size() < 2) return {"need at least two rows"};
  const double k = config.degree;
  const RateRow& last = rows.back();
  check_window(failures, "H1", last.rate_h1, last.floor_h1, k - 0.10, k + 0.10);
  check_window(failures, "L2", last.rate_l2, last.floor_l2, k + 1.0 - 0.15, k + 1.0 + 0.15);
  return failures;
}

std::vector<std::string> check_diagonal(const StudyConfig& config, std::span<const RateRow> rows) {
  std::vector<std::string> failures;
  if (rows.size() < 2) return {"need at least two rows"};
  const double k = config.degree;
  const double temporal = study_case(config).expected_temporal_order();
  const double expected = std::min(k + 1.0, temporal);
  const RateRow& last = rows.back();
  check_window(failures, "L2", last.rate_l2, last.floor_l2, expected - 0.2, k + 1.0 + 0.2);
  return failures;
}

void write_steps(std::ostream& os, const SolveRecord& record, double dt) {
  char buf[40];
  for (std::size_t n = 0; n < record.steps.size(); ++n) {
    os << n << ' ' << shortest(static_cast<double>(n) * dt);
    for (double v : record.steps[n]) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace fracvisco
