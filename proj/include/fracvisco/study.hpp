#pragma once

// Convergence studies on the unit square for the shipped manufactured cases:
// configuration, sweeps over (h, dt), rate computation and CSV formatting.

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fracvisco/fe_space.hpp"
#include "fracvisco/fem.hpp"
#include "fracvisco/manufactured.hpp"
#include "fracvisco/solver.hpp"

namespace fracvisco {

enum class Mode { table, rates, diagonal, single };

const char* to_string(Mode mode);

struct StudyConfig {
  CaseName example = CaseName::example1;
  double alpha = 0.5;
  double T = 1.0;
  int degree = 1;
  /// Cells per side; h = 1 / m.
  std::vector<std::size_t> h_list = {4, 8, 16, 32};
  /// Time steps; dt = T / N.
  std::vector<std::size_t> dt_list = {512};
  double rho = 1.0;
  double lambda_hat = 0.0;
  double mu_hat = 0.5;
  double cg_tol = 1e-10;
  Mode mode = Mode::table;
  /// Output prefix; files are <out>_<suffix>.
  std::string out = "fracvisco";

  int threads = 0;
  bool serial = false;
  bool check = false;
  /// Significant digits for errors.
  int precision = 4;
  bool timing = true;
  std::string dump_steps;
  std::string dump_mesh;

  /// Throws ConfigError on an invalid combination.
  void validate() const;
  Material material() const;
  SolverOptions solver_options() const;
  /// key=value summary of everything that affects the numbers.
  std::string describe() const;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_config for --help; what() is the usage text.
class HelpRequested : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses command line arguments (without the program name). A TOML/INI file
/// given with --config supplies defaults that flags override; unknown keys in
/// either place are rejected.
StudyConfig parse_config(std::span<const std::string> args);

/// A solve failed inside a sweep.
class CellError : public std::runtime_error {
public:
  CellError(std::size_t cells, std::size_t steps, const std::string& what);
  std::size_t cells() const { return cells_; }
  std::size_t steps() const { return steps_; }

private:
  std::size_t cells_;
  std::size_t steps_;
};

struct CellResult {
  std::size_t cells = 0;
  std::size_t steps = 0;
  double h = 0.0;
  double dt = 0.0;
  std::size_t dofs = 0;
  /// Errors at t = T.
  ErrorNorms errors;
  double runtime_s = 0.0;
  std::size_t cg_iterations = 0;
  double max_residual = 0.0;
};

struct CellRun {
  CellResult result;
  std::shared_ptr<const FeSpace> space;
  SolveRecord record;
};

ManufacturedCase study_case(const StudyConfig& config);

/// One solve on the m x m unit square mesh with N steps.
CellRun solve_cell(const StudyConfig& config, std::size_t cells, std::size_t steps);

struct RateRow {
  double h = 0.0;
  double dt = 0.0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double err_energy = 0.0;
  std::optional<double> rate_l2;
  std::optional<double> rate_h1;
  /// Both errors of the pair are at round-off level; no rate is meaningful.
  bool floor_l2 = false;
  bool floor_h1 = false;
  double runtime_s = 0.0;
};

/// Errors at or below this are treated as exact.
inline constexpr double error_floor = 1e-9;

/// log(e1 / e2) / log(h1 / h2)
double convergence_rate(double e1, double e2, double h1, double h2);

/// Errors rounded to `precision` significant digits, the way they are printed;
/// rates are computed from the rounded values so they can be recomputed from
/// the CSV.
std::vector<RateRow> rate_rows(std::span<const CellResult> cells, int precision);

struct TableResult {
  std::vector<std::size_t> cells;
  std::vector<std::size_t> steps;
  /// results[i][j] for cells[i], steps[j]
  std::vector<std::vector<CellResult>> results;
};

TableResult run_table(const StudyConfig& config);
/// Refinement in h at the single dt in dt_list.
std::vector<RateRow> run_spatial_rates(const StudyConfig& config);
/// Pairs (h, dt) = (1/m, T/m) for m in h_list.
std::vector<RateRow> run_diagonal(const StudyConfig& config);

enum class Norm { l2, h1, energy };
const char* to_string(Norm norm);

std::string format_table_csv(const StudyConfig& config, const TableResult& table, Norm norm);
std::string format_rates_csv(const StudyConfig& config, std::span<const RateRow> rows);
/// Two columns "h error" for log-log plotting.
std::string format_plot_data(const StudyConfig& config, std::span<const RateRow> rows, Norm norm);

/// Descriptions of failed checks; empty when everything passes.
std::vector<std::string> check_table(const StudyConfig& config, const TableResult& table);
std::vector<std::string> check_rates(const StudyConfig& config, std::span<const RateRow> rows);
std::vector<std::string> check_diagonal(const StudyConfig& config, std::span<const RateRow> rows);

/// One line per step: "step t_n dof_0 ... dof_{m-1}".
void write_steps(std::ostream& os, const SolveRecord& record, double dt);

const char* git_describe();

}  // namespace fracvisco
