#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracvisco/study.hpp"

using namespace fracvisco;

namespace {

StudyConfig parse(std::vector<std::string> args) { return parse_config(args); }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

StudyConfig small_config() {
  StudyConfig c;
  c.mode = Mode::rates;
  c.degree = 1;
  c.h_list = {2, 4, 8};
  c.dt_list = {8};
  c.serial = true;
  c.timing = false;
  return c;
}

}  // namespace

TEST(ParseConfig, DefaultsMatchTheReferenceSetup) {
  const auto c = parse({});
  EXPECT_EQ(c.example, CaseName::example1);
  EXPECT_DOUBLE_EQ(c.alpha, 0.5);
  EXPECT_DOUBLE_EQ(c.T, 1.0);
  EXPECT_DOUBLE_EQ(c.rho, 1.0);
  EXPECT_DOUBLE_EQ(c.lambda_hat, 0.0);
  EXPECT_DOUBLE_EQ(c.mu_hat, 0.5);
  EXPECT_EQ(c.dt_list, (std::vector<std::size_t>{512}));
  EXPECT_TRUE(c.timing);
}

TEST(ParseConfig, Flags) {
  const auto c = parse({"--alpha", "0.5", "--example", "example2", "--degree", "2", "--h-list",
                        "4,8,16", "--dt-list", "64", "--mode", "rates", "--rho", "2", "--lambda-hat",
                        "0.1", "--mu-hat", "0.7", "--cg-tol", "1e-12", "--out", "x/y", "--check",
                        "--no-timing", "--serial", "--precision", "6"});
  EXPECT_EQ(c.example, CaseName::example2);
  EXPECT_EQ(c.degree, 2);
  EXPECT_EQ(c.h_list, (std::vector<std::size_t>{4, 8, 16}));
  EXPECT_EQ(c.dt_list, (std::vector<std::size_t>{64}));
  EXPECT_EQ(c.mode, Mode::rates);
  EXPECT_DOUBLE_EQ(c.rho, 2.0);
  EXPECT_DOUBLE_EQ(c.lambda_hat, 0.1);
  EXPECT_DOUBLE_EQ(c.mu_hat, 0.7);
  EXPECT_DOUBLE_EQ(c.cg_tol, 1e-12);
  EXPECT_EQ(c.out, "x/y");
  EXPECT_TRUE(c.check);
  EXPECT_FALSE(c.timing);
  EXPECT_TRUE(c.serial);
  EXPECT_EQ(c.precision, 6);
}

TEST(ParseConfig, RejectsInvalidValues) {
  EXPECT_THROW(parse({"--alpha", "1.2"}), ConfigError);
  EXPECT_THROW(parse({"--alpha", "0"}), ConfigError);
  EXPECT_THROW(parse({"--degree", "3"}), ConfigError);
  EXPECT_THROW(parse({"--example", "example3"}), ConfigError);
  EXPECT_THROW(parse({"--mode", "movie"}), ConfigError);
  EXPECT_THROW(parse({"--h-list", "4,0"}), ConfigError);
  EXPECT_THROW(parse({"--h-list", "4,x"}), ConfigError);
  EXPECT_THROW(parse({"--rho", "-1"}), ConfigError);
  EXPECT_THROW(parse({"--T", "0"}), ConfigError);
  EXPECT_THROW(parse({"--bogus", "1"}), ConfigError);
  EXPECT_THROW(parse({"--mode", "rates", "--dt-list", "64,128"}), ConfigError);
  EXPECT_THROW(parse({"--mode", "diagonal", "--h-list", "8"}), ConfigError);
  EXPECT_THROW(parse({"--dump-steps", "a.txt"}), ConfigError);
  EXPECT_THROW(parse({"--precision", "1"}), ConfigError);
  EXPECT_THROW(parse({"--help"}), HelpRequested);
}

TEST(ParseConfig, ConfigFileWithOverrides) {
  const auto dir = std::filesystem::temp_directory_path() / "fracvisco_cfg_test";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.toml";
  {
    std::ofstream os(good);
    os << "alpha = 0.3\ndegree = 2\nh-list = [4, 8]\nmode = \"diagonal\"\n";
  }
  const auto c = parse({"--config", good.string(), "--degree", "1"});
  EXPECT_DOUBLE_EQ(c.alpha, 0.3);
  EXPECT_EQ(c.degree, 1);
  EXPECT_EQ(c.h_list, (std::vector<std::size_t>{4, 8}));
  EXPECT_EQ(c.mode, Mode::diagonal);

  const auto bad = dir / "bad.toml";
  {
    std::ofstream os(bad);
    os << "alpha = 0.3\nunknown_key = 1\n";
  }
  EXPECT_THROW(parse({"--config", bad.string()}), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Rates, FormulaAndRecomputableFromCsv) {
  EXPECT_NEAR(convergence_rate(4e-2, 1e-2, 0.5, 0.25), 2.0, 1e-14);
  const auto cfg = small_config();
  const auto rows = run_spatial_rates(cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[0].rate_l2.has_value());
  const auto table = csv_rows(format_rates_csv(cfg, rows));
  ASSERT_EQ(table.size(), 4u);
  EXPECT_EQ(table[0], (std::vector<std::string>{"h", "dt", "err_l2", "err_h1", "err_energy", "rate_l2",
                                                "rate_h1"}));
  EXPECT_EQ(table[1][5], "");
  for (std::size_t r = 2; r < table.size(); ++r) {
    const double h1 = std::stod(table[r - 1][0]), h2 = std::stod(table[r][0]);
    for (int col : {2, 3}) {
      const double rate = convergence_rate(std::stod(table[r - 1][col]), std::stod(table[r][col]), h1, h2);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", rate);
      EXPECT_EQ(table[r][col + 3], buf);
    }
  }
}

TEST(Rates, CsvByteIdenticalAcrossRuns) {
  const auto cfg = small_config();
  const auto a = format_rates_csv(cfg, run_spatial_rates(cfg));
  const auto b = format_rates_csv(cfg, run_spatial_rates(cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("wall_clock"), std::string::npos);
  auto timed = cfg;
  timed.timing = true;
  const auto t = format_rates_csv(timed, run_spatial_rates(timed));
  EXPECT_NE(t.find("wall_clock"), std::string::npos);
  EXPECT_NE(t.find("runtime_s"), std::string::npos);
}

TEST(Rates, FloorFlaggedForExactlyRepresentableSolution) {
  // w = t A x with traction on three sides: the scheme reproduces it exactly for k = 1.
  ManufacturedCase mc;
  mc.g.terms = {{1.0, 1.0}};
  mc.phi = linear_field({{{1.0, 0.0}, {0.5, 0.0}}});
  std::vector<CellResult> cells;
  for (std::size_t m : {2u, 4u, 8u}) {
    auto space = std::make_shared<const FeSpace>(std::make_shared<const Mesh>(build_unit_square(m)), 1,
                                                 std::set<Side>{Side::left});
    ProblemSetup s;
    s.space = space;
    s.N = 4;
    s.f = [mc](const Point& p, double t) { return forcing(mc, p, t); };
    s.traction = [mc](const Point& p, Side side, double t) { return exact_traction(mc, p, side, t); };
    SolverOptions o;
    o.cg.tol = 1e-14;
    const auto rec = run(s, o);
    CellResult r;
    r.h = 1.0 / m;
    r.dt = 0.25;
    r.errors = error_norms(
        *space, rec.steps.back(), [&](const Point& p) { return exact_velocity(mc, p, 1.0); },
        [&](const Point& p) { return exact_gradient(mc, p, 1.0); }, mc.material);
    EXPECT_LT(r.errors.h1, 1e-10);
    cells.push_back(r);
  }
  const auto rows = rate_rows(cells, 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].floor_l2);
    EXPECT_TRUE(rows[i].floor_h1);
    EXPECT_FALSE(rows[i].rate_l2.has_value());
  }
  auto cfg = small_config();
  const auto table = csv_rows(format_rates_csv(cfg, rows));
  EXPECT_EQ(table[2][5], "floor");
  EXPECT_EQ(table[2][6], "floor");
}

TEST(Table, LayoutAndCheck) {
  StudyConfig cfg;
  cfg.h_list = {2, 4};
  cfg.dt_list = {4, 8};
  cfg.timing = false;
  const auto table = run_table(cfg);
  const auto rows = csv_rows(format_table_csv(cfg, table, Norm::h1));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"h", "dt=0.25", "dt=0.125"}));
  EXPECT_EQ(rows[1][0], "0.5");
  EXPECT_EQ(rows[2][0], "0.25");
  // 4 significant digits
  EXPECT_EQ(rows[1][1].size(), std::string("1.234e-01").size());
  EXPECT_TRUE(check_table(cfg, table).empty());
}

TEST(Checks, RateWindows) {
  StudyConfig cfg;
  cfg.degree = 2;
  std::vector<RateRow> rows(2);
  rows[1].rate_h1 = 2.02;
  rows[1].rate_l2 = 2.98;
  EXPECT_TRUE(check_rates(cfg, rows).empty());
  rows[1].rate_l2 = 2.6;
  EXPECT_EQ(check_rates(cfg, rows).size(), 1u);
  // Example 1 with k = 2: temporal order 1.5 bounds the diagonal from below.
  rows[1].rate_l2 = 1.8;
  EXPECT_TRUE(check_diagonal(cfg, rows).empty());
  rows[1].rate_l2 = 1.2;
  EXPECT_EQ(check_diagonal(cfg, rows).size(), 1u);
  cfg.example = CaseName::example2;
  rows[1].rate_l2 = 1.6;
  EXPECT_EQ(check_diagonal(cfg, rows).size(), 1u);
  EXPECT_FALSE(check_rates(cfg, std::span(rows).first(1)).empty());
}

TEST(Output, StepDumpFormat) {
  StudyConfig cfg;
  cfg.mode = Mode::single;
  const auto run = solve_cell(cfg, 2, 3);
  std::ostringstream os;
  write_steps(os, run.record, run.result.dt);
  std::istringstream is(os.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::size_t step = 0;
    double t = 0.0, v = 0.0;
    ls >> step >> t;
    EXPECT_EQ(step, count);
    EXPECT_NEAR(t, count / 3.0, 1e-15);
    std::size_t values = 0;
    while (ls >> v) ++values;
    EXPECT_EQ(values, run.space->n_dofs());
    ++count;
  }
  EXPECT_EQ(count, 4u);
}

TEST(Output, PlotData) {
  auto cfg = small_config();
  cfg.mode = Mode::diagonal;
  const auto rows = run_diagonal(cfg);
  const auto text = format_plot_data(cfg, rows, Norm::l2);
  std::istringstream is(text);
  std::string line;
  std::size_t data = 0;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') ++data;
  EXPECT_EQ(data, rows.size());
}
