// Batch driver for the convergence studies.
// Exit codes: 0 ok, 1 configuration error, 2 solver failure, 3 failed --check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fracvisco/kernels.hpp"
#include "fracvisco/mesh.hpp"
#include "fracvisco/study.hpp"

namespace fv = fracvisco;

namespace {

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
  std::cerr << "wrote " << path << '\n';
}

int report(const std::vector<std::string>& failures) {
  for (const auto& f : failures) std::cerr << "CHECK FAILED: " << f << '\n';
  if (failures.empty()) std::cerr << "check passed\n";
  return failures.empty() ? 0 : 3;
}

int run(const fv::StudyConfig& cfg) {
  const std::string& out = cfg.out;
  switch (cfg.mode) {
    case fv::Mode::table: {
      const auto table = fv::run_table(cfg);
      for (auto norm : {fv::Norm::l2, fv::Norm::h1, fv::Norm::energy})
        write_file(out + "_" + fv::to_string(norm) + ".csv", fv::format_table_csv(cfg, table, norm));
      return cfg.check ? report(fv::check_table(cfg, table)) : 0;
    }
    case fv::Mode::rates: {
      const auto rows = fv::run_spatial_rates(cfg);
      write_file(out + "_rates.csv", fv::format_rates_csv(cfg, rows));
      return cfg.check ? report(fv::check_rates(cfg, rows)) : 0;
    }
    case fv::Mode::diagonal: {
      const auto rows = fv::run_diagonal(cfg);
      write_file(out + "_diagonal.csv", fv::format_rates_csv(cfg, rows));
      for (auto norm : {fv::Norm::l2, fv::Norm::h1, fv::Norm::energy})
        write_file(out + "_" + fv::to_string(norm) + "_loglog.dat",
                   fv::format_plot_data(cfg, rows, norm));
      return cfg.check ? report(fv::check_diagonal(cfg, rows)) : 0;
    }
    case fv::Mode::single: {
      const auto cell = fv::solve_cell(cfg, cfg.h_list.front(), cfg.dt_list.front());
      const std::vector<fv::CellResult> cells{cell.result};
      write_file(out + "_single.csv", fv::format_rates_csv(cfg, fv::rate_rows(cells, cfg.precision)));
      if (!cfg.dump_steps.empty()) {
        std::ofstream os(cfg.dump_steps);
        if (!os) throw std::runtime_error("cannot write " + cfg.dump_steps);
        fv::write_steps(os, cell.record, cell.result.dt);
      }
      if (!cfg.dump_mesh.empty()) {
        std::ofstream os(cfg.dump_mesh);
        if (!os) throw std::runtime_error("cannot write " + cfg.dump_mesh);
        fv::write_mesh(os, cell.space->mesh());
      }
      std::printf("h=1/%zu N=%zu L2=%.6e H1=%.6e energy=%.6e\n", cell.result.cells,
                  cell.result.steps, cell.result.errors.l2, cell.result.errors.h1,
                  cell.result.errors.energy);
      return 0;
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  fv::StudyConfig cfg;
  try {
    cfg = fv::parse_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const fv::HelpRequested& h) {
    std::cout << h.what();
    return 0;
  } catch (const fv::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  }
  if (cfg.threads > 0) fv::kernels::set_threads(cfg.threads);
  try {
    return run(cfg);
  } catch (const fv::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  }
}
