#include "fracvisco/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "fracvisco/kernels.hpp"

namespace fracvisco {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> vector_dofs(const FeSpace& space) { return space.dirichlet_dofs(); }

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

SolverError::SolverError(std::size_t step, const std::string& what)
    : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

void ProblemSetup::validate() const {
  if (!space) throw std::invalid_argument("ProblemSetup: missing finite element space");
  material.validate();
  if (!(T > 0.0)) throw std::invalid_argument("ProblemSetup: T must be positive");
  if (N == 0) throw std::invalid_argument("ProblemSetup: N must be >= 1");
  if (!f) throw std::invalid_argument("ProblemSetup: missing body force");
  if (!w0_grad) throw std::invalid_argument("ProblemSetup: missing initial velocity gradient");
  if (space->dirichlet_sides().empty() || space->dirichlet_dofs().empty())
    throw std::invalid_argument("ProblemSetup: the Dirichlet boundary must be nonempty");
}

SparseMatrix step_matrix(const SparseMatrix& mass, const SparseMatrix& stiffness,
                         const FracWeights& weights, std::span<const std::size_t> constrained) {
  const SparseMatrix a = add_scaled(1.0 / weights.dt(), mass, 0.5 * weights.scale(), stiffness);
  std::vector<DirichletValue> fixed;
  fixed.reserve(constrained.size());
  for (auto d : constrained) fixed.push_back({d, 0.0});
  const Vector zero(a.nrows(), 0.0);
  return eliminate_dirichlet(a, zero, fixed).first;
}

SparseMatrix step_matrix(const ProblemSetup& setup, const AssemblyOptions& options) {
  setup.validate();
  const FracWeights weights(setup.material.alpha, setup.T, setup.N);
  return step_matrix(assemble_mass(*setup.space, setup.material.rho, options),
                     assemble_stiffness(*setup.space, setup.material, options), weights,
                     vector_dofs(*setup.space));
}

Vector step_rhs(const SparseMatrix& mass, const SparseMatrix& stiffness, const FracWeights& weights,
                std::span<const Vector> history, std::span<const double> load_n,
                std::span<const double> load_next, std::span<const std::size_t> constrained,
                Exec exec) {
  if (history.empty()) throw std::invalid_argument("step_rhs: empty history");
  const std::size_t dim = mass.nrows();
  const std::size_t n = history.size() - 1;
  if (load_n.size() != dim || load_next.size() != dim || stiffness.nrows() != dim)
    throw std::invalid_argument("step_rhs: dimension mismatch");
  for (const auto& w : history)
    if (w.size() != dim) throw std::invalid_argument("step_rhs: history dimension mismatch");
  if (n + 1 > weights.steps()) throw std::out_of_range("step_rhs: history longer than the time grid");

  std::vector<double> coeffs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    coeffs[i] = weights.weight(n + 1, i);
    if (n >= 1) coeffs[i] += weights.weight(n, i);
  }
  Vector combined(dim);
  kernels::weighted_sum(exec, coeffs, history, combined);

  Vector b = spmv(mass, history.back(), exec);
  const Vector k_combined = spmv(stiffness, combined, exec);
  const double inv_dt = 1.0 / weights.dt();
  const double half_scale = 0.5 * weights.scale();
  for (std::size_t i = 0; i < dim; ++i)
    b[i] = inv_dt * b[i] - half_scale * k_combined[i] + 0.5 * (load_n[i] + load_next[i]);
  for (auto d : constrained) b.at(d) = 0.0;
  return b;
}

double step_residual(const SparseMatrix& mass, const SparseMatrix& stiffness,
                     const FracWeights& weights, std::span<const Vector> steps, std::size_t n,
                     std::span<const double> load_n, std::span<const double> load_next,
                     std::span<const std::size_t> constrained) {
  if (n + 1 >= steps.size()) throw std::out_of_range("step_residual: step not stored");
  const std::size_t dim = mass.nrows();
  const Exec exec = Exec::serial;
  const double inv_dt = 1.0 / weights.dt();
  const double half_scale = 0.5 * weights.scale();

  const Vector m_next = spmv(mass, steps[n + 1], exec);
  const Vector m_now = spmv(mass, steps[n], exec);
  Vector memory(dim, 0.0);
  for (std::size_t i = 0; i <= n + 1; ++i) {
    double c = weights.weight(n + 1, i);
    if (n >= 1 && i <= n) c += weights.weight(n, i);
    const Vector kw = spmv(stiffness, steps[i], exec);
    for (std::size_t j = 0; j < dim; ++j) memory[j] += c * kw[j];
  }

  std::vector<char> fixed(dim, 0);
  for (auto d : constrained) fixed.at(d) = 1;
  double res2 = 0.0, scale2_next = 0.0, scale2_now = 0.0, scale2_load = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    if (fixed[j]) continue;
    const double load = 0.5 * (load_n[j] + load_next[j]);
    const double r = inv_dt * (m_next[j] - m_now[j]) + half_scale * memory[j] - load;
    res2 += r * r;
    scale2_next += inv_dt * inv_dt * m_next[j] * m_next[j];
    scale2_now += inv_dt * inv_dt * m_now[j] * m_now[j];
    scale2_load += load * load;
  }
  const double denom = std::sqrt(scale2_next) + std::sqrt(scale2_now) + std::sqrt(scale2_load);
  return denom > 0.0 ? std::sqrt(res2) / denom : std::sqrt(res2);
}

SolveRecord march(const SparseMatrix& mass, const SparseMatrix& stiffness,
                  const FracWeights& weights, Vector initial,
                  const std::function<Vector(std::size_t)>& load,
                  std::span<const std::size_t> constrained, const SolverOptions& options) {
  const auto start = Clock::now();
  const std::size_t N = weights.steps();
  const Exec exec = options.cg.exec;
  SolveRecord record;
  record.steps.reserve(N + 1);
  record.cg_reports.reserve(N);
  if (!all_finite(initial)) throw SolverError(0, "non-finite initial state");
  record.steps.push_back(std::move(initial));

  auto t0 = Clock::now();
  const SparseMatrix a = step_matrix(mass, stiffness, weights, constrained);
  record.wall_times.assembly += seconds_since(t0);

  t0 = Clock::now();
  Vector load_n = load(0);
  record.wall_times.loads += seconds_since(t0);
  for (std::size_t n = 0; n < N; ++n) {
    t0 = Clock::now();
    Vector load_next = load(n + 1);
    record.wall_times.loads += seconds_since(t0);

    t0 = Clock::now();
    const Vector b = step_rhs(mass, stiffness, weights, record.steps, load_n, load_next,
                              constrained, exec);
    record.wall_times.history += seconds_since(t0);

    t0 = Clock::now();
    auto [x, report] = options.warm_start
                           ? cg_solve(a, b, options.cg, record.steps.back())
                           : cg_solve(a, b, options.cg);
    record.wall_times.solve += seconds_since(t0);
    if (!report.converged) {
      std::ostringstream msg;
      msg << "CG did not converge (relative residual " << report.final_relative_residual
          << " after " << report.iterations << " iterations)";
      throw SolverError(n + 1, msg.str());
    }
    if (!all_finite(x)) throw SolverError(n + 1, "non-finite solution");
    record.steps.push_back(std::move(x));
    record.cg_reports.push_back(report);
    load_n = std::move(load_next);
  }

  t0 = Clock::now();
  std::set<std::size_t> checked;
  if (options.residual_checks >= N) {
    for (std::size_t n = 0; n < N; ++n) checked.insert(n);
  } else {
    std::mt19937 rng(20201);
    std::uniform_int_distribution<std::size_t> pick(0, N - 1);
    while (checked.size() < options.residual_checks) checked.insert(pick(rng));
  }
  for (std::size_t n : checked) {
    const double r = step_residual(mass, stiffness, weights, record.steps, n, load(n), load(n + 1),
                                   constrained);
    record.max_checked_residual = std::max(record.max_checked_residual, r);
    if (!(r <= options.residual_tol)) {
      std::ostringstream msg;
      msg << "discrete residual " << r << " exceeds " << options.residual_tol;
      throw SolverError(n + 1, msg.str());
    }
  }
  record.wall_times.checks = seconds_since(t0);
  record.wall_times.total = seconds_since(start);
  return record;
}

SolveRecord run(const ProblemSetup& setup, const SolverOptions& options) {
  setup.validate();
  const auto start = Clock::now();
  const FeSpace& space = *setup.space;
  const FracWeights weights(setup.material.alpha, setup.T, setup.N);

  auto t0 = Clock::now();
  const SparseMatrix mass = assemble_mass(space, setup.material.rho, options.assembly);
  const SparseMatrix stiffness = assemble_stiffness(space, setup.material, options.assembly);
  const double assembly_time = seconds_since(t0);

  t0 = Clock::now();
  Vector initial = elliptic_project(space, setup.material, stiffness, setup.w0_grad, options.cg,
                                    options.assembly);
  const double projection_time = seconds_since(t0);

  const auto load = [&](std::size_t n) {
    const double t = static_cast<double>(n) * weights.dt();
    const VectorFn f = [&setup, t](const Point& p) { return setup.f(p, t); };
    std::optional<TractionFn> g;
    if (setup.traction) {
      const auto& traction = *setup.traction;
      g = [&traction, t](const Point& p, Side s) { return traction(p, s, t); };
    }
    return assemble_load(space, f, g, options.assembly);
  };

  SolveRecord record =
      march(mass, stiffness, weights, std::move(initial), load, vector_dofs(space), options);
  record.wall_times.assembly += assembly_time;
  record.wall_times.projection = projection_time;
  record.wall_times.total = seconds_since(start);
  return record;
}

}  // namespace fracvisco
