#pragma once

#include <optional>
#include <span>

#include "fracvisco/fe_space.hpp"
#include "fracvisco/fields.hpp"
#include "fracvisco/linalg.hpp"

namespace fracvisco {

/**
 * Material data of the reduced velocity model.
 *
 * The relaxation tensor is isotropic, D eps = 2 mu_hat eps + lambda_hat tr(eps) I,
 * and already absorbs the power-law prefactors. The default lambda_hat = 0,
 * mu_hat = 1/2 makes D the identity on symmetric tensors.
 */
struct Material {
  double rho = 1.0;
  double lambda_hat = 0.0;
  double mu_hat = 0.5;
  double alpha = 0.5;

  /// Throws std::invalid_argument unless rho > 0, mu_hat > 0,
  /// lambda_hat >= 0 and 0 < alpha < 1.
  void validate() const;

  /// D applied to the symmetric part of a displacement gradient.
  Mat2 stress(const Mat2& grad) const;
};

struct AssemblyOptions {
  /// Triangle rule degree for load vectors and projections; -1 selects 2k+2.
  int load_degree = -1;
  /// Triangle rule degree for error norms; -1 selects 2k+4.
  int norm_degree = -1;
  Exec exec = Exec::parallel;
};

/// M_ij = rho * int phi_i . phi_j, no coupling between components.
SparseMatrix assemble_mass(const FeSpace& space, double rho, const AssemblyOptions& options = {});

/// K_ij = int D eps(phi_j) : eps(phi_i). Singular on rigid motions before
/// Dirichlet elimination.
SparseMatrix assemble_stiffness(const FeSpace& space, const Material& material,
                                const AssemblyOptions& options = {});

/// F_i = int f . phi_i + int_{Gamma_N} g_N . phi_i.
/// Throws std::invalid_argument if a traction is given but the space has no
/// Neumann side.
Vector assemble_load(const FeSpace& space, const VectorFn& f,
                     const std::optional<TractionFn>& traction = std::nullopt,
                     const AssemblyOptions& options = {});

struct ErrorNorms {
  double l2 = 0.0;
  /// Full H1 norm: sqrt(l2^2 + |grad e|^2).
  double h1 = 0.0;
  /// sqrt(a(e, e)).
  double energy = 0.0;
};

/// Norms of (discrete - exact). Pass zero_vec2 / zero_mat2 to get the norms of
/// the discrete field itself, or a zero vector to get those of the exact one.
ErrorNorms error_norms(const FeSpace& space, std::span<const double> coeffs,
                       const VectorFn& exact, const GradientFn& exact_grad,
                       const Material& material, const AssemblyOptions& options = {});

/// Zero-trace elliptic projection: a(W, v) = a(w0, v) for all discrete v.
/// Throws NumericalBreakdown / std::runtime_error if CG does not converge.
Vector elliptic_project(const FeSpace& space, const Material& material, const GradientFn& w0_grad,
                        const CgOptions& cg = {}, const AssemblyOptions& options = {});

/// Same, reusing an assembled stiffness matrix.
Vector elliptic_project(const FeSpace& space, const Material& material, const SparseMatrix& stiffness,
                        const GradientFn& w0_grad, const CgOptions& cg = {},
                        const AssemblyOptions& options = {});

/// Zero-valued Dirichlet constraints of the space.
std::vector<DirichletValue> homogeneous_constraints(const FeSpace& space);

}  // namespace fracvisco
