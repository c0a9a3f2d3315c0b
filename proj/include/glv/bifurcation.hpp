// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "glv/landau.hpp"
#include "glv/symmetry.hpp"

namespace glv {

struct SolverOptions {
  int m_max = 6;            // Landau levels in the Galerkin basis
  int shells = 8;           // reciprocal-lattice shells for alpha
  int quad_order = 48;      // tensor Gauss-Legendre order (certification uses 2x)
  double newton_step_tol = 1e-12;
  double w_residual_tol = 1e-11;
  int max_newton = 25;
  double gamma_tol = 1e-13;  // |gamma_1| target of the lambda solve
};

/// Galerkin coefficients of a state u = (psi, alpha) in the problem's sector
/// basis: psi over Landau-level columns, alpha over divergence-free modes.
struct SpectralState {
  Eigen::VectorXcd psi;
  Eigen::VectorXd alpha;
};

/// One certified point of the bifurcation branch.
struct BranchSample {
  double s = 0.0;
  double lambda = 0.0;
  double energy = 0.0;
  double residual = 0.0;        // full nonlinear residual, finer quadrature
  double sector_leakage = 0.0;  // residual components outside the sector
  double flux = 0.0;
  double div_j_weak = 0.0;
  double mean_j = 0.0;
  double rot_invariance = 0.0;  // observables vs rotation by 2 pi / k
  double beta_s = 0.0;          // Abrikosov ratio of |psi_s|^2
  double psi_norm = 0.0;        // sqrt(<|psi|^2>)
  double projection_error = 0.0;
  SpectralState state;
};

struct WSolveResult {
  SpectralState state;  // full state s v0 + w
  double residual = 0.0;
  int iterations = 0;
  double w1_norm = 0.0;  // psi correction, L2
  double w2_norm = 0.0;  // alpha correction, L2
};

/// Lyapunov-Schmidt setup for one lattice shape, flux and symmetry sector: the
/// sector-restricted Galerkin basis, kernel element, residual assembly, the
/// complement (w) solve and the scalar bifurcation function.
class ReducedProblem {
 public:
  ReducedProblem(const LatticeShape& shape, double kappa, const SolverOptions& opt = {});
  ~ReducedProblem();
  ReducedProblem(ReducedProblem&&) noexcept;

  const LatticeShape& shape() const;
  double kappa() const;
  const SolverOptions& options() const;
  int kernel_dim() const;  // dim of the sector-restricted kernel of L^n - n
  int n_psi() const;
  int n_alpha() const;

  /// Abrikosov parameter beta = <|psi0|^4> / <|psi0|^2>^2 of the kernel state.
  double beta0() const;

  /// Sector residual of F(lambda, u) = (A_lambda u + f(u)).
  SpectralState assemble_F(double lambda, const SpectralState& u) const;

  /// Directional (Gateaux) derivative of F at u.
  SpectralState apply_dF(double lambda, const SpectralState& u,
                         const SpectralState& du) const;

  /// Solves the complement equation Pbar F(lambda, s v0 + w) = 0 by Newton,
  /// holding the kernel amplitude fixed (complex amplitudes support the gauge
  /// equivariance checks). Throws on non-convergence.
  WSolveResult solve_w(double lambda, cplx amplitude,
                       const SpectralState* warm_start = nullptr) const;

  /// gamma~(lambda, s) = <psi0, F_1(lambda, s v0 + w)> with the cell-average
  /// normalization <|psi0|^2> = 1.
  cplx gamma_tilde(double lambda, cplx amplitude,
                   const SpectralState* warm_start = nullptr,
                   WSolveResult* out = nullptr) const;

  /// gamma_1(lambda, s) = gamma_0 / s for s > 0, continued as -(lambda - n) at
  /// s = 0; asserts the imaginary part is below tolerance.
  double gamma1(double lambda, double s, const SpectralState* warm_start = nullptr,
                WSolveResult* out = nullptr) const;

  /// One branch point: solves gamma_1(lambda, s) = 0 for lambda and certifies
  /// the full nonlinear residual on the finer quadrature.
  BranchSample sample_at(double s, double lambda_guess,
                         const SpectralState* warm_start = nullptr) const;

  std::vector<BranchSample> trace_branch(std::span<const double> s_grid) const;

  /// Default 40-point geometric grid in [1e-3, 0.1].
  static std::vector<double> default_s_grid();

  /// Cell-averaged rescaled GL energy of a state.
  double energy(const SpectralState& u, double lambda) const;

  /// Energy of the normal state psi = 0, curl a = n at the same lambda.
  double normal_energy(double lambda) const;

  /// Observables of a state at arbitrary points (x1, x2).
  FieldSample fields_at(const SpectralState& u, const Eigen::ArrayXd& x1,
                        const Eigen::ArrayXd& x2) const;

  struct Impl;
  const Impl& impl() const { return *impl_; }

 private:
  std::unique_ptr<Impl> impl_;
};

/// Branch in the maximally symmetric sector X_{n,k,r}; requires the sector
/// kernel to be one-dimensional.
std::vector<BranchSample> multi_flux_branch(cplx tau, int n, int k, int r, double kappa,
                                            const SolverOptions& opt = {});

struct DirectionFit {
  double c = 0.0;         // lambda_s - n ~ c s^2
  double fit_error = 0.0; // relative misfit of the pure-quadratic model
  double odd_fraction = 0.0;  // |cubic term| / |quadratic term| at s_max
  int sign = 0;
};

/// Fits c from traced samples (the two smallest s are excluded).
DirectionFit fit_direction(std::span<const BranchSample> samples, int n);

/// Sign of the bifurcation direction for a shape/coupling; flips at kappa_c.
DirectionFit bifurcation_direction(const LatticeShape& shape, double kappa,
                                   const SolverOptions& opt = {});

}  // namespace glv
