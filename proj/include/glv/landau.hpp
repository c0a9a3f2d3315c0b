// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "glv/quadrature.hpp"
#include "glv/theta.hpp"

namespace glv {

/// Geometry of the normalized magnetic cell: lattice sqrt(2pi/Im tau)(Z + tau Z),
/// background potential a^n(x) = (n/2)(-x2, x1), flux 2 pi n per cell.
struct MagneticCell {
  LatticeShape shape;
  cplx g1, g2;
  double c;  // sqrt(2 pi / Im tau); z = (x1 + i x2)/c

  explicit MagneticCell(const LatticeShape& s) : shape(s) {
    shape.validate();
    auto [a, b] = normalized_lattice(s);
    g1 = a;
    g2 = b;
    c = a.real();
  }
  Eigen::Vector2d an(double x1, double x2) const {
    return {-0.5 * shape.n * x2, 0.5 * shape.n * x1};
  }
};

/// Closed-form evaluator for the Landau ladder over one lowest-level seed:
/// level-m functions are (d-bar*)^m [f_n theta], expressed as f_n times
/// polynomials in (wbar - w) times theta derivatives.
class LadderEvaluator {
 public:
  LadderEvaluator(const MagneticCell& cell, ThetaElement seed, int m_max);

  struct Val {
    cplx val, d1, d2;  // value and plain gradient
  };
  Val eval(int level, cplx x) const;

  int m_max() const { return m_max_; }
  const ThetaElement& seed() const { return seed_; }

 private:
  MagneticCell cell_;
  ThetaElement seed_;
  int m_max_;
  int trunc_;
  std::vector<cplx> Cl_;                            // per-l series coefficients
  std::vector<std::vector<Eigen::VectorXcd>> poly_;  // poly_[m][i]: coeffs in v
};

/// One Galerkin basis function of the psi component, cached on the quadrature
/// grid with its covariant gradient w.r.t. a^n.
struct BasisFunction {
  int level = 0;  // Landau level m, eigenvalue (2m+1) n
  int seed = 0;
  double eigenvalue = 0.0;
  Eigen::ArrayXcd val, D1, D2;
};

/// Landau-level Galerkin basis built from a set of LLL theta seeds, quadrature-
/// orthonormalized within each level (cross-level orthogonality is exact).
class LandauBasis {
 public:
  LandauBasis(const MagneticCell& cell, const std::vector<ThetaElement>& lll_seeds, int m_max,
              const CellQuadrature& quad);

  /// Full degenerate basis: all n theta basis elements as seeds.
  static LandauBasis full(const MagneticCell& cell, int m_max, const CellQuadrature& quad);

  const std::vector<BasisFunction>& functions() const { return fns_; }
  int size() const { return int(fns_.size()); }
  int levels() const { return m_max_ + 1; }
  int seeds() const { return int(evals_.size()); }
  const CellQuadrature& quad() const { return *quad_; }
  const MagneticCell& cell() const { return cell_; }

  Eigen::MatrixXcd gram() const;

  Eigen::ArrayXcd field(const Eigen::VectorXcd& coeffs) const;
  Eigen::ArrayXcd field_D1(const Eigen::VectorXcd& coeffs) const;
  Eigen::ArrayXcd field_D2(const Eigen::VectorXcd& coeffs) const;

  /// Point evaluation of psi = sum coeffs * basis function (value + covariant
  /// gradient w.r.t. a^n), honoring the per-level orthonormalization.
  LadderEvaluator::Val eval_at(const Eigen::VectorXcd& coeffs, cplx x) const;

 private:
  MagneticCell cell_;
  const CellQuadrature* quad_ = nullptr;
  int m_max_ = 0;
  std::vector<std::shared_ptr<LadderEvaluator>> evals_;
  std::vector<Eigen::MatrixXcd> mix_;  // per level: seed -> orthonormal combination
  std::vector<BasisFunction> fns_;
};

/// Exact Landau spectrum of -Delta_{a^n}: eigenvalues (2m+1) n, multiplicity n.
inline std::vector<std::pair<double, int>> landau_spectrum(int n, int m_max) {
  if (n < 1) throw std::domain_error("landau_spectrum: n must be positive");
  std::vector<std::pair<double, int>> out;
  for (int m = 0; m <= m_max; ++m) out.push_back({double((2 * m + 1) * n), n});
  return out;
}

/// Lowest-Landau-level wave function psi(x) = f_n(x) theta(z), z = (x1 + i x2)/c,
/// f_n = e^{(i n/2) x2 (x1 + i x2)}.
cplx lll_from_theta(const ThetaElement& theta, const MagneticCell& cell, cplx x);

/// Gauge-periodicity defect |psi(x+t) - e^{i((n/2) x.Jt + c_t)} psi(x)| / |psi(x)|
/// for t = p g1 + q g2.
double gauge_periodicity_residual(const ThetaElement& theta, const MagneticCell& cell, cplx x,
                                  int p, int q);

// ---------------------------------------------------------------------------
// Divergence-free vector modes and the curl* curl operator
// ---------------------------------------------------------------------------

/// Real, odd, divergence-free, mean-zero mode (an orbit sum of
/// Khat_perp sin(K.x) terms for the symmetrized variant).
struct AlphaMode {
  struct Term {
    Eigen::Vector2d K;
    double w = 0.0;
  };
  std::vector<Term> terms;
  double k2 = 0.0;  // |K|^2, shared along an orbit
  std::vector<std::pair<int, double>> parts;  // (parent index, weight) for orbit sums
  Eigen::ArrayXd v1, v2, curlv;

  Eigen::Vector2d eval(double x1, double x2) const;
  double eval_curl(double x1, double x2) const;
};

class AlphaBasis {
 public:
  AlphaBasis() = default;
  /// All modes with |K| <= shells * |K|_min, one per +-K pair.
  AlphaBasis(const MagneticCell& cell, int shells, const CellQuadrature& quad);

  const std::vector<AlphaMode>& modes() const { return modes_; }
  int size() const { return int(modes_.size()); }

  /// C_k-invariant subbasis obtained by summing rotation orbits.
  AlphaBasis symmetrized(int k) const;

  Eigen::ArrayXd field1(const Eigen::VectorXd& coeffs) const;
  Eigen::ArrayXd field2(const Eigen::VectorXd& coeffs) const;
  Eigen::ArrayXd curl(const Eigen::VectorXd& coeffs) const;
  Eigen::Vector2d eval_at(const Eigen::VectorXd& coeffs, double x1, double x2) const;

  /// M = curl* curl in coefficients: multiplication by |K|^2.
  Eigen::VectorXd apply_M(const Eigen::VectorXd& coeffs) const;

  const CellQuadrature& quad() const { return *quad_; }

 private:
  const CellQuadrature* quad_ = nullptr;
  std::vector<AlphaMode> modes_;
};

// ---------------------------------------------------------------------------
// Gauge fixing on general periodic Fourier fields
// ---------------------------------------------------------------------------

/// Periodic vector field as Fourier data over dual-lattice wavevectors
/// (coefficients of e^{i K.x}); K = 0 carries the mean.
struct FourierVectorField {
  std::vector<Eigen::Vector2d> K;
  std::vector<Eigen::Vector2cd> coeff;

  Eigen::Vector2cd eval(double x1, double x2) const;
  cplx curl(double x1, double x2) const;
  cplx divergence(double x1, double x2) const;
};

struct GaugeFixResult {
  FourierVectorField alpha;     // div-free, mean-zero part
  FourierVectorField grad_eta;  // removed gradient of a periodic gauge function
  Eigen::Vector2cd removed_mean;
};

/// Helmholtz split alpha_raw = alpha + grad(eta) + mean with div alpha = 0 and
/// zero cell average; curl is untouched.
GaugeFixResult gauge_fix(const FourierVectorField& alpha_raw);

/// Boundary line integral of a = a^n + alpha over one cell (equals 2 pi n).
double flux_per_cell(const MagneticCell& cell, const FourierVectorField& alpha,
                     int quad_order = 64);
double flux_per_cell(const MagneticCell& cell, const AlphaBasis& basis,
                     const Eigen::VectorXd& coeffs, int quad_order = 64);

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

struct FieldSample {
  Eigen::ArrayXd x1, x2;
  Eigen::ArrayXd ns;      // |psi|^2
  Eigen::ArrayXd B;       // curl(a^n + alpha) = n + curl alpha
  Eigen::ArrayXd J1, J2;  // Im(conj(psi) grad_{a^n + alpha} psi)
};

/// Observables on the quadrature grid.
FieldSample observables(const LandauBasis& psi_basis, const Eigen::VectorXcd& psi_coeffs,
                        const AlphaBasis& alpha_basis, const Eigen::VectorXd& alpha_coeffs);

/// Observables at arbitrary points (for rotation-invariance checks and export).
FieldSample observables_at(const LandauBasis& psi_basis, const Eigen::VectorXcd& psi_coeffs,
                           const AlphaBasis& alpha_basis, const Eigen::VectorXd& alpha_coeffs,
                           const Eigen::ArrayXd& x1, const Eigen::ArrayXd& x2);

}  // namespace glv
