// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "glv/lattice.hpp"

namespace glv {

struct contour_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Series cutoff giving a truncation tail below 1e-14 for evaluation on the
/// strip |Im z| <= strip * Im tau. Never smaller than ceil(sqrt(40 n / (pi Im tau))) + n.
int default_trunc(int n, double im_tau, double strip = 1.0);

/// Basis function theta_{n,m}(z) = sum_{l = m mod n, |l| <= trunc} q^{l^2} e^{2 pi i l z},
/// q = e^{i pi tau / n}; deriv > 0 gives the term-wise z-derivative of that order.
cplx theta_basis(int n, int m, cplx z, cplx tau, int trunc, int deriv = 0);

/// Element of the n-dimensional space V_n of n-theta functions, stored as
/// coefficients over the theta_{n,m} basis together with the series cutoff.
class ThetaElement {
 public:
  ThetaElement() = default;
  ThetaElement(int n, cplx tau, Eigen::VectorXcd coeffs, int trunc = 0);

  static ThetaElement basis_element(int n, int m, cplx tau, int trunc = 0);
  static ThetaElement zero_element(int n, cplx tau);

  int degree() const { return n_; }
  cplx tau() const { return tau_; }
  int trunc() const { return trunc_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

  cplx eval(cplx z, int deriv = 0) const;
  bool is_zero(double tol = 0.0) const { return coeffs_.norm() <= tol; }

  /// Projective representative: scale so the largest coefficient is 1.
  ThetaElement normalized() const;

  /// Max residual of the two V_n defining relations theta(z+1) = theta(z) and
  /// theta(z+tau) = e^{-2 pi i n z} e^{-i pi n tau} theta(z) over the points.
  double quasi_periodicity_residual(std::span<const cplx> pts) const;

  /// Sup of |theta| sampled on the unit cell; used to scale residual tests.
  double cell_scale() const;

 private:
  int n_ = 0;
  cplx tau_{0.0, 1.0};
  int trunc_ = 0;
  Eigen::VectorXcd coeffs_;
};

ThetaElement operator*(cplx s, const ThetaElement& t);
ThetaElement operator+(const ThetaElement& a, const ThetaElement& b);
ThetaElement operator-(const ThetaElement& a, const ThetaElement& b);

/// Zeros of a theta function in the Wigner-Seitz cell with multiplicities.
struct Divisor {
  struct Entry {
    cplx z;
    int mult;
  };
  std::vector<Entry> entries;

  int degree() const {
    int d = 0;
    for (const auto& e : entries) d += e.mult;
    return d;
  }
  /// Multiplicity at a point (0 if absent), matched within tol.
  int multiplicity_at(cplx z, double tol) const;
  /// True when every entry of sub is contained in this divisor with at least
  /// the same multiplicity.
  bool contains(const Divisor& sub, double tol) const;
};

struct ZeroFindOptions {
  double box_tol = 1e-3;        // smallest quadtree box edge, relative to cell diameter
  double mult_radius = 1e-4;    // multiplicity probe circle radius, relative to diameter
  double residual_tol = 1e-11;  // |theta| at a polished zero, relative to cell_scale
  int max_retries = 8;          // contour dilation/jitter ladder
  std::uint64_t seed = 0;       // jitter seed (keeps the ladder deterministic)
};

/// Winding number of f along the closed polygon, evaluated by adaptive argument
/// tracking. Throws contour_error when f vanishes on the contour (relative to
/// its max there).
int winding_number(const std::function<cplx(cplx)>& f, std::span<const cplx> polygon,
                   double rel_tol = 1e-10, double* boundary_max_abs = nullptr);

/// Zero count of theta in one cell by the argument principle (equals degree() for
/// any nonzero element of V_n).
int count_zeros(const ThetaElement& theta, const WignerSeitzCell& cell,
                const ZeroFindOptions& opt = {});

/// Zero locations and multiplicities, canonicalized into the owned half-open cell.
Divisor find_zeros(const ThetaElement& theta, const WignerSeitzCell& cell,
                   const ZeroFindOptions& opt = {});

/// Order of the zero of theta at z0 (0 when theta(z0) != 0), by local winding.
int zero_order_at(const ThetaElement& theta, cplx z0, const ZeroFindOptions& opt = {});

/// Diagnostics of a least-squares fit of sampled values onto a theta basis.
struct CollocationInfo {
  double residual = 0.0;  // relative l2 misfit at the sample points
  double cond = 0.0;      // condition number of the scaled collocation matrix
};

/// Deterministic low-discrepancy sample points inside the fundamental cell of
/// Z + tau Z (used by all collocation fits).
std::vector<cplx> collocation_points(cplx tau, int count);

/// Least-squares recovery of an element of V_n from point samples.
ThetaElement from_samples(int n, cplx tau, std::span<const cplx> pts,
                          std::span<const cplx> values, CollocationInfo* info = nullptr);

/// Product in V_{n+m} by collocation at >= 4(n+m) points.
ThetaElement product(const ThetaElement& a, const ThetaElement& b,
                     CollocationInfo* info = nullptr);

/// Splits V_n into spans of sigma_{j,+-} = theta_j +- theta_{n-j}; elements satisfy
/// theta(-z) = +- theta(z) and dim(even) + dim(odd) = n.
std::pair<std::vector<ThetaElement>, std::vector<ThetaElement>> parity_split(int n, cplx tau);

/// Member theta_0^n(z + (a + b tau)/n) e^{2 pi i b z} of the singular family X_n,
/// expressed in the theta_{n,m} basis; carries one zero of multiplicity n.
ThetaElement singular_family(int n, int a, int b, cplx tau);

/// Wronskian Theta(z) = det(theta_j^{(i)}(z)), i,j in 0..n-1.
cplx wronskian_value(int n, cplx z, cplx tau, int trunc = 0);

/// The Wronskian as an element of V_{n^2} (recovered by collocation).
ThetaElement wronskian_element(int n, cplx tau, CollocationInfo* info = nullptr);

struct QuotientResult {
  bool divisible = false;
  ThetaElement quotient;            // valid element of V_{n-m} when divisible
  double quasi_periodicity = 0.0;   // V_{n-m} relation residual of the samples
  double fit_residual = 0.0;
};

/// Divisor-based divisibility test; when div(sigma) is contained in div(theta)
/// the ratio is sampled away from the zeros and fitted into V_{n-m}.
QuotientResult quotient_check(const ThetaElement& theta, const ThetaElement& sigma,
                              const ZeroFindOptions& opt = {});

}  // namespace glv
