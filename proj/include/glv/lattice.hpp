// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace glv {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Dimensionless lattice data: shape parameter tau (Im tau > 0), flux number n,
/// rotation order k and representation index r of the requested symmetry sector.
struct LatticeShape {
  cplx tau{0.0, 1.0};
  int n = 1;
  int k = 1;
  int r = 0;

  void validate() const {
    if (!(tau.imag() > 0.0)) throw std::domain_error("LatticeShape: Im tau must be positive");
    if (n < 1) throw std::domain_error("LatticeShape: n must be a positive integer");
    if (k != 1 && k != 2 && k != 3 && k != 4 && k != 6)
      throw std::domain_error("LatticeShape: k must be one of 1,2,3,4,6");
    if (r < 0 || r >= k) throw std::domain_error("LatticeShape: r must lie in [0, k-1]");
  }
};

/// Element of SL(2,Z) acting on the upper half plane by tau -> (a tau + b)/(c tau + d).
struct Sl2Matrix {
  long long a = 1, b = 0, c = 0, d = 1;

  cplx apply(cplx tau) const {
    return (double(a) * tau + double(b)) / (double(c) * tau + double(d));
  }
  Sl2Matrix compose(const Sl2Matrix& o) const {
    // this * o (apply o first)
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  long long det() const { return a * d - b * c; }
};

/// Gauss reduction of tau into the fundamental domain of SL(2,Z):
/// |tau| >= 1, -1/2 < Re tau <= 1/2. Records the group element used.
cplx reduce_to_fundamental_domain(cplx tau, Sl2Matrix& used);

inline cplx reduce_to_fundamental_domain(cplx tau) {
  Sl2Matrix m;
  return reduce_to_fundamental_domain(tau, m);
}

/// Generators (g1, g2) of the normalized lattice sqrt(2pi/Im tau)(Z + tau Z).
/// The cell area |Im(conj(g1) g2)| equals 2 pi.
inline std::pair<cplx, cplx> normalized_lattice(const LatticeShape& shape) {
  shape.validate();
  const double g1 = std::sqrt(2.0 * pi / shape.tau.imag());
  return {cplx(g1, 0.0), shape.tau * g1};
}

/// Cocycle constant c_s = pi n p q (mod 2pi) for s = g1 p + g2 q.
inline double cocycle_constant(long long p, long long q, long long n) {
  const long long npq = ((n * p * q) % 2 + 2) % 2;  // pi*n*p*q mod 2pi depends on parity only
  return npq == 0 ? 0.0 : pi;
}

/// Critical coupling kappa_c = sqrt((1 - 1/beta)/2), defined for beta >= 1.
inline double kappa_c(double beta) {
  if (beta < 1.0) throw std::domain_error("kappa_c: beta must be >= 1");
  return std::sqrt(0.5 * (1.0 - 1.0 / beta));
}

/// Coupling constant, average field and the rescaled spectral parameter.
struct PhysicalParams {
  double kappa = 1.0;
  double b = 1.0;
  int n = 1;

  double lambda() const { return kappa * kappa * double(n) / b; }
  double cell_area() const { return 2.0 * pi * double(n) / b; }
  /// Scale r' = sqrt(n/b) relating the physical lattice to the normalized one.
  double rescale_factor() const { return std::sqrt(double(n) / b); }
};

/// Voronoi cell of a 2D lattice around the origin, with the half-open boundary
/// convention: the left-most edges and the vertices joining two owned edges are
/// part of the cell, so that translates tile the plane exactly.
class WignerSeitzCell {
 public:
  WignerSeitzCell() = default;
  WignerSeitzCell(cplx w1, cplx w2);

  const std::vector<cplx>& vertices() const { return verts_; }
  const std::vector<bool>& edge_owned() const { return edge_owned_; }
  const std::vector<bool>& vertex_owned() const { return vert_owned_; }
  cplx generator(int i) const { return i == 0 ? w1_ : w2_; }
  double diameter() const { return diameter_; }
  double inradius() const { return inradius_; }
  double boundary_tol() const { return tol_; }

  /// Half-open membership test honoring the owned-boundary convention.
  bool contains(cplx z) const;
  /// Signed distance to the cell: max over edges of the outward offset
  /// (negative inside, ~0 on the boundary).
  double signed_distance(cplx z) const;
  /// Unique representative of z modulo the lattice lying in the owned cell.
  cplx canonicalize(cplx z) const;
  /// Reduce z modulo the lattice to the representative with coordinates in [-1/2,1/2).
  cplx reduce(cplx z) const;

 private:
  cplx w1_, w2_;
  std::vector<cplx> verts_;       // CCW order
  std::vector<cplx> edge_vec_;    // lattice vector defining edge i (verts i -> i+1)
  std::vector<bool> edge_owned_;
  std::vector<bool> vert_owned_;
  double diameter_ = 0.0, inradius_ = 0.0, tol_ = 0.0;
};

WignerSeitzCell wigner_seitz(cplx w1, cplx w2);

/// Wigner-Seitz cell of Z + tau Z (the coordinates theta functions live in).
inline WignerSeitzCell wigner_seitz(const LatticeShape& shape) {
  shape.validate();
  return wigner_seitz(cplx(1.0, 0.0), shape.tau);
}

}  // namespace glv
