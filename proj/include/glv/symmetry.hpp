// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glv/theta.hpp"

namespace glv {

/// The rotation operator T_{n,k} on V_n in the theta_{n,m} basis:
/// (T theta)(z) = e^{(C/2)(xi_k^2 - 1) z^2} theta(xi_k z), xi_k = e^{2 pi i/k},
/// C = pi n / Im tau. Unitary in the Gram metric with T^k = 1; an eigenvector
/// for xi_k^r has a zero of order r (mod k) at the origin.
struct RotationOperator {
  int n = 0, k = 0;
  cplx tau;
  Eigen::MatrixXcd T;          // theta-basis matrix
  Eigen::MatrixXcd T_unitary;  // after Gram orthonormalization
  Eigen::MatrixXcd gram_half, gram_half_inv;
  double collocation_residual = 0.0;

  /// Eigenvectors (as theta coefficient vectors) for eigenvalue xi_k^r.
  std::vector<Eigen::VectorXcd> sector_basis(int r, double tol = 1e-8) const;
};

/// Builds T_{n,k} by collocation. Throws when the rotation is incompatible with
/// the lattice (or n is odd for k in {3,6}) — the collocation residual exceeds
/// 1e-8 in that case.
RotationOperator rotation_matrix_T(int n, int k, cplx tau);

/// Gram matrix of the theta basis in the metric inherited from L2 wave
/// functions: weight e^{-2 C (Im z)^2}, C = pi n / Im tau, over one cell.
Eigen::MatrixXcd theta_weighted_gram(int n, cplx tau);

/// dim V_{n,k,r} by singular-value counting on (T_unitary - xi^r I), threshold
/// 1e-8 with an ambiguity guard band.
int dim_V(int n, int k, int r, cplx tau);
int dim_V(const RotationOperator& op, int r);

/// One solution of the orbit-degree identity m1 + 2 m2 + 3 m3 + 6 m6 = n with
/// m1 = r (mod 6): multiplicities at the origin, the vertex orbit, the
/// edge-midpoint orbit and free C_6 orbits. (The paper prints the midpoint
/// coefficient as 2; its own index count gives 3, which is what the eigenspace
/// dimensions confirm.)
struct OrbitDiagram {
  int m1 = 0, m2 = 0, m3 = 0, m6 = 0;
  std::vector<cplx> vertex_orbit;    // index-2 representatives
  std::vector<cplx> midpoint_orbit;  // index-3 representatives
};

std::vector<OrbitDiagram> enumerate_divisor_diagrams(int n, int k, int r);

/// Dimension of V^div_{n,6,r} as a divisor variety: 1 + max number of free
/// orbits over the diagrams (0 when no diagram exists). Matches dim_V via the
/// Div bijection.
int diagram_dimension(int n, int k, int r);

/// A formal product theta_0^{e0} theta_1^{e1} theta_2^{e2} of the three
/// generator functions (vertex pair / Wronskian quartic / double zero at 0).
struct SpanningProduct {
  int e0 = 0, e1 = 0, e2 = 0;
  std::string label() const;
  int degree() const { return 2 * e0 + 4 * e1 + 2 * e2; }
  int origin_order() const { return e1 + 2 * e2; }
};

/// The three generators on the hexagonal lattice.
ThetaElement hex_generator_theta0(cplx tau);
ThetaElement hex_generator_theta1(cplx tau);
ThetaElement hex_generator_theta2(cplx tau);

/// Table of spanning products for V_{n,6,r}, n <= 10 even. The (4,2) entry is
/// used as theta_0 theta_2 (the printed theta_0 theta_1 has degree 6, not 4).
std::vector<SpanningProduct> spanning_products(int n, int r);

/// Realized spanning elements, each verified to lie in the xi_6^r eigenspace of
/// T_{n,6} to 1e-8 (negative exponents go through quotient_check).
std::vector<ThetaElement> spanning_theta(int n, int r, cplx tau);

/// True when no finer lattice L' with [L':L] dividing n admits the lifted wave
/// function as a gauge-periodic state. Fast path: the origin zero order differs
/// from the order at every other divisor point.
bool irreducible(const ThetaElement& theta, const LatticeShape& shape);

struct ClassificationRow {
  int n = 0, r = 0;
  int dim = 0;           // eigenspace dimension
  int diagram_dim = 0;   // from the divisor diagrams
  int spanning_count = 0;
  std::vector<std::string> spanning;  // labels of realized spanning products
  bool spanning_verified = false;     // all products lie in (and span) the eigenspace
};

struct ClassificationReport {
  std::vector<ClassificationRow> rows;
  bool one_dim_list_matches = false;  // the theorem's dim-1 pair list
  bool diagrams_match = false;        // diagram_dim == dim everywhere
  std::vector<std::string> findings;  // discrepancies against the printed tables
};

/// Full classification for even n <= n_max on the hexagonal lattice.
ClassificationReport classification_table(int n_max);

}  // namespace glv
