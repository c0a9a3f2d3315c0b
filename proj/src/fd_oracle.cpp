// SPDX-License-Identifier: Apache-2.0
#include "glv/fd_oracle.hpp"

#include <random>

#include <Eigen/SparseLU>

namespace glv {

namespace {
constexpr cplx I{0.0, 1.0};

// Covariant hop by dirvec = g/N in grid direction (ds, dt), with the
// gauge-periodic wrap multipliers folded into the link phase.
Eigen::SparseMatrix<cplx> hop(const MagneticCell& cell, int N, const cplx dirvec, int ds,
                              int dt) {
  const int n = cell.shape.n;
  const auto wedge = [](cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); };
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(std::size_t(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const cplx x = (double(i) * cell.g1 + double(j) * cell.g2) / double(N);
      double phase = -0.5 * n * wedge(x, dirvec);  // Peierls: -int a^n . dl
      int i2 = i + ds, j2 = j + dt;
      cplx xt = x + dirvec;
      double wrap = 0.0;
      const auto xJt = [](cplx y, cplx t) { return y.real() * (-t.imag()) + y.imag() * t.real(); };
      while (i2 >= N) {
        i2 -= N;
        xt -= cell.g1;
        wrap += 0.5 * n * xJt(xt, cell.g1);
      }
      while (i2 < 0) {
        i2 += N;
        wrap -= 0.5 * n * xJt(xt, cell.g1);
        xt += cell.g1;
      }
      while (j2 >= N) {
        j2 -= N;
        xt -= cell.g2;
        wrap += 0.5 * n * xJt(xt, cell.g2);
      }
      while (j2 < 0) {
        j2 += N;
        wrap -= 0.5 * n * xJt(xt, cell.g2);
        xt += cell.g2;
      }
      trips.emplace_back(i * N + j, i2 * N + j2, std::exp(I * (phase + wrap)));
    }
  Eigen::SparseMatrix<cplx> T(N * N, N * N);
  T.setFromTriplets(trips.begin(), trips.end());
  return T;
}
}  // namespace

Eigen::SparseMatrix<cplx> fd_magnetic_laplacian(const MagneticCell& cell, int N) {
  Eigen::Matrix2d G;
  G << std::norm(cell.g1), (std::conj(cell.g1) * cell.g2).real(),
      (std::conj(cell.g1) * cell.g2).real(), std::norm(cell.g2);
  const Eigen::Matrix2d Gi = G.inverse();
  const double hs = 1.0 / N, ht = 1.0 / N;

  const auto Ts = hop(cell, N, cell.g1 / double(N), 1, 0);
  const auto Tt = hop(cell, N, cell.g2 / double(N), 0, 1);
  Eigen::SparseMatrix<cplx> Id(N * N, N * N);
  Id.setIdentity();

  Eigen::SparseMatrix<cplx> TsH = Eigen::SparseMatrix<cplx>(Ts.adjoint());
  Eigen::SparseMatrix<cplx> TtH = Eigen::SparseMatrix<cplx>(Tt.adjoint());
  Eigen::SparseMatrix<cplx> D2s = (Ts + TsH - 2.0 * Id) / (hs * hs);
  Eigen::SparseMatrix<cplx> D2t = (Tt + TtH - 2.0 * Id) / (ht * ht);
  Eigen::SparseMatrix<cplx> Ds = (Ts - TsH) / (2.0 * hs);
  Eigen::SparseMatrix<cplx> Dt = (Tt - TtH) / (2.0 * ht);

  Eigen::SparseMatrix<cplx> A =
      (-Gi(0, 0)) * D2s + (-Gi(1, 1)) * D2t + (-Gi(0, 1)) * (Ds * Dt + Dt * Ds);
  Eigen::SparseMatrix<cplx> AH = Eigen::SparseMatrix<cplx>(A.adjoint());
  return 0.5 * (A + AH);
}

Eigen::VectorXd fd_landau_eigenvalues(const MagneticCell& cell, int N, int count) {
  const auto A = fd_magnetic_laplacian(cell, N);
  const int dim = int(A.rows());
  const int w = std::min(dim, count + std::max(8, count / 2));

  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("fd_landau_eigenvalues: sparse factorization failed");

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd S(dim, w);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < w; ++j) S(i, j) = cplx(g(rng), g(rng));

  Eigen::VectorXd prev = Eigen::VectorXd::Constant(count, 1e300);
  Eigen::VectorXd ritz(count);
  for (int it = 0; it < 100; ++it) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(S);
    Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, w);
    Eigen::MatrixXcd AQ = A * Q;
    Eigen::MatrixXcd H = Q.adjoint() * AQ;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint()));
    ritz = es.eigenvalues().head(count);
    const double change = (ritz - prev).cwiseAbs().maxCoeff() /
                          std::max(1.0, ritz.cwiseAbs().maxCoeff());
    if (change < 1e-13 && it > 3) break;
    prev = ritz;
    S = lu.solve(Q);
  }
  return ritz;
}

Eigen::VectorXd fd_landau_eigenvalues_richardson(const MagneticCell& cell,
                                                 const std::vector<int>& grids, int count) {
  const int G = int(grids.size());
  if (G < 3) throw std::domain_error("richardson: need at least 3 grids");
  Eigen::MatrixXd vals(G, count);
  for (int g = 0; g < G; ++g) vals.row(g) = fd_landau_eigenvalues(cell, grids[g], count);
  // Fit lambda(h) = a0 + a1 h^2 + a2 h^4 and read off a0.
  Eigen::MatrixXd V(G, 3);
  for (int g = 0; g < G; ++g) {
    const double u = 1.0 / (double(grids[g]) * grids[g]);
    V(g, 0) = 1.0;
    V(g, 1) = u;
    V(g, 2) = u * u;
  }
  Eigen::VectorXd out(count);
  for (int m = 0; m < count; ++m) {
    Eigen::VectorXd a = V.colPivHouseholderQr().solve(vals.col(m));
    out[m] = a[0];
  }
  return out;
}

Eigen::VectorXcd fd_sample(const MagneticCell& cell, int N,
                           const std::function<cplx(cplx)>& psi) {
  Eigen::VectorXcd v(N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      v[i * N + j] = psi((double(i) * cell.g1 + double(j) * cell.g2) / double(N));
  return v;
}

}  // namespace glv
