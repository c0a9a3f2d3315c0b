// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include <Eigen/Dense>

#include "glv/lattice.hpp"

namespace glv {

/// Gauss-Legendre nodes and weights on [-1/2, 1/2].
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre_half(int order) {
  Eigen::VectorXd x(order), w(order);
  for (int i = 0; i < order; ++i) {
    // Newton from the Chebyshev estimate on [-1, 1].
    double t = std::cos(pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t / 2.0;
    w[i] = 1.0 / ((1.0 - t * t) * pp * pp);
  }
  return {x, w};
}

/// Tensor-product Gauss-Legendre grid over one lattice cell
/// {s g1 + t g2 : s, t in [-1/2, 1/2]}, flattened to arrays.
class CellQuadrature {
 public:
  CellQuadrature() = default;
  CellQuadrature(cplx g1, cplx g2, int order) : g1_(g1), g2_(g2), order_(order) {
    const auto [xs, ws] = gauss_legendre_half(order);
    const int N = order * order;
    s_.resize(N);
    t_.resize(N);
    w_.resize(N);
    x1_.resize(N);
    x2_.resize(N);
    area_ = std::abs(std::imag(std::conj(g1) * g2));
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j) {
        const int p = i * order + j;
        s_[p] = xs[i];
        t_[p] = xs[j];
        w_[p] = ws[i] * ws[j] * area_;
        const cplx x = xs[i] * g1 + xs[j] * g2;
        x1_[p] = x.real();
        x2_[p] = x.imag();
      }
  }

  int size() const { return int(w_.size()); }
  int order() const { return order_; }
  double area() const { return area_; }
  cplx g1() const { return g1_; }
  cplx g2() const { return g2_; }
  const Eigen::ArrayXd& x1() const { return x1_; }
  const Eigen::ArrayXd& x2() const { return x2_; }
  const Eigen::ArrayXd& weights() const { return w_; }

  /// Complex physical coordinate x1 + i x2 of every node.
  Eigen::ArrayXcd nodes() const { return x1_.cast<cplx>() + cplx(0, 1) * x2_.cast<cplx>(); }

  template <typename A>
  auto integrate(const A& f) const {
    return (w_.template cast<typename A::Scalar>() * f).sum();
  }
  /// L2 inner product <f, g> = int conj(f) g over the cell.
  cplx inner(const Eigen::ArrayXcd& f, const Eigen::ArrayXcd& g) const {
    return (w_.cast<cplx>() * f.conjugate() * g).sum();
  }
  double inner(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g) const {
    return (w_ * f * g).sum();
  }

 private:
  cplx g1_{1.0, 0.0}, g2_{0.0, 1.0};
  int order_ = 0;
  double area_ = 0.0;
  Eigen::ArrayXd s_, t_, w_, x1_, x2_;
};

}  // namespace glv
