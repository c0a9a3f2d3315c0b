// SPDX-License-Identifier: Apache-2.0
#include "glv/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace glv {

cplx reduce_to_fundamental_domain(cplx tau, Sl2Matrix& used) {
  if (!(tau.imag() > 0.0)) throw std::domain_error("reduce_to_fundamental_domain: Im tau <= 0");
  used = Sl2Matrix{};
  const int max_iter = 1000;
  for (int it = 0; it < max_iter; ++it) {
    const double kshift = std::round(tau.real());
    if (kshift != 0.0) {
      tau -= kshift;
      used = Sl2Matrix{1, -(long long)kshift, 0, 1}.compose(used);
    }
    if (std::norm(tau) < 1.0 - 1e-15) {
      tau = -1.0 / tau;
      used = Sl2Matrix{0, -1, 1, 0}.compose(used);
    } else {
      break;
    }
  }
  // Canonical boundary representatives: Re tau = -1/2 -> +1/2, and on |tau| = 1
  // pick the half with Re tau >= 0.
  if (std::abs(tau.real() + 0.5) < 1e-14) {
    tau += 1.0;
    used = Sl2Matrix{1, 1, 0, 1}.compose(used);
  }
  if (std::abs(std::norm(tau) - 1.0) < 1e-14 && tau.real() < -1e-14) {
    tau = -1.0 / tau;
    used = Sl2Matrix{0, -1, 1, 0}.compose(used);
  }
  return tau;
}

namespace {

struct HalfPlane {
  cplx t;  // lattice vector; constraint Re(conj(t) z) <= |t|^2 / 2
  double off;
};

// Sutherland-Hodgman clip of a convex polygon against Re(conj(t) z) <= off.
std::vector<cplx> clip(const std::vector<cplx>& poly, const HalfPlane& hp) {
  std::vector<cplx> out;
  const auto side = [&](cplx z) { return std::real(std::conj(hp.t) * z) - hp.off; };
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const cplx a = poly[i], b = poly[(i + 1) % m];
    const double sa = side(a), sb = side(b);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      out.push_back(a + (b - a) * (sa / (sa - sb)));
    }
  }
  return out;
}

}  // namespace

WignerSeitzCell::WignerSeitzCell(cplx w1, cplx w2) : w1_(w1), w2_(w2) {
  if (std::abs(std::imag(std::conj(w1) * w2)) <= 0.0)
    throw std::domain_error("WignerSeitzCell: generators are collinear");

  std::vector<HalfPlane> planes;
  for (int p = -2; p <= 2; ++p)
    for (int q = -2; q <= 2; ++q) {
      if (p == 0 && q == 0) continue;
      const cplx t = double(p) * w1 + double(q) * w2;
      planes.push_back({t, 0.5 * std::norm(t)});
    }

  const double big = 8.0 * (std::abs(w1) + std::abs(w2));
  std::vector<cplx> poly = {{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  for (const auto& hp : planes) poly = clip(poly, hp);

  // Drop duplicate / collinear vertices produced by the clipping.
  const double scale = std::abs(w1) + std::abs(w2);
  tol_ = 1e-10 * scale;
  std::vector<cplx> cleaned;
  for (const cplx& v : poly) {
    if (cleaned.empty() || std::abs(v - cleaned.back()) > tol_) cleaned.push_back(v);
  }
  while (cleaned.size() > 1 && std::abs(cleaned.front() - cleaned.back()) <= tol_)
    cleaned.pop_back();
  std::vector<cplx> verts;
  const std::size_t m = cleaned.size();
  for (std::size_t i = 0; i < m; ++i) {
    const cplx a = cleaned[(i + m - 1) % m], b = cleaned[i], c = cleaned[(i + 1) % m];
    if (std::abs(std::imag(std::conj(b - a) * (c - b))) > tol_ * tol_) verts.push_back(b);
  }
  verts_ = verts;

  // Ensure CCW orientation.
  double area2 = 0.0;
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    const cplx a = verts_[i], b = verts_[(i + 1) % verts_.size()];
    area2 += a.real() * b.imag() - a.imag() * b.real();
  }
  if (area2 < 0.0) std::reverse(verts_.begin(), verts_.end());

  // Recover, for each edge, the lattice vector whose bisector carries it.
  edge_vec_.resize(verts_.size());
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    const cplx mid = 0.5 * (verts_[i] + verts_[(i + 1) % verts_.size()]);
    double best = 1e300;
    cplx bt;
    for (const auto& hp : planes) {
      const double d = std::abs(std::real(std::conj(hp.t) * mid) - hp.off);
      if (d < best) {
        best = d;
        bt = hp.t;
      }
    }
    edge_vec_[i] = bt;
  }

  // Ownership: an edge is owned when its outward normal points left, or (for the
  // square cell) straight down; a vertex is owned when both adjacent edges are.
  edge_owned_.resize(verts_.size());
  vert_owned_.resize(verts_.size());
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    const cplx nrm = edge_vec_[i] / std::abs(edge_vec_[i]);
    edge_owned_[i] = nrm.real() < -1e-12 || (std::abs(nrm.real()) <= 1e-12 && nrm.imag() < 0.0);
  }
  for (std::size_t i = 0; i < verts_.size(); ++i) {
    const std::size_t prev = (i + verts_.size() - 1) % verts_.size();
    vert_owned_[i] = edge_owned_[prev] && edge_owned_[i];
  }

  for (const cplx& v : verts_) diameter_ = std::max(diameter_, 2.0 * std::abs(v));
  inradius_ = 1e300;
  for (const cplx& t : edge_vec_) inradius_ = std::min(inradius_, 0.5 * std::abs(t));
}

double WignerSeitzCell::signed_distance(cplx z) const {
  double d = -1e300;
  for (const cplx& t : edge_vec_)
    d = std::max(d, std::real(std::conj(t) * z) / std::abs(t) - 0.5 * std::abs(t));
  return d;
}

bool WignerSeitzCell::contains(cplx z) const {
  const double d = signed_distance(z);
  if (d > tol_) return false;
  if (d < -tol_) return true;
  // Boundary point: vertex rule first, then the edge rule.
  for (std::size_t i = 0; i < verts_.size(); ++i)
    if (std::abs(z - verts_[i]) <= 2.0 * tol_) return vert_owned_[i];
  for (std::size_t i = 0; i < edge_vec_.size(); ++i) {
    const cplx t = edge_vec_[i];
    if (std::abs(std::real(std::conj(t) * z) / std::abs(t) - 0.5 * std::abs(t)) <= tol_)
      return edge_owned_[i];
  }
  return false;  // unreachable for consistent inputs
}

cplx WignerSeitzCell::reduce(cplx z) const {
  // Coordinates of z in the (w1, w2) basis.
  Eigen::Matrix2d A;
  A << w1_.real(), w2_.real(), w1_.imag(), w2_.imag();
  Eigen::Vector2d c = A.inverse() * Eigen::Vector2d(z.real(), z.imag());
  c[0] -= std::round(c[0]);
  c[1] -= std::round(c[1]);
  return c[0] * w1_ + c[1] * w2_;
}

cplx WignerSeitzCell::canonicalize(cplx z) const {
  z = reduce(z);
  cplx best = z;
  double best_d = 1e300;
  for (int p = -1; p <= 1; ++p)
    for (int q = -1; q <= 1; ++q) {
      const cplx cand = z + double(p) * w1_ + double(q) * w2_;
      const double d = signed_distance(cand);
      if (d <= tol_ && contains(cand)) return cand;
      if (d < best_d) {
        best_d = d;
        best = cand;
      }
    }
  return best;  // z was within roundoff of the boundary; closest candidate wins
}

WignerSeitzCell wigner_seitz(cplx w1, cplx w2) { return WignerSeitzCell(w1, w2); }

}  // namespace glv
