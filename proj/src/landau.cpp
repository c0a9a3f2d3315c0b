// SPDX-License-Identifier: Apache-2.0
#include "glv/landau.hpp"

#include <algorithm>
#include <cmath>

namespace glv {

namespace {
constexpr cplx I{0.0, 1.0};

Eigen::VectorXcd poly_der(const Eigen::VectorXcd& p) {
  if (p.size() <= 1) return Eigen::VectorXcd::Zero(1);
  Eigen::VectorXcd d(p.size() - 1);
  for (int i = 1; i < p.size(); ++i) d[i - 1] = double(i) * p[i];
  return d;
}

cplx poly_eval(const Eigen::VectorXcd& p, cplx v) {
  cplx acc = 0.0;
  for (int i = int(p.size()) - 1; i >= 0; --i) acc = acc * v + p[i];
  return acc;
}
}  // namespace

LadderEvaluator::LadderEvaluator(const MagneticCell& cell, ThetaElement seed, int m_max)
    : cell_(cell), seed_(std::move(seed)), m_max_(m_max) {
  const int n = cell_.shape.n;
  if (seed_.degree() != n) throw std::domain_error("LadderEvaluator: seed degree != n");
  const cplx tau = cell_.shape.tau;
  trunc_ = std::max(seed_.trunc(), default_trunc(n, tau.imag(), 1.2));
  Cl_.resize(2 * trunc_ + 1);
  for (int l = -trunc_; l <= trunc_; ++l) {
    const cplx cm = seed_.coeffs()[((l % n) + n) % n];
    Cl_[l + trunc_] = cm * std::exp(I * pi * tau * double(l) * double(l) / double(n));
  }
  // p_{m,i}(v): (d-bar*)^m on f_n h gives h -> sum_i p_{m,i}(v) Theta_i with
  // p_{m+1,i} = 2 p'_{m,i} + n v p_{m,i} - 2 p_{m,i-1}, v = wbar - w.
  poly_.assign(m_max_ + 1, std::vector<Eigen::VectorXcd>());
  poly_[0] = {Eigen::VectorXcd::Ones(1)};
  for (int m = 1; m <= m_max_; ++m) {
    poly_[m].assign(m + 1, Eigen::VectorXcd());
    for (int i = 0; i <= m; ++i) {
      Eigen::VectorXcd p = Eigen::VectorXcd::Zero(m + 1);
      if (i < m) {
        const auto& pm = poly_[m - 1][i];
        const auto d = poly_der(pm);
        for (int j = 0; j < d.size(); ++j) p[j] += 2.0 * d[j];
        for (int j = 0; j < pm.size(); ++j) p[j + 1] += double(n) * pm[j];
      }
      if (i >= 1) {
        const auto& pm1 = poly_[m - 1][i - 1];
        for (int j = 0; j < pm1.size(); ++j) p[j] += -2.0 * pm1[j];
      }
      poly_[m][i] = p;
    }
  }
}

LadderEvaluator::Val LadderEvaluator::eval(int level, cplx x) const {
  const int n = cell_.shape.n;
  const double c = cell_.c;
  const cplx w = x;
  const cplx z = w / c;

  // Theta_i = (d/dw)^i theta(w/c), i <= level+1, in one sweep over the series.
  std::vector<cplx> TH(level + 2, 0.0);
  for (int l = -trunc_; l <= trunc_; ++l) {
    const cplx base = Cl_[l + trunc_] * std::exp(2.0 * pi * I * double(l) * z);
    if (base == cplx(0.0)) continue;
    cplx fac = 1.0;
    const cplx step = 2.0 * pi * I * double(l) / c;
    for (int i = 0; i <= level + 1; ++i) {
      TH[i] += fac * base;
      fac *= step;
    }
  }

  const cplx v = std::conj(w) - w;  // -2 i x2
  cplx h = 0.0, hw = 0.0, hwb = 0.0;
  for (int i = 0; i <= level; ++i) {
    const auto& p = poly_[level][i];
    const cplx pv = poly_eval(p, v);
    const cplx dpv = poly_eval(poly_der(p), v);
    h += pv * TH[i];
    hw += -dpv * TH[i] + pv * TH[i + 1];
    hwb += dpv * TH[i];
  }
  const double x2 = w.imag();
  const cplx fn = std::exp(0.5 * I * double(n) * x2 * w);
  const cplx dlog_w = 0.25 * double(n) * (2.0 * w - std::conj(w));
  const cplx dlog_wb = -0.25 * double(n) * w;
  const cplx val = fn * h;
  const cplx dw = fn * (dlog_w * h + hw);
  const cplx dwb = fn * (dlog_wb * h + hwb);
  return {val, dw + dwb, I * (dw - dwb)};
}

LandauBasis::LandauBasis(const MagneticCell& cell, const std::vector<ThetaElement>& lll_seeds,
                         int m_max, const CellQuadrature& quad)
    : cell_(cell), quad_(&quad), m_max_(m_max) {
  if (lll_seeds.empty()) throw std::domain_error("LandauBasis: no LLL seeds");
  for (const auto& s : lll_seeds)
    evals_.push_back(std::make_shared<LadderEvaluator>(cell, s, m_max));

  const int P = quad.size();
  const int ns = int(evals_.size());
  const int n = cell_.shape.n;

  // Raw grid caches per (seed, level).
  std::vector<std::vector<BasisFunction>> raw(m_max + 1, std::vector<BasisFunction>(ns));
  for (int s = 0; s < ns; ++s) {
    for (int m = 0; m <= m_max; ++m) {
      auto& bf = raw[m][s];
      bf.level = m;
      bf.seed = s;
      bf.eigenvalue = double((2 * m + 1) * n);
      bf.val.resize(P);
      bf.D1.resize(P);
      bf.D2.resize(P);
    }
    for (int p = 0; p < P; ++p) {
      const cplx x(quad.x1()[p], quad.x2()[p]);
      for (int m = 0; m <= m_max; ++m) {
        const auto v = evals_[s]->eval(m, x);
        const auto a = cell_.an(x.real(), x.imag());
        raw[m][s].val[p] = v.val;
        raw[m][s].D1[p] = v.d1 - I * a[0] * v.val;
        raw[m][s].D2[p] = v.d2 - I * a[1] * v.val;
      }
    }
  }

  // Per-level Gram orthonormalization (levels are exactly orthogonal).
  mix_.resize(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    Eigen::MatrixXcd G(ns, ns);
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b) G(a, b) = quad.inner(raw[m][a].val, raw[m][b].val);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()));
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw std::runtime_error("LandauBasis: degenerate Gram matrix (seeds dependent)");
    Eigen::MatrixXcd ghalf_inv = es.eigenvectors() *
                                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                 es.eigenvectors().adjoint();
    mix_[m] = ghalf_inv;
    for (int b = 0; b < ns; ++b) {
      BasisFunction bf;
      bf.level = m;
      bf.seed = b;
      bf.eigenvalue = double((2 * m + 1) * n);
      bf.val = Eigen::ArrayXcd::Zero(P);
      bf.D1 = Eigen::ArrayXcd::Zero(P);
      bf.D2 = Eigen::ArrayXcd::Zero(P);
      for (int a = 0; a < ns; ++a) {
        bf.val += ghalf_inv(a, b) * raw[m][a].val;
        bf.D1 += ghalf_inv(a, b) * raw[m][a].D1;
        bf.D2 += ghalf_inv(a, b) * raw[m][a].D2;
      }
      fns_.push_back(std::move(bf));
    }
  }
}

LandauBasis LandauBasis::full(const MagneticCell& cell, int m_max, const CellQuadrature& quad) {
  std::vector<ThetaElement> seeds;
  for (int m = 0; m < cell.shape.n; ++m)
    seeds.push_back(ThetaElement::basis_element(cell.shape.n, m, cell.shape.tau));
  return LandauBasis(cell, seeds, m_max, quad);
}

Eigen::MatrixXcd LandauBasis::gram() const {
  const int N = size();
  Eigen::MatrixXcd G(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) G(a, b) = quad_->inner(fns_[a].val, fns_[b].val);
  return G;
}

Eigen::ArrayXcd LandauBasis::field(const Eigen::VectorXcd& coeffs) const {
  Eigen::ArrayXcd f = Eigen::ArrayXcd::Zero(quad_->size());
  for (int a = 0; a < size(); ++a) f += coeffs[a] * fns_[a].val;
  return f;
}
Eigen::ArrayXcd LandauBasis::field_D1(const Eigen::VectorXcd& coeffs) const {
  Eigen::ArrayXcd f = Eigen::ArrayXcd::Zero(quad_->size());
  for (int a = 0; a < size(); ++a) f += coeffs[a] * fns_[a].D1;
  return f;
}
Eigen::ArrayXcd LandauBasis::field_D2(const Eigen::VectorXcd& coeffs) const {
  Eigen::ArrayXcd f = Eigen::ArrayXcd::Zero(quad_->size());
  for (int a = 0; a < size(); ++a) f += coeffs[a] * fns_[a].D2;
  return f;
}

LadderEvaluator::Val LandauBasis::eval_at(const Eigen::VectorXcd& coeffs, cplx x) const {
  const int ns = seeds();
  LadderEvaluator::Val out{0.0, 0.0, 0.0};
  const auto a = cell_.an(x.real(), x.imag());
  for (int m = 0; m <= m_max_; ++m) {
    // Column b of mix_[m] holds the seed combination of orthonormal function b.
    std::vector<LadderEvaluator::Val> seed_vals(ns);
    for (int s = 0; s < ns; ++s) seed_vals[s] = evals_[s]->eval(m, x);
    for (int b = 0; b < ns; ++b) {
      const cplx cb = coeffs[m * ns + b];
      if (cb == cplx(0.0)) continue;
      for (int s = 0; s < ns; ++s) {
        const cplx f = cb * mix_[m](s, b);
        out.val += f * seed_vals[s].val;
        out.d1 += f * seed_vals[s].d1;
        out.d2 += f * seed_vals[s].d2;
      }
    }
  }
  // Return covariant gradient like the grid caches do.
  out.d1 = out.d1 - I * a[0] * out.val;
  out.d2 = out.d2 - I * a[1] * out.val;
  return out;
}

cplx lll_from_theta(const ThetaElement& theta, const MagneticCell& cell, cplx x) {
  const cplx z = x / cell.c;
  const cplx fn = std::exp(0.5 * I * double(cell.shape.n) * x.imag() * x);
  return fn * theta.eval(z);
}

double gauge_periodicity_residual(const ThetaElement& theta, const MagneticCell& cell, cplx x,
                                  int p, int q) {
  const cplx t = double(p) * cell.g1 + double(q) * cell.g2;
  const double ct = cocycle_constant(p, q, cell.shape.n);
  const double xJt = x.real() * (-t.imag()) + x.imag() * t.real();
  const cplx lhs = lll_from_theta(theta, cell, x + t);
  const cplx rhs = std::exp(I * (0.5 * cell.shape.n * xJt + ct)) * lll_from_theta(theta, cell, x);
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

// ---------------------------------------------------------------------------
// Alpha modes
// ---------------------------------------------------------------------------

Eigen::Vector2d AlphaMode::eval(double x1, double x2) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (const auto& t : terms) {
    const double kn = t.K.norm();
    const Eigen::Vector2d kperp(-t.K[1] / kn, t.K[0] / kn);
    v += t.w * kperp * std::sin(t.K[0] * x1 + t.K[1] * x2);
  }
  return v;
}

double AlphaMode::eval_curl(double x1, double x2) const {
  double c = 0.0;
  for (const auto& t : terms) c += t.w * t.K.norm() * std::cos(t.K[0] * x1 + t.K[1] * x2);
  return c;
}

namespace {
void cache_mode(AlphaMode& m, const CellQuadrature& quad) {
  const int P = quad.size();
  m.v1.resize(P);
  m.v2.resize(P);
  m.curlv.resize(P);
  for (int p = 0; p < P; ++p) {
    const auto v = m.eval(quad.x1()[p], quad.x2()[p]);
    m.v1[p] = v[0];
    m.v2[p] = v[1];
    m.curlv[p] = m.eval_curl(quad.x1()[p], quad.x2()[p]);
  }
}
}  // namespace

AlphaBasis::AlphaBasis(const MagneticCell& cell, int shells, const CellQuadrature& quad)
    : quad_(&quad) {
  const double c = cell.c;
  const cplx tau = cell.shape.tau;
  const Eigen::Vector2d b1(2.0 * pi / c, -2.0 * pi / c * tau.real() / tau.imag());
  const Eigen::Vector2d b2(0.0, 2.0 * pi / (c * tau.imag()));
  double kmin = std::min(b1.norm(), b2.norm());
  const int rng = 2 * shells + 2;
  for (int p = -rng; p <= rng; ++p)
    for (int q = -rng; q <= rng; ++q) {
      if (p == 0 && q == 0) continue;
      const Eigen::Vector2d K = double(p) * b1 + double(q) * b2;
      kmin = std::min(kmin, K.norm());
    }
  const double amp = std::sqrt(2.0 / quad.area());
  for (int p = -rng; p <= rng; ++p)
    for (int q = -rng; q <= rng; ++q) {
      if (p == 0 && q == 0) continue;
      if (!(q > 0 || (q == 0 && p > 0))) continue;  // one per +-K pair
      const Eigen::Vector2d K = double(p) * b1 + double(q) * b2;
      if (K.norm() > shells * kmin + 1e-9) continue;
      AlphaMode m;
      m.terms.push_back({K, amp});
      m.k2 = K.squaredNorm();
      cache_mode(m, quad);
      modes_.push_back(std::move(m));
    }
  std::sort(modes_.begin(), modes_.end(),
            [](const AlphaMode& a, const AlphaMode& b) { return a.k2 < b.k2; });
}

AlphaBasis AlphaBasis::symmetrized(int k) const {
  const double th = 2.0 * pi / k;
  Eigen::Matrix2d R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  std::vector<bool> used(modes_.size(), false);
  AlphaBasis out;
  out.quad_ = quad_;
  const auto find_mode = [&](const Eigen::Vector2d& K) -> int {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      const auto& K0 = modes_[i].terms[0].K;
      if ((K0 - K).norm() < 1e-9 || (K0 + K).norm() < 1e-9) return int(i);
    }
    return -1;
  };
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (used[i]) continue;
    // Collect the C_k orbit of the representative wavevector.
    std::vector<int> orbit;
    Eigen::Vector2d K = modes_[i].terms[0].K;
    bool complete = true;
    for (int j = 0; j < k; ++j) {
      const int idx = find_mode(K);
      if (idx < 0) {
        complete = false;
        break;
      }
      if (std::find(orbit.begin(), orbit.end(), idx) == orbit.end()) orbit.push_back(idx);
      K = R * K;
    }
    if (!complete) {
      for (int idx : orbit) used[idx] = true;  // orbit leaves the cutoff ball; drop it
      continue;
    }
    AlphaMode m;
    m.k2 = modes_[i].k2;
    const double w = 1.0 / std::sqrt(double(orbit.size()));
    for (int idx : orbit) {
      used[idx] = true;
      m.parts.push_back({idx, w});
      for (const auto& t : modes_[idx].terms) m.terms.push_back({t.K, w * t.w});
    }
    cache_mode(m, *quad_);
    out.modes_.push_back(std::move(m));
  }
  return out;
}

Eigen::ArrayXd AlphaBasis::field1(const Eigen::VectorXd& coeffs) const {
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(quad_->size());
  for (int i = 0; i < size(); ++i) f += coeffs[i] * modes_[i].v1;
  return f;
}
Eigen::ArrayXd AlphaBasis::field2(const Eigen::VectorXd& coeffs) const {
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(quad_->size());
  for (int i = 0; i < size(); ++i) f += coeffs[i] * modes_[i].v2;
  return f;
}
Eigen::ArrayXd AlphaBasis::curl(const Eigen::VectorXd& coeffs) const {
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(quad_->size());
  for (int i = 0; i < size(); ++i) f += coeffs[i] * modes_[i].curlv;
  return f;
}
Eigen::Vector2d AlphaBasis::eval_at(const Eigen::VectorXd& coeffs, double x1, double x2) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int i = 0; i < size(); ++i) v += coeffs[i] * modes_[i].eval(x1, x2);
  return v;
}
Eigen::VectorXd AlphaBasis::apply_M(const Eigen::VectorXd& coeffs) const {
  Eigen::VectorXd out(size());
  for (int i = 0; i < size(); ++i) out[i] = modes_[i].k2 * coeffs[i];
  return out;
}

// ---------------------------------------------------------------------------
// Gauge fixing and flux
// ---------------------------------------------------------------------------

Eigen::Vector2cd FourierVectorField::eval(double x1, double x2) const {
  Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
  for (std::size_t i = 0; i < K.size(); ++i)
    v += coeff[i] * std::exp(I * (K[i][0] * x1 + K[i][1] * x2));
  return v;
}
cplx FourierVectorField::curl(double x1, double x2) const {
  cplx c = 0.0;
  for (std::size_t i = 0; i < K.size(); ++i)
    c += I * (K[i][0] * coeff[i][1] - K[i][1] * coeff[i][0]) *
         std::exp(I * (K[i][0] * x1 + K[i][1] * x2));
  return c;
}
cplx FourierVectorField::divergence(double x1, double x2) const {
  cplx d = 0.0;
  for (std::size_t i = 0; i < K.size(); ++i)
    d += I * (K[i][0] * coeff[i][0] + K[i][1] * coeff[i][1]) *
         std::exp(I * (K[i][0] * x1 + K[i][1] * x2));
  return d;
}

GaugeFixResult gauge_fix(const FourierVectorField& alpha_raw) {
  GaugeFixResult res;
  res.removed_mean.setZero();
  for (std::size_t i = 0; i < alpha_raw.K.size(); ++i) {
    const Eigen::Vector2d K = alpha_raw.K[i];
    const Eigen::Vector2cd a = alpha_raw.coeff[i];
    if (K.norm() == 0.0) {
      res.removed_mean += a;
      continue;
    }
    const cplx kdot = K[0] * a[0] + K[1] * a[1];
    const Eigen::Vector2cd grad = K.cast<cplx>() * (kdot / K.squaredNorm());
    res.alpha.K.push_back(K);
    res.alpha.coeff.push_back(a - grad);
    res.grad_eta.K.push_back(K);
    res.grad_eta.coeff.push_back(grad);
  }
  return res;
}

namespace {
template <typename EvalA>
double flux_line_integral(const MagneticCell& cell, EvalA alpha_at, int order) {
  const auto [xs, ws] = gauss_legendre_half(order);
  const cplx base = -0.5 * (cell.g1 + cell.g2);
  const cplx dirs[4] = {cell.g1, cell.g2, -cell.g1, -cell.g2};
  cplx start = base;
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx d = dirs[e];
    for (int i = 0; i < order; ++i) {
      const cplx x = start + (xs[i] + 0.5) * d;
      const auto an = cell.an(x.real(), x.imag());
      const Eigen::Vector2d av = alpha_at(x.real(), x.imag());
      total += ws[i] * ((an[0] + av[0]) * d.real() + (an[1] + av[1]) * d.imag());
    }
    start += d;
  }
  return total;
}
}  // namespace

double flux_per_cell(const MagneticCell& cell, const FourierVectorField& alpha, int quad_order) {
  return flux_line_integral(
      cell,
      [&](double x1, double x2) {
        const auto v = alpha.eval(x1, x2);
        return Eigen::Vector2d(v[0].real(), v[1].real());
      },
      quad_order);
}

double flux_per_cell(const MagneticCell& cell, const AlphaBasis& basis,
                     const Eigen::VectorXd& coeffs, int quad_order) {
  return flux_line_integral(
      cell, [&](double x1, double x2) { return basis.eval_at(coeffs, x1, x2); }, quad_order);
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

FieldSample observables(const LandauBasis& psi_basis, const Eigen::VectorXcd& psi_coeffs,
                        const AlphaBasis& alpha_basis, const Eigen::VectorXd& alpha_coeffs) {
  const auto& q = psi_basis.quad();
  FieldSample out;
  out.x1 = q.x1();
  out.x2 = q.x2();
  const Eigen::ArrayXcd psi = psi_basis.field(psi_coeffs);
  const Eigen::ArrayXcd D1 = psi_basis.field_D1(psi_coeffs);
  const Eigen::ArrayXcd D2 = psi_basis.field_D2(psi_coeffs);
  const Eigen::ArrayXd a1 = alpha_basis.size() ? alpha_basis.field1(alpha_coeffs)
                                               : Eigen::ArrayXd::Zero(q.size()).eval();
  const Eigen::ArrayXd a2 = alpha_basis.size() ? alpha_basis.field2(alpha_coeffs)
                                               : Eigen::ArrayXd::Zero(q.size()).eval();
  const Eigen::ArrayXd curla = alpha_basis.size() ? alpha_basis.curl(alpha_coeffs)
                                                  : Eigen::ArrayXd::Zero(q.size()).eval();
  out.ns = psi.abs2();
  out.B = double(psi_basis.cell().shape.n) + curla;
  out.J1 = (psi.conjugate() * D1).imag() - a1 * out.ns;
  out.J2 = (psi.conjugate() * D2).imag() - a2 * out.ns;
  return out;
}

FieldSample observables_at(const LandauBasis& psi_basis, const Eigen::VectorXcd& psi_coeffs,
                           const AlphaBasis& alpha_basis, const Eigen::VectorXd& alpha_coeffs,
                           const Eigen::ArrayXd& x1, const Eigen::ArrayXd& x2) {
  FieldSample out;
  const int P = int(x1.size());
  out.x1 = x1;
  out.x2 = x2;
  out.ns.resize(P);
  out.B.resize(P);
  out.J1.resize(P);
  out.J2.resize(P);
  for (int p = 0; p < P; ++p) {
    const cplx x(x1[p], x2[p]);
    const auto v = psi_basis.eval_at(psi_coeffs, x);
    Eigen::Vector2d a = Eigen::Vector2d::Zero();
    double curla = 0.0;
    if (alpha_basis.size()) {
      a = alpha_basis.eval_at(alpha_coeffs, x1[p], x2[p]);
      for (int i = 0; i < alpha_basis.size(); ++i)
        curla += alpha_coeffs[i] * alpha_basis.modes()[i].eval_curl(x1[p], x2[p]);
    }
    const double ns = std::norm(v.val);
    out.ns[p] = ns;
    out.B[p] = double(psi_basis.cell().shape.n) + curla;
    out.J1[p] = std::imag(std::conj(v.val) * v.d1) - a[0] * ns;
    out.J2[p] = std::imag(std::conj(v.val) * v.d2) - a[1] * ns;
  }
  return out;
}

}  // namespace glv
