// SPDX-License-Identifier: Apache-2.0
#include "glv/symmetry.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <set>

#include "glv/landau.hpp"
#include "glv/quadrature.hpp"

namespace glv {

namespace {
constexpr cplx I{0.0, 1.0};

cplx hex_tau() { return std::polar(1.0, pi / 3.0); }

bool is_hexagonal(cplx tau) { return std::abs(tau - hex_tau()) < 1e-12; }
bool is_square(cplx tau) { return std::abs(tau - cplx(0.0, 1.0)) < 1e-12; }

}  // namespace

Eigen::MatrixXcd theta_weighted_gram(int n, cplx tau) {
  const CellQuadrature quad(cplx(1.0, 0.0), tau, 48 + 2 * n);
  const double C = pi * n / tau.imag();
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, n);
  std::vector<Eigen::ArrayXcd> vals(n);
  Eigen::ArrayXcd zs(quad.size());
  for (int p = 0; p < quad.size(); ++p) zs[p] = cplx(quad.x1()[p], quad.x2()[p]);
  Eigen::ArrayXd w = quad.weights() * (-2.0 * C * zs.imag().square()).exp();
  for (int m = 0; m < n; ++m) {
    vals[m].resize(quad.size());
    for (int p = 0; p < quad.size(); ++p) vals[m][p] = theta_basis(n, m, zs[p], tau, 0);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) G(a, b) = (w.cast<cplx>() * vals[a].conjugate() * vals[b]).sum();
  return 0.5 * (G + G.adjoint());
}

std::vector<Eigen::VectorXcd> RotationOperator::sector_basis(int r, double tol) const {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T_unitary);
  const cplx target = std::exp(2.0 * pi * I * double(r) / double(k));
  std::vector<Eigen::VectorXcd> out;
  for (int i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()[i] - target) < tol) {
      Eigen::VectorXcd c = gram_half_inv * es.eigenvectors().col(i);
      out.push_back(c / c.norm());
    }
  }
  return out;
}

RotationOperator rotation_matrix_T(int n, int k, cplx tau) {
  if (k != 2 && k != 3 && k != 4 && k != 6)
    throw std::domain_error("rotation_matrix_T: k must be in {2,3,4,6}");
  if ((k == 3 || k == 6) && !is_hexagonal(tau))
    throw std::domain_error("rotation_matrix_T: k in {3,6} needs the hexagonal lattice");
  if (k == 4 && !is_square(tau))
    throw std::domain_error("rotation_matrix_T: k = 4 needs the square lattice");

  RotationOperator op;
  op.n = n;
  op.k = k;
  op.tau = tau;
  const cplx xi = std::exp(2.0 * pi * I / double(k));
  const double C = pi * n / tau.imag();

  const int P = std::max(6 * n, 48);
  const auto pts = collocation_points(tau, P);
  Eigen::MatrixXcd A(P, n), B(P, n);
  for (int i = 0; i < P; ++i) {
    const cplx z = pts[i];
    const cplx pref = std::exp(0.5 * C * (xi * xi - 1.0) * z * z);
    for (int m = 0; m < n; ++m) {
      A(i, m) = theta_basis(n, m, z, tau, 0);
      B(i, m) = pref * theta_basis(n, m, xi * z, tau, 0);
    }
  }
  op.T = A.colPivHouseholderQr().solve(B);
  op.collocation_residual = (A * op.T - B).norm() / B.norm();
  if (op.collocation_residual > 1e-8)
    throw std::domain_error(
        "rotation_matrix_T: rotation does not preserve V_n (residual " +
        std::to_string(op.collocation_residual) + "); n odd with k in {3,6}?");

  const Eigen::MatrixXcd G = theta_weighted_gram(n, tau);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  op.gram_half = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
                 es.eigenvectors().adjoint();
  op.gram_half_inv = es.eigenvectors() *
                     es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().adjoint();
  op.T_unitary = op.gram_half * op.T * op.gram_half_inv;
  return op;
}

int dim_V(const RotationOperator& op, int r) {
  const cplx xi_r = std::exp(2.0 * pi * I * double(r) / double(op.k));
  const Eigen::MatrixXcd M = op.T_unitary - xi_r * Eigen::MatrixXcd::Identity(op.n, op.n);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  int dim = 0;
  for (int i = 0; i < op.n; ++i) {
    const double s = svd.singularValues()[i];
    if (s >= 1e-10 && s <= 1e-6)
      throw std::runtime_error("dim_V: singular value in the ambiguity band");
    if (s < 1e-8) ++dim;
  }
  return dim;
}

int dim_V(int n, int k, int r, cplx tau) { return dim_V(rotation_matrix_T(n, k, tau), r); }

std::vector<OrbitDiagram> enumerate_divisor_diagrams(int n, int k, int r) {
  if (k != 6) throw std::domain_error("enumerate_divisor_diagrams: only k = 6 is tabulated");
  const cplx tau = hex_tau();
  const auto cell = wigner_seitz(cplx(1.0, 0.0), tau);
  // Fixed orbits: the two owned vertices (index 2) and the three owned edge
  // midpoints (index 3).
  std::vector<cplx> verts, mids;
  const auto& vs = cell.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (cell.vertex_owned()[i]) verts.push_back(vs[i]);
  for (const cplx m : {cplx(0.5, 0.0), tau / 2.0, (tau - 1.0) / 2.0})
    mids.push_back(cell.canonicalize(m));

  std::vector<OrbitDiagram> out;
  for (int m1 = r; m1 <= n; m1 += 6)
    for (int m2 = 0; 2 * m2 <= n - m1; ++m2)
      for (int m3 = 0; 3 * m3 <= n - m1 - 2 * m2; ++m3) {
        const int rest = n - m1 - 2 * m2 - 3 * m3;
        if (rest % 6 != 0) continue;
        OrbitDiagram d;
        d.m1 = m1;
        d.m2 = m2;
        d.m3 = m3;
        d.m6 = rest / 6;
        d.vertex_orbit = verts;
        d.midpoint_orbit = mids;
        out.push_back(d);
      }
  return out;
}

int diagram_dimension(int n, int k, int r) {
  const auto diagrams = enumerate_divisor_diagrams(n, k, r);
  if (diagrams.empty()) return 0;
  int free_orbits = 0;
  for (const auto& d : diagrams) free_orbits = std::max(free_orbits, d.m6);
  return 1 + free_orbits;
}

// ---------------------------------------------------------------------------
// Generators and the spanning table
// ---------------------------------------------------------------------------

ThetaElement hex_generator_theta0(cplx tau) {
  // V_2 element vanishing at the vertex pair +-(1+tau)/3.
  const cplx v = (1.0 + tau) / 3.0;
  Eigen::VectorXcd c(2);
  c[0] = theta_basis(2, 1, v, tau, 0);
  c[1] = -theta_basis(2, 0, v, tau, 0);
  return ThetaElement(2, tau, c).normalized();
}

ThetaElement hex_generator_theta1(cplx tau) {
  // Wronskian of the V_2 basis: quartic with a simple zero at the origin and
  // at the three edge midpoints.
  return wronskian_element(2, tau).normalized();
}

ThetaElement hex_generator_theta2(cplx tau) {
  // Singular V_2 member with its double zero moved to the origin.
  return singular_family(2, 1, 1, tau).normalized();
}

std::string SpanningProduct::label() const {
  std::string s;
  const auto app = [&](const char* name, int e) {
    if (e == 0) return;
    if (!s.empty()) s += " ";
    s += name;
    if (e != 1) s += "^" + std::to_string(e);
  };
  app("theta_0", e0);
  app("theta_1", e1);
  app("theta_2", e2);
  return s.empty() ? "1" : s;
}

std::vector<SpanningProduct> spanning_products(int n, int r) {
  // Generator products for V_{n,6,r}, n <= 10 even. The printed (4,2) entry
  // theta_0 theta_1 has total degree 6; the degree-4 product with origin order
  // 2 is theta_0 theta_2, which is what this table carries.
  using SP = SpanningProduct;
  const auto row = [&]() -> std::vector<SP> {
    switch (n * 10 + r) {
      case 20: return {SP{1, 0, 0}};
      case 22: return {SP{0, 0, 1}};
      case 40: return {SP{2, 0, 0}};
      case 41: return {SP{0, 1, 0}};
      case 42: return {SP{1, 0, 1}};
      case 44: return {SP{0, 0, 2}};
      case 60: return {SP{3, 0, 0}, SP{0, 0, 3}, SP{0, 2, -1}};
      case 61: return {SP{1, 1, 0}};
      case 62: return {SP{2, 0, 1}};
      case 63: return {SP{0, 1, 1}};
      case 64: return {SP{1, 0, 2}};
      case 80: return {SP{4, 0, 0}, SP{1, 0, 3}};
      case 81: return {SP{2, 1, 0}};
      case 82: return {SP{0, 0, 4}, SP{0, 2, 0}, SP{3, 0, 1}};
      case 83: return {SP{1, 1, 1}};
      case 84: return {SP{2, 0, 2}};
      case 85: return {SP{0, 1, 2}};
      case 100: return {SP{5, 0, 0}, SP{2, 0, 3}};
      case 101: return {SP{3, 1, 0}, SP{0, 1, 3}};
      case 102: return {SP{4, 0, 1}, SP{1, 0, 4}, SP{1, 2, 0}};
      case 103: return {SP{2, 1, 1}};
      case 104: return {SP{3, 0, 2}, SP{0, 0, 5}, SP{0, 2, 1}};
      case 105: return {SP{1, 1, 2}};
      default: return {};
    }
  }();
  for (const auto& p : row) {
    if (p.degree() != n || ((p.origin_order() - r) % 6 + 6) % 6 != 0)
      throw std::logic_error("spanning_products: table entry fails the degree bookkeeping");
  }
  return row;
}

namespace {

ThetaElement power_product(const ThetaElement& t0, const ThetaElement& t1,
                           const ThetaElement& t2, int e0, int e1, int e2) {
  std::vector<const ThetaElement*> factors;
  for (int i = 0; i < e0; ++i) factors.push_back(&t0);
  for (int i = 0; i < e1; ++i) factors.push_back(&t1);
  for (int i = 0; i < e2; ++i) factors.push_back(&t2);
  if (factors.empty()) throw std::domain_error("power_product: empty numerator");
  ThetaElement acc = *factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) acc = product(acc, *factors[i]);
  return acc.normalized();
}

double sector_membership_residual(const RotationOperator& op, const ThetaElement& el, int r) {
  const cplx xi_r = std::exp(2.0 * pi * I * double(r) / double(op.k));
  Eigen::VectorXcd c = op.gram_half * el.coeffs();
  c /= c.norm();
  return (op.T_unitary * c - xi_r * c).norm();
}

}  // namespace

std::vector<ThetaElement> spanning_theta(int n, int r, cplx tau) {
  if (!is_hexagonal(tau))
    throw std::domain_error("spanning_theta: the table is for the hexagonal lattice");
  const auto prods = spanning_products(n, r);
  if (prods.empty()) return {};
  const auto t0 = hex_generator_theta0(tau);
  const auto t1 = hex_generator_theta1(tau);
  const auto t2 = hex_generator_theta2(tau);
  const auto op = rotation_matrix_T(n, 6, tau);

  std::vector<ThetaElement> out;
  for (const auto& p : prods) {
    ThetaElement el;
    if (p.e0 >= 0 && p.e1 >= 0 && p.e2 >= 0) {
      el = power_product(t0, t1, t2, p.e0, p.e1, p.e2);
    } else {
      // negative exponents: form the numerator and divide
      const auto num = power_product(t0, t1, t2, std::max(p.e0, 0), std::max(p.e1, 0),
                                     std::max(p.e2, 0));
      ThetaElement den;
      bool have_den = false;
      const auto mul_den = [&](const ThetaElement& g, int e) {
        for (int i = 0; i < -e; ++i) {
          den = have_den ? product(den, g) : g;
          have_den = true;
        }
      };
      mul_den(t0, std::min(p.e0, 0));
      mul_den(t1, std::min(p.e1, 0));
      mul_den(t2, std::min(p.e2, 0));
      const auto q = quotient_check(num, den);
      if (!q.divisible)
        throw std::runtime_error("spanning_theta: table entry " + p.label() +
                                 " is not divisible (table inconsistency)");
      el = q.quotient.normalized();
    }
    const double res = sector_membership_residual(op, el, r);
    if (res > 1e-8)
      throw std::runtime_error("spanning_theta: " + p.label() +
                               " is not in the requested sector (residual " +
                               std::to_string(res) + ")");
    out.push_back(el);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Irreducibility
// ---------------------------------------------------------------------------

bool irreducible(const ThetaElement& theta, const LatticeShape& shape) {
  const int n = theta.degree();
  if (shape.n != n) throw std::domain_error("irreducible: shape.n != theta degree");
  const auto cell = wigner_seitz(cplx(1.0, 0.0), theta.tau());
  const auto div = find_zeros(theta, cell);

  // Fast path: a positive origin order shared by no other divisor point rules
  // out every finer lattice (its extra lattice points would need that order).
  const cplx origin = cell.canonicalize(cplx(0.0, 0.0));
  int m0 = 0;
  bool distinct = true;
  for (const auto& e : div.entries)
    if (std::abs(e.z - origin) < 1e-8) m0 = e.mult;
  for (const auto& e : div.entries)
    if (std::abs(e.z - origin) >= 1e-8 && e.mult == m0) distinct = false;
  if (m0 > 0 && distinct) return true;

  // Full check: enumerate finer lattices of index d | n via Hermite forms and
  // test gauge-periodicity of psi = f_n theta with respect to each.
  const MagneticCell mc(shape);
  const double scale = theta.cell_scale();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  std::vector<cplx> samples;
  while (samples.size() < 16) {
    const cplx x = u(rng) * mc.g1 + u(rng) * mc.g2;
    if (std::abs(theta.eval(x / mc.c)) > 0.05 * scale) samples.push_back(x);
  }

  const auto gauge_periodic_wrt = [&](cplx t) {
    cplx ref = 0.0;
    for (const cplx x : samples) {
      const cplx num = lll_from_theta(theta, mc, x + t);
      const cplx den = lll_from_theta(theta, mc, x);
      const double xJt = x.real() * (-t.imag()) + x.imag() * t.real();
      const cplx g = num / den * std::exp(-I * (0.5 * n * xJt));
      if (ref == cplx(0.0))
        ref = g;
      else if (std::abs(g - ref) > 1e-6 * std::abs(ref))
        return false;
    }
    return std::abs(std::abs(ref) - 1.0) < 1e-6;
  };

  for (int d = 2; d <= n; ++d) {
    if (n % d != 0) continue;
    for (int a = 1; a <= d; ++a) {
      if (d % a != 0) continue;
      const int cdiag = d / a;
      for (int b = 0; b < a; ++b) {
        // H = [[a, b], [0, c]], L' = [g1 g2] H^{-1} Z^2
        const double ad = a, bd = b, cd = cdiag;
        const cplx u1 = mc.g1 / ad;
        const cplx u2 = (-bd / (ad * cd)) * mc.g1 + mc.g2 / cd;
        if (gauge_periodic_wrt(u1) && gauge_periodic_wrt(u2)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Classification table
// ---------------------------------------------------------------------------

ClassificationReport classification_table(int n_max) {
  const cplx tau = hex_tau();
  ClassificationReport rep;

  const auto make_rows = [tau](int n) {
    std::vector<ClassificationRow> rows;
    const auto op = rotation_matrix_T(n, 6, tau);
    for (int r = 0; r < 6; ++r) {
      ClassificationRow row;
      row.n = n;
      row.r = r;
      row.dim = dim_V(op, r);
      row.diagram_dim = diagram_dimension(n, 6, r);
      if (n <= 10) {
        const auto prods = spanning_products(n, r);
        row.spanning_count = int(prods.size());
        if (!prods.empty()) {
          const auto els = spanning_theta(n, r, tau);
          for (const auto& p : prods) row.spanning.push_back(p.label());
          // span check: the realized products must span the whole eigenspace
          const auto sector = op.sector_basis(r);
          Eigen::MatrixXcd U(n, int(sector.size()));
          for (std::size_t i = 0; i < sector.size(); ++i)
            U.col(int(i)) = op.gram_half * sector[i];
          Eigen::MatrixXcd P(int(els.size()), int(sector.size()));
          for (std::size_t i = 0; i < els.size(); ++i) {
            Eigen::VectorXcd c = op.gram_half * els[i].coeffs();
            P.row(int(i)) = (U.adjoint() * (c / c.norm())).transpose();
          }
          Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
          const int rank =
              int((svd.singularValues().array() > 1e-8 * svd.singularValues()(0)).count());
          row.spanning_verified = rank == int(sector.size());
        }
      }
      if (row.dim > 0 || row.diagram_dim > 0 || row.spanning_count > 0) rows.push_back(row);
    }
    return rows;
  };

  std::vector<std::future<std::vector<ClassificationRow>>> futs;
  for (int n = 2; n <= n_max; n += 2)
    futs.push_back(std::async(std::launch::async, make_rows, n));
  for (auto& f : futs)
    for (auto& r : f.get()) rep.rows.push_back(r);

  // Compare against the theorem's one-dimensional pair list (n <= 10).
  const std::set<std::pair<int, int>> theorem_list = {
      {2, 0}, {2, 2}, {4, 0}, {4, 1}, {4, 2}, {4, 4}, {6, 1}, {6, 2},
      {6, 3}, {6, 4}, {8, 1}, {8, 3}, {8, 4}, {8, 5}, {10, 3}, {10, 5}};
  std::set<std::pair<int, int>> computed_ones;
  rep.one_dim_list_matches = true;
  rep.diagrams_match = true;
  for (const auto& row : rep.rows) {
    if (row.n <= 10 && row.dim == 1) computed_ones.insert({row.n, row.r});
    if (row.diagram_dim != row.dim) {
      rep.diagrams_match = false;
      rep.findings.push_back("diagram count mismatch at (" + std::to_string(row.n) + "," +
                             std::to_string(row.r) + ")");
    }
    if (row.spanning_count > 0 && row.spanning_count != row.dim)
      rep.findings.push_back(
          "(" + std::to_string(row.n) + "," + std::to_string(row.r) + "): table lists " +
          std::to_string(row.spanning_count) + " spanning functions but dim V = " +
          std::to_string(row.dim) + " (the listed products are linearly dependent)");
  }
  if (n_max >= 10 && computed_ones != theorem_list) rep.one_dim_list_matches = false;
  return rep;
}

}  // namespace glv
