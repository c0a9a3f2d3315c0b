// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <random>

#include "glv/theta.hpp"

using namespace glv;

namespace {
const cplx hex = std::polar(1.0, pi / 3.0);
constexpr cplx I{0.0, 1.0};

std::vector<cplx> random_points(int count, cplx tau, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<cplx> pts(count);
  for (auto& z : pts) z = u(rng) + tau * u(rng);
  return pts;
}

ThetaElement random_element(int n, cplx tau, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i) c[i] = cplx(g(rng), g(rng));
  return ThetaElement(n, tau, c);
}

// lattice-aware distance on C / (Z + tau Z)
double lat_dist(cplx a, cplx b, const WignerSeitzCell& cell) {
  return std::abs(cell.reduce(a - b));
}

}  // namespace

TEST_CASE("basis relations of the theta family") {
  for (const cplx tau : {hex, cplx(0.0, 1.0), cplx(0.21, 1.33)}) {
    const cplx q = std::exp(I * pi * tau);  // gamma for the current n set below
    (void)q;
    for (int n = 1; n <= 6; ++n) {
      const cplx gamma = std::exp(I * pi * tau / double(n));
      for (const cplx z : random_points(12, tau, 100 * n)) {
        for (int m = 0; m < n; ++m) {
          const cplx t = theta_basis(n, m, z, tau, 0);
          // 1. shift by 1/n multiplies by e^{2 pi i m / n}
          const cplx s1 = theta_basis(n, m, z + 1.0 / n, tau, 0);
          CHECK(std::abs(s1 - std::exp(2.0 * pi * I * double(m) / double(n)) * t) <
                1e-11 * (1.0 + std::abs(t)));
          // 2. parity theta_m(-z) = theta_{n-m}
          const cplx s2 = theta_basis(n, (n - m) % n, -z, tau, 0);
          CHECK(std::abs(s2 - t) < 1e-11 * (1.0 + std::abs(t)));
          // 3. shift by tau/n: the sign that actually holds is e^{-2 pi i z}
          const cplx s3 = theta_basis(n, m, z + tau / double(n), tau, 0);
          const cplx rhs = std::exp(-2.0 * pi * I * z) / gamma *
                           theta_basis(n, (m + 1) % n, z, tau, 0);
          CHECK(std::abs(s3 - rhs) < 1e-10 * (1.0 + std::abs(rhs)));
        }
      }
    }
  }
}

TEST_CASE("quasi-periodicity of V_n elements") {
  // n=1 basis: theta(z+1) = theta(z) at 20 random points
  for (const cplx z : random_points(20, hex, 3)) {
    CHECK(std::abs(theta_basis(1, 0, z + 1.0, hex, 0) - theta_basis(1, 0, z, hex, 0)) < 1e-12);
  }
  // specific examples from the basis theorem
  for (const cplx z : random_points(5, hex, 4)) {
    const cplx lhs = theta_basis(3, 1, z + 1.0 / 3.0, hex, 0);
    CHECK(std::abs(lhs - std::exp(2.0 * pi * I / 3.0) * theta_basis(3, 1, z, hex, 0)) < 1e-11);
    CHECK(std::abs(theta_basis(4, 1, -z, hex, 0) - theta_basis(4, 3, z, hex, 0)) < 1e-11);
  }
  // random elements satisfy the defining relations
  for (int n : {1, 2, 3, 5, 8}) {
    const auto el = random_element(n, hex, 40 + n);
    const auto pts = random_points(10, hex, 50 + n);
    CHECK(el.quasi_periodicity_residual(pts) < 1e-10);
  }
  // zero coefficients evaluate to zero; unit coefficients match the basis
  const auto z0 = ThetaElement::zero_element(4, hex);
  CHECK(std::abs(z0.eval(cplx(0.3, 0.2))) == 0.0);
  const auto e2 = ThetaElement::basis_element(4, 2, hex);
  CHECK(std::abs(e2.eval(cplx(0.1, -0.2)) - theta_basis(4, 2, cplx(0.1, -0.2), hex, 0)) <
        1e-13);
}

TEST_CASE("theta_basis argument checks") {
  CHECK_THROWS_AS(theta_basis(3, 3, cplx(0, 0), hex, 0), std::domain_error);
  CHECK_THROWS_AS(theta_basis(3, -1, cplx(0, 0), hex, 0), std::domain_error);
  CHECK_THROWS_AS(theta_basis(2, 0, cplx(0, 0), cplx(0.5, -1.0), 0), std::domain_error);
}

TEST_CASE("parity split dimensions and parity") {
  struct Case {
    int n, even, odd;
  };
  for (const Case c : {Case{1, 1, 0}, Case{2, 2, 0}, Case{3, 2, 1}, Case{6, 4, 2}}) {
    auto [even, odd] = parity_split(c.n, hex);
    CHECK(int(even.size()) == c.even);
    CHECK(int(odd.size()) == c.odd);
    CHECK(int(even.size() + odd.size()) == c.n);
    for (const auto& e : even)
      for (const cplx z : random_points(6, hex, 7))
        CHECK(std::abs(e.eval(-z) - e.eval(z)) < 1e-10 * (1.0 + std::abs(e.eval(z))));
    for (const auto& o : odd)
      for (const cplx z : random_points(6, hex, 8))
        CHECK(std::abs(o.eval(-z) + o.eval(z)) < 1e-10 * (1.0 + std::abs(o.eval(z))));
  }
}

TEST_CASE("zero counting by the argument principle") {
  const auto cell = wigner_seitz(cplx(1, 0), hex);
  const auto t10 = ThetaElement::basis_element(1, 0, hex);
  CHECK(count_zeros(t10, cell) == 1);

  // fourth power of the V_1 generator lies in V_4 and has 4 zeros
  const auto t2 = product(t10, t10);
  const auto t4 = product(t2, t2);
  CHECK(count_zeros(t4, cell) == 4);

  // Wronskian of the V_2 basis lies in V_4
  const auto W = wronskian_element(2, hex);
  CHECK(count_zeros(W, cell) == 4);

  // random elements of V_n carry exactly n zeros
  for (int n : {2, 3, 5}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto el = random_element(n, hex, 1000 + 10 * n + trial);
      CHECK(count_zeros(el, cell) == n);
    }
  }
  CHECK_THROWS_AS(count_zeros(ThetaElement::zero_element(2, hex), cell), std::domain_error);
}

TEST_CASE("the V_1 generator vanishes at (1+tau)/2") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(-0.45, 0.45), ui(0.9, 1.8);
  std::vector<cplx> taus = {hex, cplx(0.0, 1.0)};
  while (taus.size() < 5) {
    const cplx t = reduce_to_fundamental_domain(cplx(ur(rng), ui(rng)));
    taus.push_back(t);
  }
  for (const cplx tau : taus) {
    const auto cell = wigner_seitz(cplx(1, 0), tau);
    const auto div = find_zeros(ThetaElement::basis_element(1, 0, tau), cell);
    REQUIRE(div.entries.size() == 1);
    CHECK(div.entries[0].mult == 1);
    CHECK(lat_dist(div.entries[0].z, 0.5 * (1.0 + tau), cell) < 1e-10);
  }
}

TEST_CASE("find_zeros on a random V_3 element") {
  const auto cell = wigner_seitz(cplx(1, 0), hex);
  const auto el = random_element(3, hex, 12);
  const auto div = find_zeros(el, cell);
  CHECK(div.degree() == 3);
  const double scale = el.cell_scale();
  for (const auto& e : div.entries) {
    CHECK(std::abs(el.eval(e.z)) < 1e-11 * scale);
    CHECK(cell.contains(e.z));
  }
  // subdivision-winding oracle on a fixed 64x64 partition of the cell's box:
  // total of per-box winding numbers over boxes inside the cell == 3
  int total = 0;
  const auto f = [&](cplx z) { return el.eval(z); };
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double s0 = i / 64.0 - 0.5, t0 = j / 64.0 - 0.5;
      // parallelogram sub-cells partition one fundamental domain exactly
      const cplx c00 = s0 + hex * t0, c10 = (s0 + 1.0 / 64) + hex * t0,
                 c11 = (s0 + 1.0 / 64) + hex * (t0 + 1.0 / 64), c01 = s0 + hex * (t0 + 1.0 / 64);
      const std::vector<cplx> quad{c00 + cplx(1e-7, 2e-7), c10 + cplx(1e-7, 2e-7),
                                   c11 + cplx(1e-7, 2e-7), c01 + cplx(1e-7, 2e-7)};
      total += winding_number(f, quad);
    }
  CHECK(total == 3);
}

TEST_CASE("divisor stability under truncation bump") {
  const auto cell = wigner_seitz(cplx(1, 0), hex);
  const auto el = random_element(4, hex, 77);
  const auto d1 = find_zeros(el, cell);
  const ThetaElement bumped(4, hex, el.coeffs(), el.trunc() + 4);
  const auto d2 = find_zeros(bumped, cell);
  REQUIRE(d1.degree() == d2.degree());
  for (const auto& e : d1.entries) CHECK(d2.multiplicity_at(e.z, 1e-8) == e.mult);
}

TEST_CASE("products: degree addition and divisors") {
  const auto cell = wigner_seitz(cplx(1, 0), hex);
  const auto t10 = ThetaElement::basis_element(1, 0, hex);
  CollocationInfo info;
  const auto p = product(t10, t10, &info);
  CHECK(p.degree() == 2);
  CHECK(info.residual < 1e-10);
  const auto div = find_zeros(p, cell);
  REQUIRE(div.entries.size() == 1);
  CHECK(div.entries[0].mult == 2);
  CHECK(lat_dist(div.entries[0].z, 0.5 * (1.0 + hex), cell) < 1e-9);

  // anything times the zero element is zero
  const auto z = product(t10, ThetaElement::zero_element(2, hex));
  CHECK(z.coeffs().norm() < 1e-12);

  // associativity through collocation, compared projectively
  const auto t2 = product(t10, t10);
  const auto a = product(t2, t10).normalized();
  const auto b = product(t10, t2).normalized();
  CHECK((a.coeffs() - b.coeffs()).norm() < 1e-10);
}

TEST_CASE("singular family") {
  const auto cell = wigner_seitz(cplx(1, 0), hex);
  const auto s00 = singular_family(2, 0, 0, hex);
  const auto div = find_zeros(s00, cell);
  REQUIRE(div.entries.size() == 1);
  CHECK(div.entries[0].mult == 2);
  CHECK(lat_dist(div.entries[0].z, 0.5 * (1.0 + hex), cell) < 1e-9);

  // n^2 members, pairwise non-collinear, all genuinely in V_n
  for (int n : {2, 3}) {
    std::vector<ThetaElement> fam;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) fam.push_back(singular_family(n, a, b, hex));
    CHECK(int(fam.size()) == n * n);
    const auto pts = random_points(8, hex, 600 + n);
    for (const auto& el : fam) CHECK(el.quasi_periodicity_residual(pts) < 1e-10);
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j) {
        const auto &a = fam[i].coeffs(), &b = fam[j].coeffs();
        const double cos2 = std::abs(a.dot(b)) / (a.norm() * b.norm());
        CHECK(cos2 < 1.0 - 1e-6);
      }
    // zeros sit on the predicted coset (1+tau)/2 + (a + b tau)/n, multiplicity n
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const auto d = find_zeros(singular_family(n, a, b, hex), cell);
        REQUIRE(d.entries.size() == 1);
        CHECK(d.entries[0].mult == n);
        const cplx pred = 0.5 * (1.0 + hex) - (double(a) + double(b) * hex) / double(n);
        CHECK(lat_dist(d.entries[0].z, pred, cell) < 1e-9);
      }
  }
}

TEST_CASE("wronskian relations") {
  // n=2: odd around the origin, so it vanishes there
  CHECK(std::abs(wronskian_value(2, cplx(0.17, 0.23), hex) +
                 wronskian_value(2, -cplx(0.17, 0.23), hex)) < 1e-9);
  CHECK(std::abs(wronskian_value(2, cplx(0, 0), hex)) < 1e-10);

  // zero set for n=2 equals (1+tau)/2 + (1/2)L inside the cell
  const auto cell = wigner_seitz(cplx(1, 0), hex);
  const auto W2 = wronskian_element(2, hex);
  CHECK(W2.degree() == 4);
  const auto div = find_zeros(W2, cell);
  CHECK(div.degree() == 4);
  const cplx base = 0.5 * (1.0 + hex);
  for (const auto& e : div.entries) {
    bool on_coset = false;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (lat_dist(e.z, base + 0.5 * (double(a) + double(b) * hex), cell) < 1e-8)
          on_coset = true;
    CHECK(on_coset);
    CHECK(e.mult == 1);
  }

  // n=3: Theta(z + 1/3) = Theta(z) ((-1)^{n+1} = +1)
  for (const cplx z : random_points(5, hex, 21)) {
    const cplx w = wronskian_value(3, z, hex);
    CHECK(std::abs(wronskian_value(3, z + 1.0 / 3.0, hex) - w) < 1e-9 * (1.0 + std::abs(w)));
  }

  // shift by tau/n with the pinned convention y = e^{-i pi tau} e^{-2 pi i z}
  for (int n : {2, 3}) {
    const cplx gamma = std::exp(I * pi * hex / double(n));
    const cplx z(0.11, 0.07);
    const cplx y = std::exp(-I * pi * hex) * std::exp(-2.0 * pi * I * z);
    const double sgn = (n % 2 == 0) ? -1.0 : 1.0;
    const cplx pred = sgn * std::pow(gamma, double(n * (n - 1))) * std::pow(y, double(n)) *
                      wronskian_value(n, z, hex);
    const cplx lhs = wronskian_value(n, z + hex / double(n), hex);
    CHECK(std::abs(lhs - pred) < 1e-9 * (1.0 + std::abs(pred)));
  }

  // Wronskian belongs to V_{n^2}: the collocation fit is consistent
  CollocationInfo info;
  const auto W3 = wronskian_element(3, hex, &info);
  CHECK(W3.degree() == 9);
  CHECK(info.residual < 1e-9);
}

TEST_CASE("uniqueness: identical divisors imply collinear coefficients") {
  const auto cell = wigner_seitz(cplx(1, 0), hex);
  const auto el = random_element(4, hex, 90);
  const auto scaled = cplx(1.7, -0.4) * el;
  const auto d1 = find_zeros(el, cell);
  const auto d2 = find_zeros(scaled, cell);
  REQUIRE(d1.entries.size() == d2.entries.size());
  for (const auto& e : d1.entries) CHECK(d2.multiplicity_at(e.z, 1e-8) == e.mult);
  Eigen::MatrixXcd M(2, 4);
  M.row(0) = el.normalized().coeffs().transpose();
  M.row(1) = scaled.normalized().coeffs().transpose();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  CHECK(svd.singularValues()(1) < 1e-10 * svd.singularValues()(0));
}

TEST_CASE("quotient_check") {
  const auto t10 = ThetaElement::basis_element(1, 0, hex);
  const auto t2 = product(t10, t10);
  const auto t3 = product(t2, t10);

  // theta_0^3 / theta_0 is a valid V_2 element
  const auto q = quotient_check(t3, t10);
  CHECK(q.divisible);
  CHECK(q.fit_residual < 1e-9);
  CHECK(q.quasi_periodicity < 1e-8);

  // shifted singular member vs the unshifted generator: zeros differ
  const auto shifted = singular_family(1, 0, 0, hex);  // = theta_0 itself
  const auto t2shift = singular_family(2, 1, 0, hex);  // double zero elsewhere
  const auto q2 = quotient_check(t2shift, t10);
  CHECK_FALSE(q2.divisible);

  // Wronskian(n=2) divided by the singular member with the matching zero
  const auto W2 = wronskian_element(2, hex);
  const auto q3 = quotient_check(W2, shifted);
  CHECK(q3.divisible);
  CHECK(q3.quasi_periodicity < 1e-8);
}
