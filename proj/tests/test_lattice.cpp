// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <random>

#include "glv/lattice.hpp"

using namespace glv;

namespace {

// Independent brute-force Gauss reduction tracking the SL(2,Z) word.
cplx oracle_reduce(cplx tau, Sl2Matrix& m) {
  m = Sl2Matrix{};
  for (int it = 0; it < 100000; ++it) {
    if (tau.real() > 0.5 + 1e-15) {
      tau -= 1.0;
      m = Sl2Matrix{1, -1, 0, 1}.compose(m);
    } else if (tau.real() <= -0.5 + 1e-15) {
      tau += 1.0;
      m = Sl2Matrix{1, 1, 0, 1}.compose(m);
    } else if (std::norm(tau) < 1.0 - 1e-15) {
      tau = -1.0 / tau;
      m = Sl2Matrix{0, -1, 1, 0}.compose(m);
    } else {
      break;
    }
  }
  return tau;
}

bool in_fundamental_domain(cplx t) {
  return t.imag() > 0.0 && std::norm(t) >= 1.0 - 1e-12 && t.real() > -0.5 - 1e-12 &&
         t.real() <= 0.5 + 1e-12;
}

}  // namespace

TEST_CASE("fundamental domain reduction") {
  const cplx hex = std::polar(1.0, pi / 3.0);
  CHECK(std::abs(reduce_to_fundamental_domain(hex) - hex) < 1e-14);
  CHECK(std::abs(reduce_to_fundamental_domain(cplx(3.0, 1.0)) - cplx(0.0, 1.0)) < 1e-14);

  Sl2Matrix m;
  const cplx t0(0.1, 0.1);
  const cplx tr = reduce_to_fundamental_domain(t0, m);
  CHECK(in_fundamental_domain(tr));
  CHECK(m.det() == 1);
  CHECK(std::abs(m.apply(t0) - tr) < 1e-12);

  Sl2Matrix mo;
  const cplx to = oracle_reduce(t0, mo);
  CHECK(in_fundamental_domain(to));
  CHECK(std::abs(to - tr) < 1e-10);

  CHECK_THROWS_AS(reduce_to_fundamental_domain(cplx(0.3, -0.2)), std::domain_error);
}

TEST_CASE("reduction is idempotent and SL(2,Z)-faithful") {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> ur(-4.0, 4.0), ui(0.01, 3.0);
  for (int i = 0; i < 50; ++i) {
    const cplx t(ur(rng), ui(rng));
    Sl2Matrix m;
    const cplx r = reduce_to_fundamental_domain(t, m);
    CHECK(in_fundamental_domain(r));
    CHECK(m.det() == 1);
    CHECK(std::abs(m.apply(t) - r) < 1e-9 * std::abs(r));
    CHECK(std::abs(reduce_to_fundamental_domain(r) - r) < 1e-13);
  }
}

TEST_CASE("normalized lattice has cell area 2 pi") {
  const LatticeShape sq{cplx(0.0, 1.0), 1, 1, 0};
  auto [g1, g2] = normalized_lattice(sq);
  CHECK(std::abs(g1 - std::sqrt(2.0 * pi)) < 1e-14);
  CHECK(std::abs(g2 - cplx(0.0, std::sqrt(2.0 * pi))) < 1e-14);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ur(-0.5, 0.5), ui(0.9, 2.5);
  for (int i = 0; i < 20; ++i) {
    cplx t = reduce_to_fundamental_domain(cplx(ur(rng), ui(rng)));
    auto [a, b] = normalized_lattice({t, 1, 1, 0});
    CHECK(std::abs(std::imag(std::conj(a) * b)) == doctest::Approx(2.0 * pi).epsilon(1e-12));
  }
}

TEST_CASE("cocycle constant and cocycle condition") {
  CHECK(cocycle_constant(1, 0, 5) == 0.0);
  CHECK(cocycle_constant(1, 1, 1) == doctest::Approx(pi));
  CHECK(cocycle_constant(1, 1, 2) == 0.0);  // 2 pi = 0

  // c_{s+t} - c_s - c_t - (n/2) s^t in 2 pi Z, with s^t = 2 pi (p q' - q p').
  for (int n = 1; n <= 4; ++n)
    for (int p = -5; p <= 5; ++p)
      for (int q = -5; q <= 5; ++q)
        for (int p2 = -5; p2 <= 5; ++p2)
          for (int q2 = -5; q2 <= 5; ++q2) {
            const double lhs = cocycle_constant(p + p2, q + q2, n) - cocycle_constant(p, q, n) -
                               cocycle_constant(p2, q2, n) - pi * n * (p * q2 - q * p2);
            const double frac = std::abs(std::remainder(lhs, 2.0 * pi));
            if (frac >= 1e-9) {
              CHECK(frac < 1e-9);  // report the offending tuple once
              return;
            }
          }
}

TEST_CASE("kappa_c") {
  CHECK(kappa_c(1.0) == 0.0);
  CHECK(kappa_c(2.0) == doctest::Approx(0.5));
  CHECK(kappa_c(1e12) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK_THROWS_AS(kappa_c(0.99), std::domain_error);
}

TEST_CASE("physical params") {
  PhysicalParams p{1.3, 0.8, 3};
  CHECK(p.lambda() == doctest::Approx(1.3 * 1.3 * 3 / 0.8).epsilon(1e-15));
  CHECK(p.cell_area() == doctest::Approx(2.0 * pi * 3 / 0.8).epsilon(1e-15));
  CHECK(p.rescale_factor() == doctest::Approx(std::sqrt(3 / 0.8)).epsilon(1e-15));
}

TEST_CASE("Wigner-Seitz cell shapes and ownership") {
  const cplx hex = std::polar(1.0, pi / 3.0);
  const auto ch = wigner_seitz(cplx(1, 0), hex);
  CHECK(ch.vertices().size() == 6);
  int owned_e = 0, owned_v = 0;
  for (bool b : ch.edge_owned()) owned_e += b;
  for (bool b : ch.vertex_owned()) owned_v += b;
  CHECK(owned_e == 3);
  CHECK(owned_v == 2);

  const auto cs = wigner_seitz(cplx(1, 0), cplx(0, 1));
  CHECK(cs.vertices().size() == 4);
  owned_e = owned_v = 0;
  for (bool b : cs.edge_owned()) owned_e += b;
  for (bool b : cs.vertex_owned()) owned_v += b;
  CHECK(owned_e == 2);
  CHECK(owned_v == 1);

  // central symmetry of the polygon
  for (const cplx v : ch.vertices()) {
    bool found = false;
    for (const cplx u : ch.vertices())
      if (std::abs(u + v) < 1e-9) found = true;
    CHECK(found);
  }
}

TEST_CASE("Wigner-Seitz translates tile the plane exactly once") {
  for (const cplx tau : {std::polar(1.0, pi / 3.0), cplx(0.0, 1.0), cplx(0.3, 1.2)}) {
    const auto cell = wigner_seitz(cplx(1, 0), tau);
    int bad = 0;
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j) {
        const cplx z = (i / 100.0 - 0.5) + tau * (j / 100.0 - 0.5);
        int owners = 0;
        for (int p = -3; p <= 3; ++p)
          for (int q = -3; q <= 3; ++q)
            if (cell.contains(z - (double(p) + double(q) * tau))) ++owners;
        if (owners != 1) ++bad;
      }
    CHECK(bad == 0);
  }
}

TEST_CASE("canonicalize maps lattice-equivalent points to one owned point") {
  const cplx tau = std::polar(1.0, pi / 3.0);
  const auto cell = wigner_seitz(cplx(1, 0), tau);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const cplx z = u(rng) + tau * u(rng);
    const cplx c0 = cell.canonicalize(z);
    CHECK(cell.contains(c0));
    const cplx c1 = cell.canonicalize(z + 3.0 - 2.0 * tau);
    CHECK(std::abs(c0 - c1) < 1e-9);
  }
  // boundary: a cell vertex and all its equivalents land on the owned vertex
  const cplx v = cell.vertices()[0];
  const cplx cv = cell.canonicalize(v);
  CHECK(cell.contains(cv));
  for (int p = -1; p <= 1; ++p)
    for (int q = -1; q <= 1; ++q)
      CHECK(std::abs(cell.canonicalize(v + double(p) + tau * double(q)) - cv) < 1e-9);
}
