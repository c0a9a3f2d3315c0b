// SPDX-License-Identifier: Apache-2.0
#include "glv/theta.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace glv {

namespace {
constexpr cplx I{0.0, 1.0};
}

int default_trunc(int n, double im_tau, double strip) {
  // Tail of sum_l e^{-(pi Im tau / n)(l^2 - 2 s n l)} below 1e-14 (e^-33) on the
  // strip |Im z| <= strip * Im tau.
  const double s = std::max(0.0, strip);
  const double disc = double(n) * s * double(n) * s + 33.0 * double(n) / (pi * im_tau);
  const int exact = int(std::ceil(double(n) * s + std::sqrt(disc))) + 4;
  const int spec = int(std::ceil(std::sqrt(double(n) * 40.0 / (pi * im_tau)))) + n;
  return std::max(exact, spec);
}

cplx theta_basis(int n, int m, cplx z, cplx tau, int trunc, int deriv) {
  if (m < 0 || m >= n) throw std::domain_error("theta_basis: m out of range [0, n-1]");
  if (!(tau.imag() > 0.0)) throw std::domain_error("theta_basis: Im tau <= 0");
  if (trunc <= 0) trunc = default_trunc(n, tau.imag(), std::abs(z.imag()) / tau.imag() + 0.1);
  cplx acc = 0.0;
  for (int l = -trunc; l <= trunc; ++l) {
    if (((l % n) + n) % n != m) continue;
    cplx term = std::exp(I * pi * tau * double(l) * double(l) / double(n) +
                         2.0 * pi * I * double(l) * z);
    for (int d = 0; d < deriv; ++d) term *= 2.0 * pi * I * double(l);
    acc += term;
  }
  return acc;
}

ThetaElement::ThetaElement(int n, cplx tau, Eigen::VectorXcd coeffs, int trunc)
    : n_(n), tau_(tau), trunc_(trunc), coeffs_(std::move(coeffs)) {
  if (n_ < 1) throw std::domain_error("ThetaElement: n must be positive");
  if (coeffs_.size() != n_) throw std::domain_error("ThetaElement: coefficient count != n");
  if (!(tau_.imag() > 0.0)) throw std::domain_error("ThetaElement: Im tau <= 0");
  if (trunc_ <= 0) trunc_ = default_trunc(n_, tau_.imag());
}

ThetaElement ThetaElement::basis_element(int n, int m, cplx tau, int trunc) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  if (m < 0 || m >= n) throw std::domain_error("basis_element: m out of range");
  c[m] = 1.0;
  return ThetaElement(n, tau, std::move(c), trunc);
}

ThetaElement ThetaElement::zero_element(int n, cplx tau) {
  return ThetaElement(n, tau, Eigen::VectorXcd::Zero(n));
}

cplx ThetaElement::eval(cplx z, int deriv) const {
  if (n_ == 0) throw std::logic_error("ThetaElement: evaluating a default-constructed element");
  const double strip = std::abs(z.imag()) / tau_.imag() + 0.1;
  const int L = std::max(trunc_, default_trunc(n_, tau_.imag(), strip));
  cplx acc = 0.0;
  for (int l = -L; l <= L; ++l) {
    const cplx c = coeffs_[((l % n_) + n_) % n_];
    if (c == 0.0) continue;
    cplx term = std::exp(I * pi * tau_ * double(l) * double(l) / double(n_) +
                         2.0 * pi * I * double(l) * z);
    for (int d = 0; d < deriv; ++d) term *= 2.0 * pi * I * double(l);
    acc += c * term;
  }
  return acc;
}

ThetaElement ThetaElement::normalized() const {
  int imax = 0;
  for (int i = 1; i < n_; ++i)
    if (std::abs(coeffs_[i]) > std::abs(coeffs_[imax])) imax = i;
  if (coeffs_[imax] == 0.0) return *this;
  return ThetaElement(n_, tau_, coeffs_ / coeffs_[imax], trunc_);
}

double ThetaElement::quasi_periodicity_residual(std::span<const cplx> pts) const {
  const double scale = std::max(cell_scale(), 1e-300);
  double worst = 0.0;
  for (cplx z : pts) {
    const cplx t0 = eval(z);
    const cplx r1 = eval(z + 1.0) - t0;
    const cplx mult = std::exp(-2.0 * pi * I * double(n_) * z - I * pi * double(n_) * tau_);
    const cplx r2 = eval(z + tau_) - mult * t0;
    worst = std::max({worst, std::abs(r1) / scale, std::abs(r2) / (scale * std::max(1.0, std::abs(mult)))});
  }
  return worst;
}

double ThetaElement::cell_scale() const {
  double s = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const cplx z = (i / 16.0 - 0.5) + tau_ * (j / 16.0 - 0.5);
      s = std::max(s, std::abs(eval(z)));
    }
  return s;
}

ThetaElement operator*(cplx s, const ThetaElement& t) {
  return ThetaElement(t.degree(), t.tau(), s * t.coeffs(), t.trunc());
}
ThetaElement operator+(const ThetaElement& a, const ThetaElement& b) {
  if (a.degree() != b.degree()) throw std::domain_error("theta +: degree mismatch");
  return ThetaElement(a.degree(), a.tau(), a.coeffs() + b.coeffs(),
                      std::max(a.trunc(), b.trunc()));
}
ThetaElement operator-(const ThetaElement& a, const ThetaElement& b) {
  return a + (cplx(-1.0) * b);
}

int Divisor::multiplicity_at(cplx z, double tol) const {
  for (const auto& e : entries)
    if (std::abs(e.z - z) <= tol) return e.mult;
  return 0;
}

bool Divisor::contains(const Divisor& sub, double tol) const {
  for (const auto& e : sub.entries)
    if (multiplicity_at(e.z, tol) < e.mult) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Winding numbers and zero localization
// ---------------------------------------------------------------------------

namespace {

// Accumulates the argument increment of f along [z0, z1], bisecting until each
// step turns by less than pi/2.
double arg_increment(const std::function<cplx(cplx)>& f, cplx z0, cplx f0, cplx z1, cplx f1,
                     double small_tol, int depth) {
  if (std::abs(f0) <= small_tol || std::abs(f1) <= small_tol)
    throw contour_error("winding_number: |f| below tolerance on the contour");
  const double d = std::arg(f1 / f0);
  if (std::abs(d) <= 0.5 * pi) {
    if (depth > 0) return d;  // accept only after at least one refinement level
  }
  if (depth > 52) throw contour_error("winding_number: argument tracking failed to resolve");
  const cplx zm = 0.5 * (z0 + z1);
  const cplx fm = f(zm);
  return arg_increment(f, z0, f0, zm, fm, small_tol, depth + 1) +
         arg_increment(f, zm, fm, z1, f1, small_tol, depth + 1);
}

}  // namespace

int winding_number(const std::function<cplx(cplx)>& f, std::span<const cplx> polygon,
                   double rel_tol, double* boundary_max_abs) {
  const std::size_t m = polygon.size();
  // Pre-sample to fix the local scale; the tolerance guarding against a zero
  // sitting on the contour is relative to it.
  std::vector<std::vector<cplx>> fs(m);
  double fmax = 0.0;
  const int chunks = 8;
  for (std::size_t i = 0; i < m; ++i) {
    fs[i].resize(chunks + 1);
    for (int c = 0; c <= chunks; ++c) {
      const cplx z = polygon[i] + (polygon[(i + 1) % m] - polygon[i]) * (double(c) / chunks);
      fs[i][c] = f(z);
      fmax = std::max(fmax, std::abs(fs[i][c]));
    }
  }
  if (boundary_max_abs) *boundary_max_abs = fmax;
  if (fmax == 0.0) throw contour_error("winding_number: function vanishes on the contour");
  const double small_tol = rel_tol * fmax;

  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const cplx a = polygon[i], b = polygon[(i + 1) % m];
    for (int c = 0; c < chunks; ++c) {
      const cplx z0 = a + (b - a) * (double(c) / chunks);
      const cplx z1 = a + (b - a) * (double(c + 1) / chunks);
      total += arg_increment(f, z0, fs[i][c], z1, fs[i][c + 1], small_tol, 0);
    }
  }
  const double w = total / (2.0 * pi);
  const int wi = int(std::lround(w));
  if (std::abs(w - wi) > 1e-6)
    throw contour_error("winding_number: non-integer winding " + std::to_string(w));
  return wi;
}

namespace {

std::vector<cplx> jittered_polygon(const std::vector<cplx>& poly, cplx shift) {
  std::vector<cplx> out(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) out[i] = poly[i] + shift;
  return out;
}

int winding_with_retries(const std::function<cplx(cplx)>& f, const std::vector<cplx>& poly,
                         double jitter_scale, std::uint64_t seed, int max_retries,
                         double* boundary_max_abs = nullptr) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int attempt = 0;; ++attempt) {
    // The jitter grows geometrically: a zero of multiplicity m on the contour
    // needs a shift large enough for |f| ~ dist^m to clear the noise floor.
    const double amp = jitter_scale * std::min(std::pow(4.0, attempt - 1), 2e3);
    const cplx shift = attempt == 0 ? cplx(0.0) : amp * cplx(uni(rng), uni(rng));
    try {
      return winding_number(f, jittered_polygon(poly, shift), 1e-10, boundary_max_abs);
    } catch (const contour_error&) {
      if (attempt >= max_retries) throw;
    }
  }
}

struct Box {
  cplx center;
  double half;  // half edge length
};

std::vector<cplx> box_corners(const Box& b) {
  return {b.center + cplx(-b.half, -b.half), b.center + cplx(b.half, -b.half),
          b.center + cplx(b.half, b.half), b.center + cplx(-b.half, b.half)};
}

// Newton iteration on u = f/f' (simple zero of u regardless of multiplicity).
// Accuracy saturates around eps^(1/m) for a multiplicity-m zero.
cplx polish_zero(const ThetaElement& th, cplx z, double step_tol) {
  for (int it = 0; it < 80; ++it) {
    const cplx f = th.eval(z);
    const cplx f1 = th.eval(z, 1);
    const cplx f2 = th.eval(z, 2);
    const cplx denom = f1 * f1 - f * f2;
    if (denom == cplx(0.0)) break;
    const cplx dz = f * f1 / denom;
    z -= dz;
    if (std::abs(dz) < step_tol) break;
  }
  return z;
}

// Newton on the (m-1)-th derivative, which has a simple zero at a
// multiplicity-m zero of theta; restores full accuracy.
cplx polish_deriv(const ThetaElement& th, cplx z, int mult, double step_tol) {
  for (int it = 0; it < 80; ++it) {
    const cplx g = th.eval(z, mult - 1);
    const cplx g1 = th.eval(z, mult);
    if (g1 == cplx(0.0)) break;
    const cplx dz = g / g1;
    z -= dz;
    if (std::abs(dz) < step_tol) break;
  }
  return z;
}

// Winding on a circle around z; the radius starts at r0 and grows until the
// samples clear the noise floor (high-multiplicity zeros evaluate to noise on
// tiny circles in double precision).
int multiplicity_probe(const ThetaElement& th, cplx z, double r0, double rmax,
                       double noise_floor, std::uint64_t seed, int retries) {
  const auto f = [&](cplx w) { return th.eval(w); };
  for (double r = r0; r <= rmax; r *= 2.0) {
    double mx = 0.0;
    for (int i = 0; i < 16; ++i)
      mx = std::max(mx, std::abs(th.eval(z + r * std::exp(2.0 * pi * I * (i / 16.0)))));
    if (mx < noise_floor) continue;
    std::vector<cplx> circle(24);
    for (int i = 0; i < 24; ++i)
      circle[i] = z + r * std::exp(2.0 * pi * I * (double(i) / 24.0));
    return winding_with_retries(f, circle, 0.05 * r, seed, retries);
  }
  throw precision_error("find_zeros: multiplicity probe stayed below the noise floor");
}

}  // namespace

int count_zeros(const ThetaElement& theta, const WignerSeitzCell& cell,
                const ZeroFindOptions& opt) {
  if (theta.is_zero()) throw std::domain_error("count_zeros: zero element");
  const auto f = [&](cplx z) { return theta.eval(z); };
  // A translated contour still bounds a fundamental domain, so the count is
  // unaffected by the jitter ladder.
  return winding_with_retries(f, cell.vertices(), 1e-6 * cell.diameter(), opt.seed,
                              opt.max_retries);
}

Divisor find_zeros(const ThetaElement& theta, const WignerSeitzCell& cell,
                   const ZeroFindOptions& opt) {
  if (theta.is_zero()) throw std::domain_error("find_zeros: zero element");
  const double diam = cell.diameter();
  const double scale = theta.cell_scale();
  const double noise_floor = 1e-12 * scale;
  const auto f = [&](cplx z) { return theta.eval(z); };

  // Quadtree over the cell's bounding box, slightly dilated so boundary zeros
  // are caught on one side or the other (duplicates merge after
  // canonicalization).
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (cplx v : cell.vertices()) {
    xmin = std::min(xmin, v.real());
    xmax = std::max(xmax, v.real());
    ymin = std::min(ymin, v.imag());
    ymax = std::max(ymax, v.imag());
  }
  const double pad = 1e-3 * diam;
  const cplx c0(0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
  const double half0 = 0.5 * std::max(xmax - xmin, ymax - ymin) + pad;

  std::vector<Box> work{{c0, half0}};
  std::vector<cplx> raw;
  const double leaf = opt.box_tol * diam;
  while (!work.empty()) {
    const Box b = work.back();
    work.pop_back();
    if (cell.signed_distance(b.center) > b.half * 1.4143 + pad) continue;
    int w = -1;
    double bmax = 0.0;
    try {
      w = winding_with_retries(f, box_corners(b), 0.3 * b.half, opt.seed, opt.max_retries,
                               &bmax);
    } catch (const contour_error&) {
      w = -1;  // unresolved frame; decide below
    }
    if (w == 0) continue;
    // Inside the numerically flat neighborhood of a high-multiplicity zero the
    // winding cannot be resolved; stop refining and let the polish take over.
    const bool resolvable = bmax > noise_floor;
    if (b.half > leaf && resolvable) {
      const double h = 0.5 * b.half;
      work.push_back({b.center + cplx(h, h), h});
      work.push_back({b.center + cplx(-h, h), h});
      work.push_back({b.center + cplx(h, -h), h});
      work.push_back({b.center + cplx(-h, -h), h});
    } else if (w > 0 || !resolvable) {
      raw.push_back(polish_zero(theta, b.center, 1e-14 * diam));
    }
  }

  // Cluster stage-1 points modulo the lattice. The radius covers the
  // eps^(1/m) saturation of the first polish for multiplicities up to ~6.
  const double rcluster = 6e-3 * diam;
  std::vector<cplx> reps;
  for (cplx z : raw) {
    bool merged = false;
    for (const cplx r : reps)
      if (std::abs(cell.reduce(z - r)) < rcluster) {
        merged = true;
        break;
      }
    if (!merged) reps.push_back(z);
  }

  const double rmult = opt.mult_radius * diam;
  Divisor div;
  for (cplx z : reps) {
    // First multiplicity estimate on a wide circle, then a sharp re-polish on
    // the (m-1)-th derivative, then the probe at the contractual radius.
    int mult = multiplicity_probe(theta, z, 4.0 * rcluster, 0.2 * diam, noise_floor,
                                  opt.seed + 1, opt.max_retries);
    for (int pass = 0; pass < 3; ++pass) {
      if (mult <= 0) break;
      const cplx zp = mult == 1 ? polish_zero(theta, z, 1e-15 * diam)
                                : polish_deriv(theta, z, mult, 1e-15 * diam);
      if (std::abs(zp - z) < 2.0 * rcluster) z = zp;
      const int m2 = multiplicity_probe(theta, z, rmult, 0.2 * diam, noise_floor,
                                        opt.seed + 2, opt.max_retries);
      if (m2 == mult) break;
      mult = m2;
    }
    if (mult <= 0) throw precision_error("find_zeros: nonpositive local multiplicity");
    if (std::abs(theta.eval(z)) > opt.residual_tol * scale)
      throw precision_error("find_zeros: polished residual too large at zero " +
                            std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i");
    div.entries.push_back({cell.canonicalize(z), mult});
  }

  // Merge entries that canonicalized onto the same representative.
  Divisor merged;
  for (const auto& e : div.entries) {
    bool found = false;
    for (const auto& me : merged.entries)
      if (std::abs(me.z - e.z) < rcluster) {
        found = true;  // boundary zero reached from both sides
        break;
      }
    if (!found) merged.entries.push_back(e);
  }

  if (merged.degree() != theta.degree())
    throw precision_error("find_zeros: divisor degree " + std::to_string(merged.degree()) +
                          " != n = " + std::to_string(theta.degree()) +
                          " (unresolved zero cluster below resolution)");
  std::sort(merged.entries.begin(), merged.entries.end(), [](const auto& a, const auto& b) {
    return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
  });
  return merged;
}

int zero_order_at(const ThetaElement& theta, cplx z0, const ZeroFindOptions& opt) {
  if (theta.is_zero()) throw std::domain_error("zero_order_at: zero element");
  const double scale = theta.cell_scale();
  const double diam = 1.0 + std::abs(theta.tau());
  if (std::abs(theta.eval(z0)) > 1e-8 * scale) return 0;
  return multiplicity_probe(theta, z0, opt.mult_radius * diam, 0.2 * diam, 1e-12 * scale,
                            opt.seed, opt.max_retries);
}

// ---------------------------------------------------------------------------
// Collocation fits
// ---------------------------------------------------------------------------

std::vector<cplx> collocation_points(cplx tau, int count) {
  // Kronecker sequence driven by the plastic constant; deterministic and
  // well-spread over the fundamental cell.
  const double rho = 1.32471795724474602596;
  const double a1 = 1.0 / rho, a2 = 1.0 / (rho * rho);
  std::vector<cplx> pts(count);
  for (int i = 0; i < count; ++i) {
    const double s = std::fmod(0.5 + a1 * (i + 1), 1.0) - 0.5;
    const double t = std::fmod(0.5 + a2 * (i + 1), 1.0) - 0.5;
    pts[i] = s + tau * t;
  }
  return pts;
}

ThetaElement from_samples(int n, cplx tau, std::span<const cplx> pts,
                          std::span<const cplx> values, CollocationInfo* info) {
  const int P = int(pts.size());
  if (P < n) throw std::domain_error("from_samples: need at least n sample points");
  Eigen::MatrixXcd A(P, n);
  for (int i = 0; i < P; ++i)
    for (int m = 0; m < n; ++m) A(i, m) = theta_basis(n, m, pts[i], tau, 0);
  Eigen::VectorXcd rhs(P);
  for (int i = 0; i < P; ++i) rhs[i] = values[i];

  Eigen::VectorXd colscale(n);
  for (int m = 0; m < n; ++m) colscale[m] = std::max(A.col(m).norm(), 1e-300);
  Eigen::MatrixXcd As = A * colscale.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXcd cs = svd.solve(rhs);
  Eigen::VectorXcd coeffs = colscale.cwiseInverse().asDiagonal() * cs;
  if (info) {
    info->cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    info->residual = (A * coeffs - rhs).norm() / std::max(rhs.norm(), 1e-300);
  }
  return ThetaElement(n, tau, std::move(coeffs));
}

ThetaElement product(const ThetaElement& a, const ThetaElement& b, CollocationInfo* info) {
  if (a.tau() != b.tau()) throw std::domain_error("product: mismatched tau");
  const int n = a.degree() + b.degree();
  const int P = std::max(4 * n, 3 * n + 16);
  const auto pts = collocation_points(a.tau(), P);
  std::vector<cplx> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = a.eval(pts[i]) * b.eval(pts[i]);
  return from_samples(n, a.tau(), pts, vals, info);
}

std::pair<std::vector<ThetaElement>, std::vector<ThetaElement>> parity_split(int n, cplx tau) {
  std::vector<ThetaElement> even, odd;
  for (int j = 0; j <= n / 2; ++j) {
    const int jc = (n - j) % n;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
    c[j] += 1.0;
    c[jc] += 1.0;
    even.push_back(ThetaElement(n, tau, c).normalized());
  }
  for (int j = 1; j < n; ++j) {
    const int jc = (n - j) % n;
    if (jc <= j) continue;  // sigma_{j,-} with j = n-j vanishes; keep one per pair
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
    c[j] += 1.0;
    c[jc] -= 1.0;
    odd.push_back(ThetaElement(n, tau, c).normalized());
  }
  return {even, odd};
}

ThetaElement singular_family(int n, int a, int b, cplx tau) {
  if (a < 0 || a >= n || b < 0 || b >= n)
    throw std::domain_error("singular_family: (a, b) out of range [0, n-1]^2");
  const ThetaElement th0 = ThetaElement::basis_element(1, 0, tau);
  const cplx shift = (double(a) + double(b) * tau) / double(n);
  const int P = std::max(4 * n, 3 * n + 16);
  const auto pts = collocation_points(tau, P);
  std::vector<cplx> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx z = pts[i];
    vals[i] = std::pow(th0.eval(z + shift), double(n)) * std::exp(2.0 * pi * I * double(b) * z);
  }
  return from_samples(n, tau, pts, vals);
}

cplx wronskian_value(int n, cplx z, cplx tau, int trunc) {
  if (trunc <= 0)
    trunc = default_trunc(n, tau.imag(), std::abs(z.imag()) / tau.imag() + 0.1) + n;
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = theta_basis(n, j, z, tau, trunc, i);
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
}

ThetaElement wronskian_element(int n, cplx tau, CollocationInfo* info) {
  const int N = n * n;
  const int P = std::max(4 * N, 3 * N + 16);
  const auto pts = collocation_points(tau, P);
  std::vector<cplx> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = wronskian_value(n, pts[i], tau);
  return from_samples(N, tau, pts, vals, info);
}

QuotientResult quotient_check(const ThetaElement& theta, const ThetaElement& sigma,
                              const ZeroFindOptions& opt) {
  if (theta.tau() != sigma.tau()) throw std::domain_error("quotient_check: mismatched tau");
  if (sigma.degree() >= theta.degree())
    throw std::domain_error("quotient_check: divisor degree must drop");
  const auto cell = wigner_seitz(cplx(1.0, 0.0), theta.tau());
  const Divisor dt = find_zeros(theta, cell, opt);
  const Divisor ds = find_zeros(sigma, cell, opt);

  QuotientResult res;
  const double match_tol = 8.0 * opt.mult_radius * cell.diameter();
  res.divisible = dt.contains(ds, match_tol);
  if (!res.divisible) return res;

  const int n = theta.degree() - sigma.degree();
  const auto all_pts = collocation_points(theta.tau(), 10 * n + 80);
  std::vector<cplx> pts, vals;
  const double keep_away = 0.05 * cell.diameter();
  for (cplx z : all_pts) {
    bool ok = true;
    for (const auto& e : ds.entries)
      if (std::abs(cell.reduce(z - e.z)) < keep_away) ok = false;
    for (const auto& e : dt.entries)
      if (std::abs(cell.reduce(z - e.z)) < keep_away) ok = false;
    if (!ok) continue;
    pts.push_back(z);
    vals.push_back(theta.eval(z) / sigma.eval(z));
    if (int(pts.size()) >= 6 * n + 40) break;
  }
  CollocationInfo ci;
  res.quotient = from_samples(n, theta.tau(), pts, vals, &ci);
  res.fit_residual = ci.residual;

  // Quasi-periodicity of the sampled ratio itself (V_{n-m} defining relations).
  double worst = 0.0;
  const cplx tau = theta.tau();
  double scale = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 12); ++i)
    scale = std::max(scale, std::abs(vals[i]));
  for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 12); ++i) {
    const cplx z = pts[i];
    const cplx r = vals[i];
    const cplx r1 = theta.eval(z + 1.0) / sigma.eval(z + 1.0);
    const cplx mult = std::exp(-2.0 * pi * I * double(n) * z - I * pi * double(n) * tau);
    const cplx rt = theta.eval(z + tau) / sigma.eval(z + tau);
    worst = std::max({worst, std::abs(r1 - r) / scale,
                      std::abs(rt - mult * r) / (scale * std::max(1.0, std::abs(mult)))});
  }
  res.quasi_periodicity = worst;
  return res;
}

}  // namespace glv
