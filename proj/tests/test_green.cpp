#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "approx.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "cpnf/constants.hpp"
#include "cpnf/dielectric.hpp"
#include "cpnf/error.hpp"
#include "cpnf/green.hpp"
#include "cpnf/quadrature.hpp"

using namespace cpnf;

namespace {

constexpr double kPi = constants::pi;
constexpr double kC = constants::c;

double rel(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

// ---------------------------------------------------------------------------
// Second implementation of the cylinder coefficients and of the trace
// integrand, written from the J_n / H_n^(1) form for real beta with Boost's
// real-argument Bessel functions.  eta = sqrt(k^2 - beta^2) is either real or
// i times a real number, so every cylinder function reduces to J, Y, I or K of
// a real argument.  R is double or float128; the latter is used near the
// branch points where the terms cancel.

template <class R>
struct Eta {
  R mag;
  bool imaginary;
};

template <class R>
Eta<R> make_eta(R k_sq, R beta) {
  const R d = k_sq - beta * beta;
  using std::sqrt;
  using boost::multiprecision::sqrt;
  return d >= 0 ? Eta<R>{sqrt(d), false} : Eta<R>{sqrt(-d), true};
}

template <class C>
C ipow(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return C(1, 0);
    case 1: return C(0, 1);
    case 2: return C(-1, 0);
    default: return C(0, -1);
  }
}

template <class R, class C>
struct Cyl {
  C J, Jp, H, Hp;  // J_m(z), J_m'(z), H_m(z), H_m'(z) at z = eta rho
};

template <class R, class C>
Cyl<R, C> cylinder_functions(int m, const Eta<R>& eta, R rho) {
  namespace bm = boost::math;
  const R x = eta.mag * rho;
  Cyl<R, C> out;
  if (!eta.imaginary) {
    const R j = bm::cyl_bessel_j(m, x), jp = bm::cyl_bessel_j_prime(m, x);
    const R y = bm::cyl_neumann(m, x), yp = bm::cyl_neumann_prime(m, x);
    out.J = C(j, 0);
    out.Jp = C(jp, 0);
    out.H = C(j, y);
    out.Hp = C(jp, yp);
  } else {
    // J_m(ix) = i^m I_m(x), H_m(ix) = (2/pi) i^{-m-1} K_m(x)
    const R two_pi = 2 / boost::math::constants::pi<R>();
    out.J = ipow<C>(m) * C(bm::cyl_bessel_i(m, x), 0);
    out.Jp = ipow<C>(m - 1) * C(bm::cyl_bessel_i_prime(m, x), 0);
    out.H = ipow<C>(-m - 1) * C(two_pi * bm::cyl_bessel_k(m, x), 0);
    out.Hp = ipow<C>(-m - 2) * C(two_pi * bm::cyl_bessel_k_prime(m, x), 0);
  }
  return out;
}

template <class R, class C>
C as_complex(const Eta<R>& e) {
  return e.imaginary ? C(0, e.mag) : C(e.mag, 0);
}

template <class C>
struct OracleCoeffs {
  C A, B, C_, D, W;
};

template <class R, class C>
OracleCoeffs<C> oracle_coeffs_real(R a, R e1, R e2, R k0, int n, R beta) {
  const R k1s = e1 * k0 * k0, k2s = e2 * k0 * k0;
  const Eta<R> e1t = make_eta(k1s, beta), e2t = make_eta(k2s, beta);
  const C eta1 = as_complex<R, C>(e1t), eta2 = as_complex<R, C>(e2t);
  const int m = n < 0 ? -n : n;
  const auto f1 = cylinder_functions<R, C>(m, e1t, a);
  const auto f2 = cylinder_functions<R, C>(m, e2t, a);
  const C r1 = f1.Jp / (eta1 * f1.J);
  const C r2j = f2.Jp / (eta2 * f2.J);
  const C r2h = f2.Hp / (eta2 * f2.H);
  const C delta = C(1, 0) / (eta2 * eta2) - C(1, 0) / (eta1 * eta1);
  const C nb = C(R(n) * R(n) * beta * beta / (a * a), 0) * delta * delta;
  const C K1(k1s, 0), K2(k2s, 0);
  OracleCoeffs<C> o;
  o.W = -nb + (r1 - r2h) * (K1 * r1 - K2 * r2h);
  const C pre = f2.J / f2.H / o.W;
  o.A = pre * (nb - (r1 - r2j) * (K1 * r1 - K2 * r2h));
  o.C_ = pre * (nb - (r1 - r2h) * (K1 * r1 - K2 * r2j));
  using std::sqrt;
  using boost::multiprecision::sqrt;
  const R k2 = sqrt(k2s);
  o.B = o.D = pre * C(k2, 0) / eta2 * C(R(n) * beta / a, 0) * delta * (f2.Jp / f2.J - f2.Hp / f2.H);
  return o;
}

// Summand of the real-frequency trace for one signed order, before the
// i/(8 pi) prefactor.
template <class R, class C>
C oracle_trace_term(R a, R e1, R e2, R k0, int n, R beta, R r) {
  const auto o = oracle_coeffs_real<R, C>(a, e1, e2, k0, n, beta);
  const R k2s = e2 * k0 * k0;
  const Eta<R> e2t = make_eta(k2s, beta);
  const C eta2 = as_complex<R, C>(e2t);
  const auto fr = cylinder_functions<R, C>(n < 0 ? -n : n, e2t, r);
  using std::sqrt;
  using boost::multiprecision::sqrt;
  const C K2(k2s, 0);
  const C nn(R(n) * R(n), 0), rr(r * r, 0);
  return (o.A + o.C_ * C(beta * beta, 0) / K2) * (nn / (eta2 * eta2 * rr) * fr.H * fr.H + fr.Hp * fr.Hp) +
         o.C_ * eta2 * eta2 / K2 * fr.H * fr.H +
         C(2, 0) * (o.B + o.D) * C(R(n) * beta, 0) / (eta2 * C(sqrt(k2s) * r, 0)) * fr.H * fr.Hp;
}

struct OracleFiber {
  double a, e1, e2, k0;
};

using quad = boost::multiprecision::float128;
using cquad = boost::multiprecision::complex128;

// Sum over n = -N..N at real beta, in quad precision near k2 and k1.
complex oracle_sum(const OracleFiber& f, double beta, double r, int n_max) {
  const double k1 = std::sqrt(f.e1) * f.k0, k2 = std::sqrt(f.e2) * f.k0;
  const bool near = std::abs(beta * beta - k2 * k2) < 0.0025 * k2 * k2 || std::abs(beta * beta - k1 * k1) < 0.0025 * k1 * k1;
  complex s = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    if (near) {
      const cquad t = oracle_trace_term<quad, cquad>(f.a, f.e1, f.e2, f.k0, n, beta, r);
      s += complex(double(t.real()), double(t.imag()));
    } else {
      s += oracle_trace_term<double, complex>(f.a, f.e1, f.e2, f.k0, n, beta, r);
    }
  }
  return s;
}

// 20-point Gauss-Legendre on [lo, hi].
complex gauss_legendre(const std::function<complex(double)>& g, double lo, double hi) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  complex s = 0.0;
  for (size_t i = 0; i < rule::abscissa().size(); ++i) {
    const double x = rule::abscissa()[i], w = rule::weights()[i];
    s += w * (g(c - h * x) + g(c + h * x));
  }
  return s * h;
}

// Tr G^sc(R, R; omega) from the oracle: the real beta axis with the single
// guided pole taken out by residue subtraction and passed below (+i pi Res).
complex oracle_real_trace(const OracleFiber& f, double r, double beta_pole_guess, int n_max) {
  const double k2 = std::sqrt(f.e2) * f.k0;
  auto G = [&](double beta) { return oracle_sum(f, beta, r, n_max); };

  // pole refined in quad precision on the oracle's own W
  auto w_re = [&](quad beta) { return oracle_coeffs_real<quad, cquad>(f.a, f.e1, f.e2, f.k0, 1, beta).W.real(); };
  quad lo = beta_pole_guess * (1 - 1e-9), hi = beta_pole_guess * (1 + 1e-9);
  const bool lo_neg = w_re(lo) < 0;
  REQUIRE(lo_neg != (w_re(hi) < 0));
  for (int i = 0; i < 120; ++i) {
    const quad mid = (lo + hi) / 2;
    ((w_re(mid) < 0) == lo_neg ? lo : hi) = mid;
  }
  const quad bp = (lo + hi) / 2;
  // residue of the summed integrand from symmetric offsets
  const quad h = bp * quad(1e-12);
  cquad res(0, 0);
  for (int n = -n_max; n <= n_max; ++n)
    res += (oracle_trace_term<quad, cquad>(f.a, f.e1, f.e2, f.k0, n, bp + h, r) -
            oracle_trace_term<quad, cquad>(f.a, f.e1, f.e2, f.k0, n, bp - h, r)) *
           cquad(h / 2, 0);
  const complex R(double(res.real()), double(res.imag()));
  const double beta_p = double(bp);

  complex total = 0.0;
  // radiation side beta = k2 sin t, panels graded toward t = pi/2
  auto rad = [&](double t) { return G(k2 * std::sin(t)) * (k2 * std::cos(t)); };
  const double top = kPi / 2;
  for (int i = 0; i < 6; ++i) total += gauss_legendre(rad, i * (top - 0.25) / 6, (i + 1) * (top - 0.25) / 6);
  // the cos t and sinh s weights make the slivers left at the light line O(width^2)
  for (int k = 0; k < 18; ++k) total += gauss_legendre(rad, top - 0.25 * std::pow(0.5, k), top - 0.25 * std::pow(0.5, k + 1));
  // evanescent side up to the pole window, graded toward s = 0
  const double delta = 0.3 * (beta_p - k2);
  auto ev = [&](double s) { return G(k2 * std::cosh(s)) * (k2 * std::sinh(s)); };
  const double s1 = std::acosh((beta_p - delta) / k2);
  for (int k = 0; k < 16; ++k) total += gauss_legendre(ev, s1 * std::pow(0.5, k + 1), s1 * std::pow(0.5, k));
  // pole window, symmetric about the pole so the subtracted 1/(beta - beta_p) integrates to 0
  auto sub = [&](double beta) { return G(beta) - R / (beta - beta_p); };
  for (int i = 0; i < 4; ++i) {
    total += gauss_legendre(sub, beta_p - delta * (i + 1) / 4, beta_p - delta * i / 4);
    total += gauss_legendre(sub, beta_p + delta * i / 4, beta_p + delta * (i + 1) / 4);
  }
  total += complex(0.0, kPi) * R;
  // tail up to q2 (r - a) = 40
  const double s2 = std::acosh((beta_p + delta) / k2);
  const double s_end = std::acosh(std::hypot(40.0 / (r - f.a), k2) / k2);
  const int panels = static_cast<int>(std::ceil((s_end - s2) / 0.04));
  for (int i = 0; i < panels; ++i)
    total += gauss_legendre(ev, s2 + (s_end - s2) * i / panels, s2 + (s_end - s2) * (i + 1) / panels);
  // i/(8 pi) times twice the half-axis integral
  return complex(0.0, 1.0 / (4.0 * kPi)) * total;
}

// Imaginary-frequency coefficients from the I_n / K_n form.
struct ImagCoeffs {
  double A, C, B_over_i;
};

ImagCoeffs oracle_coeffs_imag(double a, double e1, double e2, double u, int n, double beta) {
  namespace bm = boost::math;
  const double ks1 = e1 * u * u / (kC * kC), ks2 = e2 * u * u / (kC * kC);
  const double q1 = std::sqrt(ks1 + beta * beta), q2 = std::sqrt(ks2 + beta * beta);
  const int m = std::abs(n);
  const double i1 = bm::cyl_bessel_i(m, q1 * a), i1p = bm::cyl_bessel_i_prime(m, q1 * a);
  const double i2 = bm::cyl_bessel_i(m, q2 * a), i2p = bm::cyl_bessel_i_prime(m, q2 * a);
  const double k2 = bm::cyl_bessel_k(m, q2 * a), k2p = bm::cyl_bessel_k_prime(m, q2 * a);
  const double ri1 = i1p / (q1 * i1), ri2 = i2p / (q2 * i2), rk2 = k2p / (q2 * k2);
  const double d = 1.0 / (q2 * q2) - 1.0 / (q1 * q1);
  const double nb = double(n) * n * beta * beta / (a * a) * d * d;
  const double w = nb + (ri1 - rk2) * (ks1 * ri1 - ks2 * rk2);
  const double pre = i2 / k2 / w;
  ImagCoeffs o;
  o.A = pre * (nb + (ri1 - ri2) * (ks1 * ri1 - ks2 * rk2));
  o.C = pre * (nb + (ri1 - rk2) * (ks1 * ri1 - ks2 * ri2));
  o.B_over_i = pre * std::sqrt(ks2) / q2 * n * beta / a * d * (i2p / i2 - k2p / k2);
  return o;
}

// Summand of the imaginary-frequency trace for one signed order, before 1/(4 pi^2).
double oracle_imag_term(double a, double e1, double e2, double u, int n, double beta, double r) {
  namespace bm = boost::math;
  const auto o = oracle_coeffs_imag(a, e1, e2, u, n, beta);
  const double ks2 = e2 * u * u / (kC * kC), kap2 = std::sqrt(ks2);
  const double q2 = std::sqrt(ks2 + beta * beta);
  const int m = std::abs(n);
  const double kr = bm::cyl_bessel_k(m, q2 * r), krp = bm::cyl_bessel_k_prime(m, q2 * r);
  // -2i (B + D) with B = D = i B_over_i gives +4 B_over_i
  return (o.A - o.C * beta * beta / ks2) * (double(n) * n / (q2 * q2 * r * r) * kr * kr + krp * krp) -
         o.C * q2 * q2 / ks2 * kr * kr + 4.0 * o.B_over_i * n * beta / (q2 * kap2 * r) * kr * krp;
}

const PermittivityModel& silica() {
  static const PermittivityModel m = default_silica();
  return m;
}

FiberGeometry silica_fiber(double radius) {
  FiberGeometry g;
  g.radius = radius;
  g.eps_inner = silica();
  return g;
}

const double kOmegaD2 = omega_from_wavelength(780.241e-9);

}  // namespace

TEST_CASE("real-frequency coefficients against the J/H implementation") {
  const double a = 200e-9;
  const double omega = omega_from_wavelength(780e-9);
  const double e1 = silica().eps_real_freq(omega).eps.real();
  const double k0 = omega / kC;
  const CylinderAt cyl{a, e1, 1.0};
  // radiation regime (both eta real), guided regime and evanescent regime
  for (double b_over_k2 : {0.5, 0.93, 1.2, 1.7, 3.0})
    for (int n : {-3, -1, 0, 1, 2, 5}) {
      CAPTURE(b_over_k2);
      CAPTURE(n);
      const double beta = b_over_k2 * k0;
      const auto lib = coeffs_real_freq(cyl, n, beta, omega);
      const auto o = oracle_coeffs_real<double, complex>(a, e1, 1.0, k0, n, beta);
      const double scale = std::abs(o.A) + std::abs(o.C_);
      CHECK(std::abs(lib.A - o.A) < 1e-12 * scale);
      CHECK(std::abs(lib.C - o.C_) < 1e-12 * scale);
      CHECK(std::abs(lib.B - o.B) < 1e-12 * scale);
      CHECK(lib.B == lib.D);
      if (n == 0) CHECK(lib.B == complex(0.0));
    }
}

TEST_CASE("imaginary-frequency coefficients against the I/K implementation") {
  const double a = 200e-9, e1 = 2.1, u = 3.0e15;
  const double ks2 = u * u / (kC * kC);
  // q2 a = 3 at n = 2
  const double beta = std::sqrt(9.0 / (a * a) - ks2);
  const CylinderAt cyl{a, e1, 1.0};
  for (int n : {2, -2, 0, 1, 7}) {
    CAPTURE(n);
    const auto lib = coeffs_imag_freq(cyl, n, beta, u);
    const auto o = oracle_coeffs_imag(a, e1, 1.0, u, n, beta);
    CHECK(lib.A.real() == approx(o.A).epsilon(1e-12));
    CHECK(lib.C.real() == approx(o.C).epsilon(1e-12));
    CHECK(std::abs(lib.B.imag() - o.B_over_i) <= 1e-12 * (std::abs(o.A) + std::abs(o.C)));
    CHECK(lib.A.imag() == 0.0);
    CHECK(lib.C.imag() == 0.0);
    CHECK(lib.B.real() == 0.0);
    CHECK(lib.B == lib.D);
  }
}

TEST_CASE("homogeneous medium reflects nothing") {
  const CylinderAt same{200e-9, 2.1, 2.1};
  const double omega = kOmegaD2, k0 = omega / kC;
  for (int n : {0, 1, 4})
    for (double b : {0.3, 1.2, 2.5}) {
      const auto rr = coeffs_real_freq(same, n, b * k0, omega);
      const auto ri = coeffs_imag_freq(same, n, b * k0, 2e15);
      for (complex v : {rr.A, rr.B, rr.C, rr.D, ri.A, ri.B, ri.C, ri.D}) CHECK(std::abs(v) < 1e-12);
    }
  const double r = 300e-9;
  const auto g_same = trace_sc_imag(same, r, 2e15);
  const auto g_diff = trace_sc_imag(CylinderAt{200e-9, 2.1, 1.0}, r, 2e15);
  CHECK(std::abs(g_same.value) < 1e-12 * std::abs(g_diff.value));
  const CylinderAt same_real{200e-9, 2.1, 2.1};
  const double k2 = std::sqrt(2.1) * k0;
  const auto plan = make_pole_plan({}, k2, k2, HalfPlane::lower);
  const auto gr_same = trace_sc_real(same_real, r, omega, plan);
  const CylinderAt silica_like{200e-9, 2.1, 1.0};
  const auto poles = locate_guided_mode_poles(silica_like, omega);
  const auto gr_diff = trace_sc_real(silica_like, r, omega, make_pole_plan(poles, k0, std::sqrt(2.1) * k0, HalfPlane::lower));
  CHECK(std::abs(gr_same.value) < 1e-12 * std::abs(gr_diff.value));
}

TEST_CASE("coefficient parity at random points") {
  std::mt19937_64 rng(20261018);
  std::uniform_int_distribution<int> order(0, 12);
  std::uniform_real_distribution<double> bdist(0.05, 4.0);
  const double omega = kOmegaD2, k0 = omega / kC, u = 1.7e15;
  const CylinderAt cyl{200e-9, 2.1, 1.0};
  auto close = [](complex x, complex y) { return std::abs(x - y) <= 1e-13 * std::max(std::abs(x), 1e-300); };
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    const int n = order(rng);
    double beta = bdist(rng) * k0;
    if (std::abs(beta - k0) < 1e-3 * k0) beta += 2e-3 * k0;
    for (bool imag : {false, true}) {
      auto get = [&](int nn, double b) { return imag ? coeffs_imag_freq(cyl, nn, b, u) : coeffs_real_freq(cyl, nn, b, omega); };
      const auto p = get(n, beta), mn = get(-n, beta), mb = get(n, -beta), mnb = get(-n, -beta);
      const bool ok = close(p.A, mn.A) && close(p.A, mb.A) && close(p.A, mnb.A) && close(p.C, mn.C) &&
                      close(p.C, mb.C) && close(p.C, mnb.C) && close(-p.B, mn.B) && close(-p.B, mb.B) &&
                      close(p.B, mnb.B) && close(-p.D, mb.D);
      if (!ok) ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("imaginary-frequency trace against a dense trapezoid oracle") {
  const double a = 200e-9, r = a + 100e-9, u = kOmegaD2;
  const double e1 = silica().eps_imag_freq(u);
  const auto lib = trace_sc_imag(CylinderAt{a, e1, 1.0}, r, u);
  // trapezoid in beta over [0, beta_max] with q2 (r - a) = 45 at the end;
  // the integrand is even in beta, so the rule is fourth order at 0
  const double beta_max = 45.0 / (r - a);
  const int nodes = 6000, n_max = 30;
  const double h = beta_max / nodes;
  double sum = 0.0;
  for (int i = 0; i <= nodes; ++i) {
    const double beta = i * h;
    double g = 0.0;
    for (int n = -n_max; n <= n_max; ++n) g += oracle_imag_term(a, e1, 1.0, u, n, beta == 0.0 ? 1e-3 : beta, r);
    sum += (i == 0 || i == nodes ? 0.5 : 1.0) * g;
  }
  const double oracle = 2.0 * sum * h / (4.0 * kPi * kPi);
  CHECK(oracle < 0.0);
  CHECK(lib.value.real() < 0.0);
  CHECK(lib.value.real() == approx(oracle).epsilon(1e-6));
  CHECK(std::abs(lib.value.imag()) <= 1e-10 * std::abs(lib.value.real()));
}

TEST_CASE("imaginary-frequency trace decays with distance") {
  const FiberGeometry fib = silica_fiber(200e-9);
  double prev = INFINITY;
  for (double d = 100e-9; d <= 800e-9 + 1e-12; d += 50e-9) {
    const double v = std::abs(trace_sc_imag(fib, fib.radius + d, kOmegaD2).value.real());
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("diagonal blocks add up to the trace summand") {
  const CylinderAt cyl{200e-9, 2.1, 1.0};
  const double omega = kOmegaD2, k0 = omega / kC, r = 350e-9;
  for (int n : {0, 1, 3})
    for (complex beta : {complex(0.4 * k0), complex(1.1 * k0, -0.02 * k0), complex(2.5 * k0)}) {
      const auto d = diagonal_integrand(cyl, n, beta, r, omega, false);
      const complex t = trace_integrand(cyl, n, beta, r, omega, false);
      CHECK(std::abs(d.rr + d.pp + d.zz - t) <= 1e-12 * std::abs(t));
      const auto di = diagonal_integrand(cyl, n, beta.real(), r, 2e15, true);
      const complex ti = trace_integrand(cyl, n, beta.real(), r, 2e15, true);
      CHECK(std::abs(di.rr + di.pp + di.zz - ti) <= 1e-12 * std::abs(ti));
    }
}

TEST_CASE("further azimuthal orders stay inside the error estimate") {
  const FiberGeometry fib = silica_fiber(200e-9);
  const double r = fib.radius + 150e-9;
  const auto base = trace_sc_imag(fib, r, kOmegaD2);
  TraceOptions more;
  more.extra_orders = 3;
  const auto extended = trace_sc_imag(fib, r, kOmegaD2, more);
  CHECK(std::abs(extended.value - base.value) <
        (base.beta_error_estimate + base.n_error_estimate) * std::abs(base.value));
  CHECK(base.n_error_estimate < 1e-7);
  CHECK(extended.n_terms_used >= base.n_terms_used + 3);
}

TEST_CASE("real-frequency trace against the residue-subtracted oracle") {
  const double a = 200e-9, lambda = 780e-9;
  const double omega = omega_from_wavelength(lambda), k0 = omega / kC;
  const double e1 = silica().eps_real_freq(omega).eps.real();
  const CylinderAt cyl{a, e1, 1.0};
  const double r = a + 300e-9;
  const auto poles = locate_guided_mode_poles(cyl, omega);
  REQUIRE(poles.size() == 1);
  const auto plan = make_pole_plan(poles, k0, std::sqrt(e1) * k0, HalfPlane::lower);
  TraceOptions opt;
  opt.beta_rel_tol = 1e-10;
  const auto lib = trace_sc_real(cyl, r, omega, plan, opt);
  const complex oracle = oracle_real_trace({a, e1, 1.0, k0}, r, poles[0].beta, 24);
  CHECK(rel(lib.value, oracle) < 1e-8);
}

TEST_CASE("real-frequency trace against the oracle in the far zone") {
  // 6S-5P3/2 line, several wavelengths from the surface
  const double a = 200e-9, lambda = 1366.9e-9;
  const double omega = omega_from_wavelength(lambda), k0 = omega / kC;
  const double e1 = silica().eps_real_freq(omega).eps.real();
  const CylinderAt cyl{a, e1, 1.0};
  const double r = a + 6e-6;
  const auto poles = locate_guided_mode_poles(cyl, omega);
  REQUIRE(poles.size() == 1);
  const auto plan = make_pole_plan(poles, k0, std::sqrt(e1) * k0, HalfPlane::lower);
  TraceOptions opt;
  opt.beta_rel_tol = 1e-10;
  const auto lib = trace_sc_real(cyl, r, omega, plan, opt);
  const int n_max = static_cast<int>(std::ceil(k0 * r)) + 30;
  const complex oracle = oracle_real_trace({a, e1, 1.0, k0}, r, poles[0].beta, n_max);
  CHECK(rel(lib.value, oracle) < 1e-8);
}

TEST_CASE("far-field trace oscillates with half the wavelength") {
  const double lambda = 780e-9, omega = omega_from_wavelength(lambda);
  const FiberGeometry fib = silica_fiber(200e-9);
  const CylinderAt cyl = at_real_freq(fib, omega);
  const double k0 = omega / kC;
  const auto plan = make_pole_plan(locate_guided_mode_poles(cyl, omega), k0, std::sqrt(cyl.eps_inner.real()) * k0,
                                   HalfPlane::lower);
  std::vector<double> crossings;
  double prev_d = 0.0, prev_v = 0.0;
  double env_near = 0.0, env_far = 0.0;
  for (double d = 600e-9; d <= 2400e-9 + 1e-12; d += 25e-9) {
    const double v = trace_sc_real(cyl, fib.radius + d, omega, plan).value.real();
    if (prev_d > 0.0 && (v < 0.0) != (prev_v < 0.0)) crossings.push_back(prev_d + (d - prev_d) * prev_v / (prev_v - v));
    if (d < 1200e-9) env_near = std::max(env_near, std::abs(v));
    if (d > 1800e-9) env_far = std::max(env_far, std::abs(v));
    prev_d = d;
    prev_v = v;
  }
  REQUIRE(crossings.size() >= 6);
  const double spacing = (crossings.back() - crossings.front()) / (crossings.size() - 1);
  // period lambda/2, so consecutive zeros are lambda/4 apart
  CHECK(spacing == approx(lambda / 4).epsilon(0.1));
  CHECK(env_far < env_near);
}

TEST_CASE("homogeneous imaginary part of the trace") {
  const PermittivityModel vac = PermittivityModel::constant(1.0);
  const double omega = omega_from_wavelength(780e-9);
  CHECK(trace_g0_imagpart(vac, omega) == approx(omega / kC / (2.0 * kPi)).epsilon(1e-15));
  CHECK(trace_g0_imagpart(vac, 2.0 * omega) / trace_g0_imagpart(vac, omega) == 2.0);
  CHECK(trace_g0_imagpart(PermittivityModel::constant(4.0), omega) / trace_g0_imagpart(vac, omega) == 2.0);
  CHECK_THROWS_AS(trace_g0_imagpart(vac, -1.0), DomainError);
}

TEST_CASE("argument checks") {
  const CylinderAt cyl{200e-9, 2.1, 1.0};
  CHECK_THROWS_AS(trace_sc_imag(cyl, 150e-9, 1e15), DomainError);
  CHECK_THROWS_AS(trace_sc_imag(cyl, 300e-9, 0.0), DomainError);
  CHECK_THROWS_AS(coeffs_imag_freq(cyl, 1, 1e7, -1.0), DomainError);
  const CylinderAt lossy_outside{200e-9, 2.1, complex(1.0, 0.1)};
  CHECK_THROWS_AS(trace_sc_real(lossy_outside, 300e-9, kOmegaD2, PoleAvoidancePlan{}), DomainError);
}
