#include "cpnf/green.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpnf/constants.hpp"
#include "cpnf/error.hpp"
#include "cpnf/specfun.hpp"

namespace cpnf {

namespace {

using constants::c;
using constants::pi;
using specfun::ModifiedBesselTable;

double re(double x) { return x; }
double re(complex z) { return z.real(); }

// w = -i eta with eta = sqrt(k^2 - beta^2), Im eta >= 0 (outgoing / decaying).
complex outgoing_w(complex w_sq) {
  complex s = std::sqrt(-w_sq);
  if (s.imag() < 0.0) s = -s;
  return {s.imag(), -s.real()};
}
double outgoing_w(double w_sq) { return std::sqrt(w_sq); }

// Everything about the cylinder at one frequency that the kernels need.
template <class T>
struct Medium {
  double a = 0.0;
  T kap1_sq{}, kap2_sq{};  // kappa_j^2 = -k_j^2
  T kap2{};
};

Medium<double> imag_medium(const CylinderAt& cyl, double u) {
  const double e1 = cyl.eps_inner.real(), e2 = cyl.eps_outer.real();
  if (!(e2 > 0.0) || !std::isfinite(e1)) throw DomainError("imaginary-frequency permittivities must be real, eps_outer > 0");
  Medium<double> m;
  m.a = cyl.radius;
  m.kap1_sq = e1 * u * u / (c * c);
  m.kap2_sq = e2 * u * u / (c * c);
  m.kap2 = std::sqrt(m.kap2_sq);
  return m;
}

Medium<complex> real_medium(const CylinderAt& cyl, double omega) {
  Medium<complex> m;
  m.a = cyl.radius;
  const double k0 = omega / c;
  m.kap1_sq = -cyl.eps_inner * k0 * k0;
  m.kap2_sq = -cyl.eps_outer * k0 * k0;
  const complex k2 = std::sqrt(cyl.eps_outer) * k0;
  m.kap2 = complex(0.0, -1.0) * k2;
  return m;
}

void check_cylinder(const CylinderAt& cyl) {
  if (!(cyl.radius > 0.0) || !std::isfinite(cyl.radius)) throw DomainError("cylinder radius must be positive");
}

// Bessel data for one beta.  Orders 0..n_max are available after fill().
template <class T>
struct BetaPoint {
  const Medium<T>* m = nullptr;
  T beta{}, w1{}, w2{};
  double r = 0.0;
  int n_max = -1;
  ModifiedBesselTable<T> t1, t2a, t2r;

  BetaPoint(const Medium<T>& med, T b, double radial) : m(&med), beta(b), r(radial) {
    // quadrature nodes that round onto a branch point are moved off it by a
    // few ulps; the integrand is integrable there
    if (b * b + med.kap1_sq == T{} || b * b + med.kap2_sq == T{}) beta = b = b * (1.0 + 4e-16);
    const T b2 = b * b;
    w1 = std::sqrt(b2 + med.kap1_sq);
    w2 = outgoing_w(b2 + med.kap2_sq);
  }

  void fill(int n) {
    n = std::max(n, 1);  // order 0 needs K_1 as well
    if (n <= n_max) return;
    specfun::fill_modified_bessel_table(w1 * m->a, n, true, t1);
    specfun::fill_modified_bessel_table(w2 * m->a, n, true, t2a);
    specfun::fill_modified_bessel_table(w2 * r, n, false, t2r);
    n_max = n;
  }

  // Reduced coefficient data for order n (n may be negative).
  struct Terms {
    T W, num_a, num_c, num_b;  // A = (I/K) num_a / W, C likewise, B = i (I/K) (kappa2/w2) num_b / W
    T log_ik;                  // log(I_n(w2 a) / K_n(w2 a))
    T E;                       // I_n(w2 a) K_n(w2 r)^2 / K_n(w2 a)
    T dkr;                     // K_n'(w2 r) / K_n(w2 r)
  };

  Terms terms(int n) const {
    const int k = n < 0 ? -n : n;
    const double a = m->a;
    const T p_i1 = t1.dlog_i[k] / w1;
    const T p_i2 = t2a.dlog_i[k] / w2;
    const T p_k2 = t2a.dlog_k[k] / w2;
    const T w1s = w1 * w1, w2s = w2 * w2;
    const T delta = (m->kap1_sq - m->kap2_sq) / (w1s * w2s);  // 1/w2^2 - 1/w1^2
    const T nb2 = double(n) * double(n) * beta * beta * delta * delta / (a * a);
    // W without the cancellation between n^2 beta^2 Delta^2/a^2 and
    // beta^2 p_K2^2 near the branch point: n Delta/a + p_K2 = -n/(a w1^2) - K_{n-1}/(w2 K_n).
    const int km1 = k == 0 ? 1 : k - 1;
    const T ratio = std::exp(t2a.log_k[km1] - t2a.log_k[k]);
    const T s = -double(k) / (a * w1s) - ratio / w2;
    const T w = beta * beta * (double(k) * delta / a - p_k2) * s + w2s * p_k2 * p_k2 + m->kap1_sq * p_i1 * p_i1 -
                (m->kap1_sq + m->kap2_sq) * p_i1 * p_k2;
    Terms out;
    out.W = w;
    out.num_a = nb2 + (p_i1 - p_i2) * (m->kap1_sq * p_i1 - m->kap2_sq * p_k2);
    out.num_c = nb2 + (p_i1 - p_k2) * (m->kap1_sq * p_i1 - m->kap2_sq * p_i2);
    out.num_b = double(n) * beta / a * delta * (t2a.dlog_i[k] - t2a.dlog_k[k]);
    out.log_ik = t2a.log_i[k] - t2a.log_k[k];
    out.E = std::exp(out.log_ik + 2.0 * t2r.log_k[k]);
    out.dkr = t2r.dlog_k[k];
    if (w == T{} || !std::isfinite(std::abs(w)))
      throw PoleError("dispersion denominator vanishes", n, re(beta));
    return out;
  }

  // rr, phi-phi, zz summands for order n (without multiplicity).
  void blocks(int n, T& rr, T& pp, T& zz) const {
    const Terms t = terms(n);
    const T xr = w2 * r;
    const T ang = double(n) * double(n) / (xr * xr);
    const T d2 = t.dkr * t.dkr;
    const T cb = t.num_c * beta * beta / m->kap2_sq;
    const T bt = 2.0 * t.num_b * double(n) * beta / (w2 * w2 * r) * t.dkr;
    const T f = t.E / t.W;
    rr = f * (t.num_a * ang - cb * d2 + bt);
    pp = f * (t.num_a * d2 - cb * ang + bt);
    zz = f * (-t.num_c * w2 * w2 / m->kap2_sq);
  }

  T trace_term(int n) const {
    const Terms t = terms(n);
    const T xr = w2 * r;
    const T ang = double(n) * double(n) / (xr * xr);
    const T sum = (t.num_a - t.num_c * beta * beta / m->kap2_sq) * (ang + t.dkr * t.dkr) -
                  t.num_c * w2 * w2 / m->kap2_sq + 4.0 * t.num_b * double(n) * beta / (w2 * w2 * r) * t.dkr;
    return t.E / t.W * sum;
  }
};

double multiplicity(int n) { return n == 0 ? 2.0 : 4.0; }

// Sum over orders at one beta.  A term counts as negligible when it is below
// n_tol times the larger of the partial sum and the largest summed value seen
// so far at other beta, so that the far tail of the beta integral, where the
// orders decay slowly but nothing is left to sum, does not force huge orders.
template <class T>
struct OrderSum {
  double n_tol;
  int n_start;
  int extra;
  int max_used = 0;
  bool hit_cap = false;
  long calls = 0;
  double peak = 0.0;
  double tail = 0.0;  // estimated truncation error of the last call

  T operator()(BetaPoint<T>& p) {
    ++calls;
    p.fill(std::min(specfun::kMaxOrder, n_start + 8));
    T sum{};
    int quiet = 0, n = 0, after = -1;
    double last = 0.0, prev = 0.0;
    for (;; ++n) {
      if (n > p.n_max) {
        if (p.n_max >= specfun::kMaxOrder) {
          if (last > n_tol * std::max(std::abs(sum), peak)) hit_cap = true;
          break;
        }
        p.fill(std::min(specfun::kMaxOrder, 2 * p.n_max));
      }
      const T term = multiplicity(n) * p.trace_term(n);
      sum += term;
      prev = last;
      last = std::abs(term);
      if (after >= 0) {
        if (--after < 0) break;
        continue;
      }
      quiet = (last <= n_tol * std::max(std::abs(sum), peak)) ? quiet + 1 : 0;
      if (n >= n_start && quiet >= 3) {
        if (extra <= 0) break;
        after = extra;
      }
    }
    max_used = std::max(max_used, std::min(n, specfun::kMaxOrder));
    peak = std::max(peak, std::abs(sum));
    // geometric tail beyond the last summed order
    const double rho = std::min(prev > 0.0 ? last / prev : 0.0, 0.99);
    tail = last * rho / (1.0 - rho);
    return sum;
  }
};

int start_order(double k_abs, double r) { return std::max(10, static_cast<int>(std::ceil(k_abs * r)) + 10); }

GreenTrace finish(const QuadratureResult& q, const OrderSum<double>* sd, const OrderSum<complex>* sc) {
  GreenTrace g;
  g.value = q.value / (4.0 * pi * pi);
  g.beta_error_estimate = std::abs(q.value) > 0.0 ? q.abs_error / std::abs(q.value) : q.abs_error;
  g.n_terms_used = sd ? sd->max_used : sc->max_used;
  g.n_error_estimate = std::abs(q.value) > 0.0 ? q.aux / std::abs(q.value) : q.aux;
  g.converged = !(sd ? sd->hit_cap : sc->hit_cap);
  g.evaluations = sd ? sd->calls : sc->calls;
  if (!g.converged)
    throw ConvergenceError("azimuthal sum did not converge by order " + std::to_string(specfun::kMaxOrder),
                           g.value.real());
  return g;
}

void check_point(const CylinderAt& cyl, double r) {
  check_cylinder(cyl);
  if (!(r > cyl.radius) || !std::isfinite(r)) throw DomainError("field point must lie outside the cylinder (r > a)");
}

ReflectionCoefficients assemble(const BetaPoint<complex>& p, const Medium<complex>& m, int n, bool real_freq) {
  const auto t = p.terms(n);
  if (t.log_ik.real() > 700.0)
    throw OverflowError("I_n/K_n at w2 a = " + std::to_string(std::abs(p.w2 * m.a)) + ", order " + std::to_string(n) +
                        " overflows (log ratio " + std::to_string(t.log_ik.real()) + ")");
  const complex ik = std::exp(t.log_ik);
  ReflectionCoefficients rc;
  rc.A = ik * t.num_a / t.W;
  rc.C = ik * t.num_c / t.W;
  rc.B = rc.D = complex(0.0, 1.0) * ik * (m.kap2 / p.w2) * t.num_b / t.W;
  if (real_freq) {
    // A_R = -(pi/2) i (-1)^n A, and the same factor for B, C, D
    const complex f = complex(0.0, -pi / 2.0) * ((n % 2 == 0) ? 1.0 : -1.0);
    rc.A *= f;
    rc.B *= f;
    rc.C *= f;
    rc.D *= f;
  }
  return rc;
}

}  // namespace

void FiberGeometry::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("fiber radius must be positive");
}

CylinderAt at_real_freq(const FiberGeometry& geom, double omega) {
  geom.validate();
  return {geom.radius, geom.eps_inner.eps_real_freq(omega).eps, geom.eps_outer.eps_real_freq(omega).eps};
}

CylinderAt at_imag_freq(const FiberGeometry& geom, double u) {
  geom.validate();
  return {geom.radius, geom.eps_inner.eps_imag_freq(u), geom.eps_outer.eps_imag_freq(u)};
}

ReflectionCoefficients coeffs_real_freq(const CylinderAt& cyl, int n, double beta, double omega) {
  check_cylinder(cyl);
  if (!(omega > 0.0)) throw DomainError("real frequency must be positive");
  const Medium<complex> m = real_medium(cyl, omega);
  BetaPoint<complex> p(m, complex(beta), 2.0 * cyl.radius);
  p.fill(std::abs(n));
  return assemble(p, m, n, true);
}

ReflectionCoefficients coeffs_real_freq(const FiberGeometry& geom, int n, double beta, double omega) {
  return coeffs_real_freq(at_real_freq(geom, omega), n, beta, omega);
}

ReflectionCoefficients coeffs_imag_freq(const CylinderAt& cyl, int n, double beta, double u) {
  check_cylinder(cyl);
  if (!(u > 0.0)) throw DomainError("imaginary frequency must be positive");
  const Medium<double> md = imag_medium(cyl, u);
  Medium<complex> m;
  m.a = md.a;
  m.kap1_sq = md.kap1_sq;
  m.kap2_sq = md.kap2_sq;
  m.kap2 = md.kap2;
  BetaPoint<complex> p(m, complex(beta), 2.0 * cyl.radius);
  p.w2 = std::sqrt(beta * beta + md.kap2_sq);
  p.fill(std::abs(n));
  ReflectionCoefficients rc = assemble(p, m, n, false);
  rc.A = rc.A.real();
  rc.C = rc.C.real();
  rc.B = rc.D = complex(0.0, rc.B.imag());
  return rc;
}

ReflectionCoefficients coeffs_imag_freq(const FiberGeometry& geom, int n, double beta, double u) {
  return coeffs_imag_freq(at_imag_freq(geom, u), n, beta, u);
}

complex trace_integrand(const CylinderAt& cyl, int n, complex beta, double r, double freq, bool imaginary) {
  check_point(cyl, r);
  if (n < 0) throw DomainError("trace_integrand takes n >= 0 (orders n and -n are combined)");
  if (imaginary) {
    const Medium<double> m = imag_medium(cyl, freq);
    if (beta.imag() != 0.0) throw DomainError("imaginary-frequency integrand is evaluated on the real beta axis");
    BetaPoint<double> p(m, beta.real(), r);
    p.fill(n);
    return multiplicity(n) * p.trace_term(n);
  }
  const Medium<complex> m = real_medium(cyl, freq);
  BetaPoint<complex> p(m, beta, r);
  p.fill(n);
  return multiplicity(n) * p.trace_term(n);
}

DiagonalBlocks diagonal_integrand(const CylinderAt& cyl, int n, complex beta, double r, double freq, bool imaginary) {
  check_point(cyl, r);
  if (n < 0) throw DomainError("diagonal_integrand takes n >= 0 (orders n and -n are combined)");
  DiagonalBlocks d;
  const double mult = multiplicity(n);
  if (imaginary) {
    const Medium<double> m = imag_medium(cyl, freq);
    BetaPoint<double> p(m, beta.real(), r);
    p.fill(n);
    double rr, pp, zz;
    p.blocks(n, rr, pp, zz);
    d = {mult * rr, mult * pp, mult * zz};
    return d;
  }
  const Medium<complex> m = real_medium(cyl, freq);
  BetaPoint<complex> p(m, beta, r);
  p.fill(n);
  complex rr, pp, zz;
  p.blocks(n, rr, pp, zz);
  d = {mult * rr, mult * pp, mult * zz};
  return d;
}

GreenTrace trace_sc_imag(const CylinderAt& cyl, double r, double u, const TraceOptions& opt) {
  check_point(cyl, r);
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("imaginary frequency must be positive");
  const Medium<double> m = imag_medium(cyl, u);
  OrderSum<double> sum{opt.n_rel_tol, start_order(m.kap2, r), opt.extra_orders};
  auto f = [&](double beta) -> Tracked {
    BetaPoint<double> p(m, beta, r);
    const double v = sum(p);
    return {v, sum.tail};
  };
  QuadratureOptions q;
  q.rel_tol = opt.beta_rel_tol;
  q.max_panels = opt.max_panels;
  const QuadratureResult res = integrate_semi_infinite(f, 0.5 / (r - cyl.radius), q);
  return finish(res, &sum, nullptr);
}

GreenTrace trace_sc_imag(const FiberGeometry& geom, double r, double u, const TraceOptions& opt) {
  return trace_sc_imag(at_imag_freq(geom, u), r, u, opt);
}

GreenTrace trace_sc_real(const CylinderAt& cyl, double r, double omega, const PoleAvoidancePlan& plan,
                         const TraceOptions& opt) {
  check_point(cyl, r);
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("real frequency must be positive");
  if (cyl.eps_outer.imag() != 0.0 || !(cyl.eps_outer.real() > 0.0))
    throw DomainError("the outer medium must be lossless with eps > 0");
  const double k2 = std::sqrt(cyl.eps_outer.real()) * omega / c;
  const double k1 = std::sqrt(cyl.eps_inner).real() * omega / c;
  plan.validate(k2, k1);
  const Medium<complex> m = real_medium(cyl, omega);
  OrderSum<complex> sum{opt.n_rel_tol, start_order(k2, r), opt.extra_orders};
  auto f = [&](complex beta) -> Tracked {
    BetaPoint<complex> p(m, beta, r);
    const complex v = sum(p);
    return {v, sum.tail};
  };
  QuadratureOptions q;
  q.rel_tol = opt.beta_rel_tol;
  q.max_panels = opt.max_panels;
  const QuadratureResult res = integrate_beta_with_detours(f, plan, k2, q);
  return finish(res, nullptr, &sum);
}

GreenTrace trace_sc_real(const FiberGeometry& geom, double r, double omega, const PoleAvoidancePlan& plan,
                         const TraceOptions& opt) {
  return trace_sc_real(at_real_freq(geom, omega), r, omega, plan, opt);
}

double trace_g0_imagpart(const PermittivityModel& eps_outer, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("real frequency must be positive");
  const complex e = eps_outer.eps_real_freq(omega).eps;
  if (e.imag() != 0.0 || !(e.real() > 0.0)) throw DomainError("trace_g0_imagpart needs a lossless outer medium");
  return std::sqrt(e.real()) * omega / (2.0 * pi * c);
}

double guided_dispersion_normalized(double radius, double eps_inner, double eps_outer, int n, double b,
                                    double omega) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("normalized propagation constant outside (0, 1)");
  if (!(eps_inner > eps_outer) || !(eps_outer > 0.0)) throw DomainError("guided band needs eps_inner > eps_outer > 0");
  const int k = std::abs(n);
  const double v = omega / c * radius * std::sqrt(eps_inner - eps_outer);
  const double x = v * std::sqrt(1.0 - b), y = v * std::sqrt(b);
  const double j = specfun::bessel_j(k, x).real();
  const double jp = specfun::bessel_j_prime(k, x).real();
  ModifiedBesselTable<double> t;
  specfun::fill_modified_bessel_table(y, std::max(k, 1), false, t);
  // kappa = y K_n'(y)/K_n(y) = -n - y K_{n-1}/K_n; the O(1) parts of the
  // textbook equation cancel analytically, leaving (kappa + n)/y^2
  const double kappa = y * t.dlog_k[k];
  const double kpn_y2 = -std::exp(t.log_k[k == 0 ? 1 : k - 1] - t.log_k[k]) / y;
  const double x2 = x * x, y2 = y * y, nn = double(k) * double(k);
  return eps_inner * y2 * x2 * jp * jp + (eps_inner + eps_outer) * x2 * x * j * jp * kappa +
         eps_outer * x2 * x2 * j * j * (kappa - double(k)) * kpn_y2 -
         nn * j * j * (eps_outer * (2.0 * x2 + y2) + (eps_inner - eps_outer) * v * v);
}

double guided_dispersion(double radius, double eps_inner, double eps_outer, int n, double beta, double omega) {
  const double k1s = eps_inner * omega * omega / (c * c), k2s = eps_outer * omega * omega / (c * c);
  if (!(beta * beta > k2s && beta * beta < k1s)) throw DomainError("beta outside the guided band");
  return guided_dispersion_normalized(radius, eps_inner, eps_outer, n, (beta * beta - k2s) / (k1s - k2s), omega);
}

}  // namespace cpnf
