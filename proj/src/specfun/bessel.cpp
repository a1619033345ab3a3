#include "cpnf/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "cpnf/error.hpp"

namespace cpnf::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

// Region boundaries in |w| for K_0, K_1.  Chosen from a sweep against an
// extended-precision reference (see tests): series error grows past ~2 from
// cancellation in the log term, the asymptotic series reaches 1e-15 only
// beyond ~17 on the imaginary axis.
constexpr double kSeriesRadius = 2.0;
constexpr double kAsymptoticRadius = 17.0;

// e^w K_0(w), e^w K_1(w) by the ascending series.
template <class T>
std::pair<T, T> k01_series(T w) {
  const T y = w * w / 4.0;
  const T lg = std::log(w / 2.0);
  T term0 = 1.0;  // y^k / (k!)^2
  T term1 = 1.0;  // y^k / (k! (k+1)!)
  T i0 = 0.0, s0 = 0.0, i1s = 0.0, s1 = 0.0;
  double hk = 0.0;  // harmonic number H_k
  for (int k = 0; k < 200; ++k) {
    const double hk1 = hk + 1.0 / (k + 1);
    i0 += term0;
    s0 += hk * term0;
    i1s += term1;
    s1 += (hk + hk1 - 2.0 * kEulerGamma) * term1;
    if (std::abs(term0) < kEps * 1e-2 * std::abs(i0) && std::abs(term1) < kEps * 1e-2 * std::abs(i1s))
      break;
    term0 *= y / double((k + 1) * (k + 1));
    term1 *= y / double((k + 1) * (k + 2));
    hk = hk1;
  }
  const T k0 = -(lg + kEulerGamma) * i0 + s0;
  const T k1 = 1.0 / w + lg * (w / 2.0) * i1s - (w / 4.0) * s1;
  const T scale = std::exp(w);
  return {k0 * scale, k1 * scale};
}

// Temme's continued fraction (Steed's algorithm) for e^w K_0, e^w K_1.
template <class T>
std::pair<T, T> k01_temme(T w) {
  T b = 2.0 * (1.0 + w);
  T d = 1.0 / b;
  T h = d, delh = d;
  T q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  T q = a1, c = a1;
  T a = -a1;
  T s = 1.0 + q * delh;
  int i = 1;
  for (; i < 100000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const T qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const T dels = q * delh;
    s += dels;
    if (std::abs(dels) < kEps * std::abs(s)) break;
  }
  if (i >= 100000) throw ConvergenceError("Temme continued fraction for K_0 did not converge", 0.0);
  h = a1 * h;
  const T k0 = std::sqrt(kPi / (2.0 * w)) / s;
  const T k1 = k0 * (w + 0.5 - h) / w;
  return {k0, k1};
}

template <class T>
T k_scaled_asymptotic(int nu, T w) {
  const double mu = 4.0 * nu * nu;
  T term = 1.0, sum = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 100; ++k) {
    term *= (mu - double((2 * k - 1) * (2 * k - 1))) / (8.0 * k * w);
    const double t = std::abs(term);
    if (t > prev) break;
    sum += term;
    if (t < kEps * 1e-2 * std::abs(sum)) break;
    prev = t;
  }
  return std::sqrt(kPi / (2.0 * w)) * sum;
}

template <class T>
std::pair<T, T> k01_scaled(T w) {
  const double r = std::abs(w);
  if (r <= kSeriesRadius) return k01_series(w);
  if (r < kAsymptoticRadius) return k01_temme(w);
  return {k_scaled_asymptotic(0, w), k_scaled_asymptotic(1, w)};
}

// I_{n+1}(w)/I_n(w) by the modified Lentz evaluation of
// 1/(2(n+1)/w + 1/(2(n+2)/w + ...)).
template <class T>
T i_ratio_cf1(int n, T w) {
  constexpr double tiny = 1e-300;
  const T inv = 1.0 / w;
  T f = tiny, c = f, d = 0.0;
  const int max_it = 100000 + 20 * static_cast<int>(std::abs(w));
  for (int k = 1; k < max_it; ++k) {
    const T bk = 2.0 * double(n + k) * inv;
    d = bk + d;
    if (std::abs(d) < tiny) d = tiny;
    c = bk + 1.0 / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const T delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < kEps) return f;
  }
  throw ConvergenceError("continued fraction for I_{n+1}/I_n did not converge", 0.0);
}

void check_order(int n) {
  if (n < -kMaxOrder || n > kMaxOrder)
    throw RangeError("Bessel order " + std::to_string(n) + " outside [-200, 200]");
}

void check_argument(double mag) {
  if (!std::isfinite(mag)) throw DomainError("non-finite Bessel argument");
  if (mag > kMaxArgument) throw RangeError("Bessel argument modulus exceeds 1e6");
}

template <class T>
T finite_or_throw(T v, const char* what) {
  if constexpr (std::is_same_v<T, double>) {
    if (!std::isfinite(v)) throw OverflowError(std::string(what) + " overflows double precision");
  } else {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw OverflowError(std::string(what) + " overflows double precision");
  }
  return v;
}

struct Pair {
  complex value;
  complex deriv;
};

complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// J_n and J_n' for n >= 0, Im z >= 0, z != 0.
Pair j_upper(int n, complex z) {
  const complex w{z.imag(), -z.real()};  // -i z
  ModifiedBesselTable<complex> t;
  fill_modified_bessel_table(w, n, true, t);
  const complex in = std::exp(t.log_i[n]);
  // d/dz I_n(-iz) = -i I_n'(w)
  return {i_pow(n) * in, i_pow(n) * in * t.dlog_i[n] * complex{0.0, -1.0}};
}

// H_n^(1) and derivative for n >= 0, Im z >= 0, z != 0.
Pair h1_upper(int n, complex z) {
  const complex w{z.imag(), -z.real()};
  ModifiedBesselTable<complex> t;
  fill_modified_bessel_table(w, n, false, t);
  const complex pref = (2.0 / kPi) * i_pow(-n - 1);
  const complex kn = std::exp(t.log_k[n]);
  return {pref * kn, pref * kn * t.dlog_k[n] * complex{0.0, -1.0}};
}

Pair j_pair(int n, complex z) {
  if (z.imag() >= 0.0) return j_upper(n, z);
  const Pair p = j_upper(n, std::conj(z));
  return {std::conj(p.value), std::conj(p.deriv)};
}

Pair h1_pair(int n, complex z) {
  if (z.imag() >= 0.0) return h1_upper(n, z);
  // H1(z) = 2 J(z) - H2(z),  H2(z) = conj H1(conj z)
  const Pair h = h1_upper(n, std::conj(z));
  const Pair j = j_upper(n, std::conj(z));
  return {2.0 * std::conj(j.value) - std::conj(h.value), 2.0 * std::conj(j.deriv) - std::conj(h.deriv)};
}

// Shared argument handling for the ordinary functions: range checks, negative
// orders, the origin, and real positive arguments (imaginary part zeroed).
template <class F>
Pair ordinary(int n, complex z, bool singular_at_zero, const char* name, F&& kernel) {
  check_order(n);
  check_argument(std::abs(z));
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("non-finite argument");
  const int m = n < 0 ? -n : n;
  Pair p;
  if (z == complex{0.0, 0.0}) {
    if (singular_at_zero) throw DomainError(std::string(name) + " is singular at z = 0");
    p.value = m == 0 ? 1.0 : 0.0;
    p.deriv = m == 1 ? 0.5 : 0.0;
  } else {
    p = kernel(m, z);
  }
  if (n < 0 && (m % 2) == 1) {
    p.value = -p.value;
    p.deriv = -p.deriv;
  }
  finite_or_throw(p.value, name);
  finite_or_throw(p.deriv, name);
  return p;
}

bool real_positive(complex z) { return z.imag() == 0.0 && z.real() > 0.0; }

complex realify(complex v, complex z) { return real_positive(z) ? complex{v.real(), 0.0} : v; }

template <class T>
struct Modified {
  T i, di, k, dk;  // i and k hold logarithms
};

template <class T>
Modified<T> modified(int n, T w, bool with_i) {
  check_order(n);
  const int m = n < 0 ? -n : n;
  ModifiedBesselTable<T> t;
  fill_modified_bessel_table(w, m, with_i, t);
  Modified<T> out{};
  out.k = t.log_k[m];
  out.dk = t.dlog_k[m];
  if (with_i) {
    out.i = t.log_i[m];
    out.di = t.dlog_i[m];
  }
  return out;
}

// Direct ascending series of I_n for small |w|, where going through the log
// table would cost a few ulps for no reason.
template <class T>
T i_series(int n, T w) {
  const T half = w / 2.0;
  T term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / double(k);
  const T y = half * half;
  T sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    sum += term;
    if (std::abs(term) < 1e-2 * kEps * std::abs(sum)) break;
    term *= y / double((k + 1) * (k + 1 + n));
  }
  return sum;
}

template <class T>
T i_value(int n, T w) {
  if (std::abs(w) <= kSeriesRadius && std::abs(n) <= 30) return i_series(std::abs(n), w);
  return std::exp(modified(n, w, true).i);
}

void check_real_arg(double x) {
  if (!std::isfinite(x)) throw DomainError("non-finite argument");
  if (x <= 0.0) throw DomainError("modified Bessel functions require x > 0");
  check_argument(x);
}

void check_complex_arg(complex w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw DomainError("non-finite argument");
  if (w.real() < 0.0) throw DomainError("complex modified Bessel functions require Re w >= 0");
  if (w == complex{0.0, 0.0}) throw DomainError("complex modified Bessel argument is zero");
  check_argument(std::abs(w));
}

}  // namespace

template <class T>
void fill_modified_bessel_table(T w, int n_max, bool with_i, ModifiedBesselTable<T>& table) {
  if (n_max < 0) throw RangeError("negative maximum order");
  table.arg = w;
  table.log_k.assign(n_max + 1, T{});
  table.dlog_k.assign(n_max + 1, T{});
  const T inv = 1.0 / w;
  auto [k0, k1] = k01_scaled(w);
  T log_k = std::log(k0) - w;
  T rho = k1 / k0;  // K_{n+1} / K_n
  std::vector<T> rhos(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    table.log_k[n] = log_k;
    table.dlog_k[n] = double(n) * inv - rho;
    rhos[n] = rho;
    log_k += std::log(rho);
    rho = 1.0 / rho + 2.0 * double(n + 1) * inv;
  }
  if (!with_i) {
    table.log_i.clear();
    table.dlog_i.clear();
    return;
  }
  table.log_i.assign(n_max + 1, T{});
  table.dlog_i.assign(n_max + 1, T{});
  T sigma = i_ratio_cf1(n_max, w);  // I_{n+1} / I_n
  const T log_w = std::log(w);
  for (int n = n_max; n >= 0; --n) {
    table.dlog_i[n] = double(n) * inv + sigma;
    // Wronskian I_n K_{n+1} + I_{n+1} K_n = 1/w
    table.log_i[n] = -log_w - table.log_k[n] - std::log(rhos[n] + sigma);
    if (n > 0) sigma = 1.0 / (2.0 * double(n) * inv + sigma);
  }
}

template void fill_modified_bessel_table<double>(double, int, bool, ModifiedBesselTable<double>&);
template void fill_modified_bessel_table<complex>(complex, int, bool, ModifiedBesselTable<complex>&);

complex bessel_j(int n, complex z) {
  return realify(ordinary(n, z, false, "J_n", j_pair).value, z);
}

complex bessel_j_prime(int n, complex z) {
  return realify(ordinary(n, z, false, "J_n'", j_pair).deriv, z);
}

complex hankel1(int n, complex z) { return ordinary(n, z, true, "H_n^(1)", h1_pair).value; }

complex hankel1_prime(int n, complex z) { return ordinary(n, z, true, "H_n^(1)'", h1_pair).deriv; }

complex bessel_y(int n, complex z) {
  const Pair h = ordinary(n, z, true, "Y_n", h1_pair);
  const Pair j = ordinary(n, z, true, "Y_n", j_pair);
  return realify((h.value - j.value) / complex{0.0, 1.0}, z);
}

complex bessel_y_prime(int n, complex z) {
  const Pair h = ordinary(n, z, true, "Y_n'", h1_pair);
  const Pair j = ordinary(n, z, true, "Y_n'", j_pair);
  return realify((h.deriv - j.deriv) / complex{0.0, 1.0}, z);
}

double bessel_i(int n, double x) {
  check_real_arg(x);
  return finite_or_throw(i_value(n, x), "I_n");
}

double bessel_i_prime(int n, double x) {
  check_real_arg(x);
  return finite_or_throw(i_value(n, x) * modified(n, x, true).di, "I_n'");
}

double bessel_k(int n, double x) {
  check_real_arg(x);
  return finite_or_throw(std::exp(modified(n, x, false).k), "K_n");
}

double bessel_k_prime(int n, double x) {
  check_real_arg(x);
  const auto m = modified(n, x, false);
  return finite_or_throw(std::exp(m.k) * m.dk, "K_n'");
}

double bessel_i_scaled(int n, double x) {
  check_real_arg(x);
  return finite_or_throw(std::exp(modified(n, x, true).i - x), "e^{-x} I_n");
}

double bessel_k_scaled(int n, double x) {
  check_real_arg(x);
  return finite_or_throw(std::exp(modified(n, x, false).k + x), "e^{x} K_n");
}

complex bessel_i(int n, complex w) {
  check_complex_arg(w);
  return finite_or_throw(i_value(n, w), "I_n");
}

complex bessel_k(int n, complex w) {
  check_complex_arg(w);
  return finite_or_throw(std::exp(modified(n, w, false).k), "K_n");
}

complex bessel_i_scaled(int n, complex w) {
  check_complex_arg(w);
  return finite_or_throw(std::exp(modified(n, w, true).i - w), "e^{-w} I_n");
}

complex bessel_k_scaled(int n, complex w) {
  check_complex_arg(w);
  return finite_or_throw(std::exp(modified(n, w, false).k + w), "e^{w} K_n");
}

}  // namespace cpnf::specfun
