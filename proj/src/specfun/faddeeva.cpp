#include "cpnf/specfun.hpp"

#include <cmath>
#include <numbers>

#include "cpnf/error.hpp"

namespace cpnf::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

// Trapezoid rule for w(z) = (i/pi) int e^{-t^2}/(z-t) dt on the grid
// t_n = (n + delta) h, plus the exact contribution of the pole at t = z.
// Valid for Im z >= 0.  The grid offset is picked so that Re z stays at least
// h/4 away from every node, which keeps the sum and the pole term from
// cancelling when z is close to the real axis.
complex w_trapezoid(complex z) {
  constexpr double h = 0.4;
  const double x = z.real();
  const double frac = x / h - std::floor(x / h);  // position of x between nodes, in [0,1)
  const bool shifted = frac < 0.25 || frac > 0.75;
  const double delta = shifted ? 0.5 : 0.0;
  const int n_lo = static_cast<int>(std::floor(-7.0 / h));
  const int n_hi = static_cast<int>(std::ceil(7.0 / h));
  complex sum = 0.0;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double t = (n + delta) * h;
    sum += std::exp(-t * t) / (z - t);
  }
  sum *= complex{0.0, h / kPi};
  const complex e = std::exp(complex{0.0, -2.0 * kPi / h} * z);
  const complex pole = 2.0 * std::exp(-z * z) / (shifted ? 1.0 + e : 1.0 - e);
  return sum + pole;
}

// Laplace continued fraction, for |z| >= 10 in the upper half plane.
complex w_continued_fraction(complex z) {
  complex f = z;
  for (int k = 60; k >= 1; --k) f = z - (0.5 * k) / f;
  return complex{0.0, 1.0 / kSqrtPi} / f;
}

complex w_upper(complex z) {
  if (std::abs(z) < 10.0) return w_trapezoid(z);
  return w_continued_fraction(z);
}

}  // namespace

complex faddeeva(complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("non-finite argument to w(z)");
  if (z.imag() >= 0.0) return w_upper(z);
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

complex dawson(complex z) {
  return complex{0.0, kSqrtPi / 2.0} * (std::exp(-z * z) - faddeeva(z));
}

double dawson(double x) {
  return 0.5 * kSqrtPi * faddeeva(complex{x, 0.0}).imag();
}

}  // namespace cpnf::specfun
