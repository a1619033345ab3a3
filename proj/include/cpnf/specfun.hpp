#pragma once

// Cylinder functions of integer order and the Faddeeva/Dawson pair.
//
// All Bessel-type functions are built on one kernel: the modified Bessel
// functions I_n(w), K_n(w) for Re w >= 0, evaluated as exponentially scaled
// values and order-to-order ratios.  J_n and H_n^(1) follow from the rotation
//   J_n(z) = i^n I_n(-iz),   H_n^(1)(z) = (2/pi) i^(-n-1) K_n(-iz),
// which is exact for Im z >= 0; the lower half plane uses conjugation.

#include <complex>
#include <vector>

namespace cpnf::specfun {

using complex = std::complex<double>;

inline constexpr int kMaxOrder = 200;
inline constexpr double kMaxArgument = 1.0e6;

// --- ordinary cylinder functions, complex argument -------------------------

complex bessel_j(int n, complex z);
complex bessel_j_prime(int n, complex z);
complex bessel_y(int n, complex z);
complex bessel_y_prime(int n, complex z);
complex hankel1(int n, complex z);
complex hankel1_prime(int n, complex z);

// --- modified Bessel functions, real argument x > 0 ------------------------

double bessel_i(int n, double x);
double bessel_i_prime(int n, double x);
double bessel_k(int n, double x);
double bessel_k_prime(int n, double x);
/// e^{-x} I_n(x)
double bessel_i_scaled(int n, double x);
/// e^{x} K_n(x)
double bessel_k_scaled(int n, double x);

// --- modified Bessel functions, complex argument with Re w >= 0 ------------

complex bessel_i(int n, complex w);
complex bessel_k(int n, complex w);
/// e^{-w} I_n(w)
complex bessel_i_scaled(int n, complex w);
/// e^{w} K_n(w)
complex bessel_k_scaled(int n, complex w);

/// Orders 0..n_max of I_n and K_n at one argument, stored as logarithms and
/// logarithmic derivatives so that products such as I_n(qa) K_n(qr)^2 / K_n(qa)
/// can be formed without overflow at any order.  For a real argument the logs
/// are real; for a complex argument they are complex logs whose imaginary parts
/// are only meaningful modulo 2 pi.
template <class T>
struct ModifiedBesselTable {
  T arg{};
  std::vector<T> log_k;   ///< log K_n(arg)
  std::vector<T> dlog_k;  ///< K_n'(arg) / K_n(arg)
  std::vector<T> log_i;   ///< log I_n(arg)   (empty unless requested)
  std::vector<T> dlog_i;  ///< I_n'(arg) / I_n(arg)
};

/// Fills `table` for orders 0..n_max.  `with_i` selects whether the I_n part
/// (which costs a continued fraction of length ~|w|) is computed.
template <class T>
void fill_modified_bessel_table(T w, int n_max, bool with_i, ModifiedBesselTable<T>& table);

// --- error-function family --------------------------------------------------

/// w(z) = e^{-z^2} erfc(-iz).
complex faddeeva(complex z);
/// D(z) = (i sqrt(pi)/2) (e^{-z^2} - w(z)).
complex dawson(complex z);
double dawson(double x);

}  // namespace cpnf::specfun
