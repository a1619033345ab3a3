#pragma once

// Scattering Green tensor of an infinite cylinder at coincident points.
//
// Internally both frequency kinds use one form: with w_j = sqrt(beta^2 - k_j^2)
// (Re w_j >= 0; for the outer medium this is -i eta_2 with Im eta_2 >= 0)
// and kappa_j^2 = -k_j^2, the real-frequency expressions in J_n, H_n^(1)
// become the imaginary-frequency ones in I_n, K_n.  The Bessel factors then
// enter only through logarithms and logarithmic derivatives, so nothing
// overflows at large q a or large order.

#include <complex>

#include "cpnf/fiber.hpp"
#include "cpnf/quadrature.hpp"

namespace cpnf {

using complex = std::complex<double>;

/// A, B, C, D of the cylinder for one (n, beta) and one frequency.
struct ReflectionCoefficients {
  complex A, B, C, D;
};

/// Real frequency omega > 0: coefficients A_R .. D_R.
ReflectionCoefficients coeffs_real_freq(const CylinderAt& cyl, int n, double beta, double omega);
ReflectionCoefficients coeffs_real_freq(const FiberGeometry& geom, int n, double beta, double omega);
/// Imaginary frequency u > 0: coefficients A .. D (A, C real; B = D imaginary).
ReflectionCoefficients coeffs_imag_freq(const CylinderAt& cyl, int n, double beta, double u);
ReflectionCoefficients coeffs_imag_freq(const FiberGeometry& geom, int n, double beta, double u);

struct GreenTrace {
  complex value;                    // 1/m
  int n_terms_used = 0;             // highest azimuthal order summed
  double beta_error_estimate = 0.0; // relative
  double n_error_estimate = 0.0;    // relative, integrated geometric tail of the azimuthal sum
  bool converged = true;
  long evaluations = 0;             // integrand evaluations (all orders at one beta count once)
};

struct TraceOptions {
  double beta_rel_tol = 1e-8;
  double n_rel_tol = 1e-8;
  /// Orders summed beyond the point where the n-sum is judged converged.
  int extra_orders = 0;
  int max_panels = 4000;
};

/// Summand of the trace for orders n and -n together and both signs of
/// beta, i.e. the integrand of int_0^inf d beta, before the 1/(4 pi^2)
/// prefactor.  `imaginary` selects omega = i u.
complex trace_integrand(const CylinderAt& cyl, int n, complex beta, double r, double freq, bool imaginary);

/// Diagonal blocks rr, phi-phi, zz of the same summand.
struct DiagonalBlocks {
  complex rr, pp, zz;
};
DiagonalBlocks diagonal_integrand(const CylinderAt& cyl, int n, complex beta, double r, double freq, bool imaginary);

/// Tr G^sc(R, R; iu) for r > a.  Real; the imaginary part of `value` is the
/// assembled residue.  Throws ConvergenceError (partial value attached) if
/// the n-sum does not settle by the maximum order.
GreenTrace trace_sc_imag(const CylinderAt& cyl, double r, double u, const TraceOptions& opt = {});
GreenTrace trace_sc_imag(const FiberGeometry& geom, double r, double u, const TraceOptions& opt = {});

/// Tr G^sc(R, R; omega) for r > a along the contour described by `plan`
/// (which must come from the same cylinder and frequency).
GreenTrace trace_sc_real(const CylinderAt& cyl, double r, double omega, const PoleAvoidancePlan& plan,
                         const TraceOptions& opt = {});
GreenTrace trace_sc_real(const FiberGeometry& geom, double r, double omega, const PoleAvoidancePlan& plan,
                         const TraceOptions& opt = {});

/// Im Tr G^(0)(R, R; omega) of the homogeneous outer medium, sqrt(eps) omega / (2 pi c).
double trace_g0_imagpart(const PermittivityModel& eps_outer, double omega);

/// Real-valued dispersion function of the guided regime k2 < beta < k1 for a
/// lossless cylinder, in the dimensionless core/cladding parameters
/// x = V sqrt(1 - b), y = V sqrt(b) and multiplied by x^4 y^2 J_n(x)^2 so that
/// it stays finite at the band edges and at the J_n zeros of the core.  Its
/// real roots are the guided-mode propagation constants.
double guided_dispersion(double radius, double eps_inner, double eps_outer, int n, double beta, double omega);
/// Same in terms of b = (beta^2 - k2^2) / (k1^2 - k2^2) in (0, 1), which
/// resolves roots closer to k2 than double precision in beta can.
double guided_dispersion_normalized(double radius, double eps_inner, double eps_outer, int n, double b,
                                    double omega);

/// The cylinder at real frequency omega (respectively imaginary frequency u).
CylinderAt at_real_freq(const FiberGeometry& geom, double omega);
CylinderAt at_imag_freq(const FiberGeometry& geom, double u);

}  // namespace cpnf
