#pragma once

// Adaptive Gauss-Kronrod integration, the semi-infinite map used for the
// imaginary-frequency integrals, and the beta-integral with contour detours
// around the guided-mode poles of the real-frequency Green tensor.

#include <complex>
#include <functional>
#include <vector>

#include "cpnf/fiber.hpp"

namespace cpnf {

using complex = std::complex<double>;

struct QuadratureResult {
  complex value;
  double abs_error = 0.0;  // |K15 - G7| summed over the final panels
  long evaluations = 0;
  double aux = 0.0;        // sum over the final panels of |integral of the auxiliary channel|
};

/// Integrand value plus an auxiliary quantity (e.g. a truncation error
/// estimate) integrated by the same rule on the same panels.  Only `value`
/// drives the adaptivity.
struct Tracked {
  complex value;
  complex aux;
  friend Tracked operator+(const Tracked& x, const Tracked& y) { return {x.value + y.value, x.aux + y.aux}; }
  friend Tracked operator*(const Tracked& x, complex s) { return {x.value * s, x.aux * s}; }
  friend Tracked operator*(const Tracked& x, double s) { return {x.value * s, x.aux * s}; }
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_panels = 2000;
};

using RealIntegrand = std::function<complex(double)>;
using ComplexIntegrand = std::function<complex(complex)>;
using TrackedRealIntegrand = std::function<Tracked(double)>;
using TrackedComplexIntegrand = std::function<Tracked(complex)>;

/// Globally adaptive G7-K15 on [a, b].  Throws ConvergenceError (carrying the
/// real part of the best estimate) when max_panels is reached.
QuadratureResult integrate_adaptive(const RealIntegrand& f, double a, double b, const QuadratureOptions& opt = {});

/// Same, over several consecutive intervals given by their sorted edges; the
/// panel budget and the tolerance are shared.
QuadratureResult integrate_adaptive(const RealIntegrand& f, const std::vector<double>& edges,
                                    const QuadratureOptions& opt = {});

/// int_0^inf f(u) du through u = u0 t / (1 - t).  The initial panels are one
/// decade wide over [1e-3, 1e3] u0; breakpoints in u (e.g. a discontinuity of
/// the integrand) become further panel edges.
QuadratureResult integrate_semi_infinite(const RealIntegrand& f, double u0, const QuadratureOptions& opt = {},
                                         const std::vector<double>& breakpoints = {});
QuadratureResult integrate_semi_infinite(const TrackedRealIntegrand& f, double u0, const QuadratureOptions& opt = {},
                                         const std::vector<double>& breakpoints = {});

enum class HalfPlane { lower, upper };

struct GuidedPole {
  double beta = 0.0;        // rad/m, on the real axis
  double b = 0.0;           // (beta^2 - k2^2) / (k1^2 - k2^2), kept for poles near k2
  std::vector<int> orders;  // azimuthal orders n >= 0 whose dispersion relation vanishes here
};

struct PoleAvoidancePlan {
  std::vector<GuidedPole> poles;  // sorted by beta
  std::vector<double> radii;      // detour radius per pole, rad/m; 0 = passed by the branch chord
  HalfPlane half_plane = HalfPlane::lower;
  /// Replace the stretch of the real axis around the branch point by a chord
  /// in the fourth quadrant of w = sqrt(beta^2 - k2^2).  Needs f analytic
  /// in beta^2 there, which holds for the Green tensor integrands.
  bool bypass_branch_point = true;

  /// Checks the radius invariants against the branch point k2 and the band
  /// edge k1 (both real); throws ContourError on overlap or violation.
  void validate(double k2, double k1) const;
};

/// Real roots of the guided-regime dispersion function for every order
/// n = 0..max_order in (k2, k1).  Empty when the core is lossy at omega or
/// when k1 <= k2.  The scan reaches b = 1e-300 at the lower band edge and
/// 1 - 1e-12 at the upper one.
std::vector<GuidedPole> locate_guided_mode_poles(const CylinderAt& cyl, double omega, int max_order = 60);
std::vector<GuidedPole> locate_guided_mode_poles(const FiberGeometry& geom, double omega, int max_order = 60);

/// Default detour radius: min(0.05 (k1 - k2), half the spacing to the
/// neighbouring poles, half the distance to the band edges).  A positive
/// `radius_override` replaces the 0.05 (k1 - k2) term.  With the lower half
/// plane and the branch chord, poles within 1e-3 (k1 - k2) of k2 get radius 0:
/// the chord passes below them.
PoleAvoidancePlan make_pole_plan(std::vector<GuidedPole> poles, double k2, double k1, HalfPlane half_plane,
                                 double radius_override = 0.0);

/// int_0^inf f(beta) d beta for an integrand with a branch point at k2 > 0
/// and simple poles listed in the plan.  [0, k2] is mapped by beta = k2 sin t,
/// the evanescent side by beta = k2 cosh s with semicircular detours of the
/// plan's radii into the plan's half plane; the tail is summed in panels of
/// s until three consecutive panels fall below rel_tol of the running total.
/// With plan.bypass_branch_point the path leaves the radiation side at
/// beta = k2/2 and rejoins the real axis halfway between k2 and the first
/// detour (or at sqrt(2) k2 without poles) along a straight line in w.
QuadratureResult integrate_beta_with_detours(const ComplexIntegrand& f, const PoleAvoidancePlan& plan, double k2,
                                             const QuadratureOptions& opt = {});
QuadratureResult integrate_beta_with_detours(const TrackedComplexIntegrand& f, const PoleAvoidancePlan& plan,
                                             double k2, const QuadratureOptions& opt = {});

}  // namespace cpnf
