#pragma once

// Casimir-Polder potentials of a multilevel atom outside a cylinder: the
// nonresonant part from an imaginary-frequency integral of the Green-tensor
// trace, the resonant part from its real part at the downward transition
// frequencies, two-level specializations, forces and line shifts.
//
// Energies are in joules and forces in newtons; the *_uK, *_zN and *_MHz
// helpers convert at the reporting boundary.

#include <string>
#include <vector>

#include "cpnf/atomdata.hpp"
#include "cpnf/constants.hpp"
#include "cpnf/fiber.hpp"
#include "cpnf/green.hpp"

namespace cpnf {

enum class PoleStrategy {
  detour,        // contour around the guided-mode poles
  lossy_epsilon  // small core absorption, extrapolated to zero
};

struct PotentialOptions {
  double u_rel_tol = 1e-6;
  TraceOptions trace;
  PoleStrategy pole_strategy = PoleStrategy::detour;
  HalfPlane half_plane = HalfPlane::lower;
  double detour_radius_override = 0.0;  // rad/m; 0 = default radius
  /// Smallest Im eps of the core for lossy_epsilon; the traces at 4, 2 and 1
  /// times this are extrapolated to zero loss.
  double lossy_delta = 1e-3;
  Shells shells = Shells::production;
};

/// Value with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Tr G^sc(R, R; omega) with the configured pole strategy.  `plan` may be supplied to reuse a pole
/// search for the same cylinder and frequency (detour strategy only).
struct RealTrace {
  complex trace;
  double error = 0.0;  // absolute, on the real part
};
RealTrace resonant_trace(const FiberGeometry& geom, double r, double omega, const PotentialOptions& opt = {},
                         const PoleAvoidancePlan* plan = nullptr);

/// Pole plan for the cylinder at real frequency omega with the options'
/// half plane and radius override.
PoleAvoidancePlan pole_plan_for(const FiberGeometry& geom, double omega, const PotentialOptions& opt = {});

/// int_0^inf du w(u) Tr G^sc(R, R; iu) for a weight given by its line
/// frequencies and strengths: w(u) = sum_k s_k u^2 / (omega_k^2 + u^2).
struct LorentzWeight {
  double omega;  // rad/s, any sign
  double strength;
};
Estimate weighted_imag_integral(const FiberGeometry& geom, double r, const std::vector<LorentzWeight>& weights,
                                const PotentialOptions& opt = {});

/// Nonresonant part for level `state`, in joules.
Estimate u_nonresonant(const std::string& state, const AtomCatalog& catalog, const FiberGeometry& geom, double r,
                       const PotentialOptions& opt = {});
/// Resonant part for level `state`, in joules (0 without downward lines).
Estimate u_resonant(const std::string& state, const AtomCatalog& catalog, const FiberGeometry& geom, double r,
                    const PotentialOptions& opt = {});

/// Isotropic two-level atom with transition frequency omega0 and dipole
/// magnitude d (C m).
struct TwoLevelPotentials {
  double U_g = 0.0;
  double U_e = 0.0;
  double U_e_nres = 0.0;
  double U_e_res = 0.0;
};
TwoLevelPotentials two_level_potentials(double omega0, double d, const FiberGeometry& geom, double r,
                                        const PotentialOptions& opt = {});

/// Mean potentials of the lower term (n, J) and the upper term (n', J') of
/// one line in the two-term model.  Only the levels' J values and the
/// energy difference enter.
struct TwoTermPotentials {
  double U_lower = 0.0;
  double U_upper = 0.0;
};
TwoTermPotentials two_term_potentials(const TransitionLine& line, const FineLevel& upper, const FineLevel& lower,
                                      const FiberGeometry& geom, double r, const PotentialOptions& opt = {});

struct PotentialCurve {
  std::string state;
  double radius = 0.0;
  std::string eps_inner, eps_outer;  // model descriptions
  std::vector<double> r;             // m
  std::vector<double> U_total, U_nres, U_res;  // J
  std::vector<double> U_error;                 // J, absolute
  std::vector<double> F;                       // N, radial
  std::vector<bool> converged;
  std::vector<std::string> messages;  // empty unless the point failed
};

/// Full curve over a sorted grid of radial positions (all > radius).  Points
/// that fail to converge are flagged instead of aborting the curve.  Points
/// are distributed over `workers` threads; the result does not depend on it.
PotentialCurve potential_curve(const std::string& state, const AtomCatalog& catalog, const FiberGeometry& geom,
                               const std::vector<double>& r_grid, const PotentialOptions& opt = {}, int workers = 1);

/// -dU/dr on a sorted grid: five-point finite differences (one-sided near
/// the ends; fewer points for grids shorter than five).
std::vector<double> radial_force(const std::vector<double>& r, const std::vector<double>& U);

/// (U_upper - U_lower) / hbar in rad/s; the curves must share their grid.
std::vector<double> frequency_shift(const PotentialCurve& upper, const PotentialCurve& lower);

/// hbar^2 k^2 / (2 m k_B) in nK.
double recoil_energy_nK(double wavelength_m, double mass_kg);
/// Spontaneous emission rate of the line's upper level into the line, 1/s.
double line_decay_rate(const TransitionLine& line, const AtomCatalog& catalog);
/// Maximal spontaneous light force hbar k gamma / 2, in N.
double spontaneous_force_max(const TransitionLine& line, const AtomCatalog& catalog);

inline double to_uK(double joules) { return joules / constants::k_boltzmann * 1e6; }
inline double to_zN(double newtons) { return newtons * 1e21; }
inline double to_MHz(double rad_per_s) { return rad_per_s / (2.0 * constants::pi) * 1e-6; }

}  // namespace cpnf
