#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "cpnf/constants.hpp"
#include "cpnf/error.hpp"
#include "cpnf/potential.hpp"

using namespace cpnf;

namespace {

const AtomCatalog& rb() {
  static const AtomCatalog c = AtomCatalog::default_rb();
  return c;
}

FiberGeometry silica_fiber(double a) {
  FiberGeometry g;
  g.radius = a;
  g.eps_inner = default_silica();
  return g;
}

const TransitionLine& line(const std::string& upper, const std::string& lower) {
  for (const auto& t : rb().lines())
    if (t.upper == upper && t.lower == lower) return t;
  throw LookupError("test: no line " + upper + "-" + lower);
}

// single line g <-> e at 780 nm, both J = 1/2
std::string toy_catalog(double d_au) {
  const double e_cm = 1e7 / 780.0;
  return R"({"schema": "cpnf-atom-catalog/1", "version": "toy-2", "mass_u": 87.0,
    "levels": [
      {"label": "g", "n": 1, "L": 0, "twoJ": 1, "energy_cm": 0.0},
      {"label": "e", "n": 1, "L": 1, "twoJ": 1, "energy_cm": )" +
         std::to_string(e_cm) + R"(}],
    "lines": [{"upper": "e", "lower": "g", "reduced_d_au": )" +
         std::to_string(d_au) + R"(, "wavelength_nm": 780.0}]})";
}

}  // namespace

TEST_CASE("ground state is attractive and has no resonant part") {
  const FiberGeometry f = silica_fiber(200e-9);
  double prev = -1e300;
  for (double d : {50e-9, 100e-9, 250e-9, 600e-9}) {
    const Estimate res = u_resonant("5S1/2", rb(), f, f.radius + d);
    CHECK(res.value == 0.0);
    CHECK(res.error == 0.0);
    const Estimate u = u_nonresonant("5S1/2", rb(), f, f.radius + d);
    CHECK(u.value < 0.0);
    CHECK(u.value > prev);
    CHECK(u.error < 1e-5 * std::abs(u.value));
    prev = u.value;
  }
}

TEST_CASE("curve is additive and matches the pointwise parts") {
  const FiberGeometry f = silica_fiber(200e-9);
  const std::vector<double> grid{f.radius + 150e-9, f.radius + 400e-9};
  const PotentialCurve cv = potential_curve("5P3/2", rb(), f, grid);
  for (size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(cv.converged[i]);
    CHECK(cv.U_total[i] == cv.U_nres[i] + cv.U_res[i]);
    CHECK(cv.U_nres[i] == approx(u_nonresonant("5P3/2", rb(), f, grid[i]).value).epsilon(1e-13));
    CHECK(cv.U_res[i] == approx(u_resonant("5P3/2", rb(), f, grid[i]).value).epsilon(1e-13));
    CHECK(cv.U_error[i] > 0.0);
    CHECK(cv.U_error[i] < 1e-4 * std::abs(cv.U_total[i]));
  }
  CHECK(cv.state == "5P3/2");
  CHECK(cv.radius == f.radius);
}

TEST_CASE("larger radius gives a deeper ground-state potential") {
  double prev = 0.0;
  for (double a : {150e-9, 250e-9, 350e-9}) {
    const FiberGeometry f = silica_fiber(a);
    const double u = u_nonresonant("5S1/2", rb(), f, a + 100e-9).value;
    CHECK(u < prev);
    prev = u;
  }
}

TEST_CASE("two-level potentials") {
  const FiberGeometry f = silica_fiber(200e-9);
  const double w0 = omega_from_wavelength(780.241e-9);
  const double d = 2.99 * constants::dipole_au;
  const TwoLevelPotentials p = two_level_potentials(w0, d, f, f.radius + 200e-9);
  CHECK(p.U_g + p.U_e_nres == 0.0);
  CHECK(p.U_e == p.U_e_nres + p.U_e_res);
  CHECK(p.U_g < 0.0);
  CHECK(p.U_e_res != 0.0);
  CHECK_THROWS_AS(two_level_potentials(-w0, d, f, f.radius + 200e-9), DomainError);
}

TEST_CASE("homogeneous medium gives no potential") {
  FiberGeometry f;
  f.radius = 200e-9;
  f.eps_inner = PermittivityModel::constant(2.1);
  f.eps_outer = PermittivityModel::constant(2.1);
  const TwoLevelPotentials p = two_level_potentials(omega_from_wavelength(780e-9), constants::dipole_au, f, 300e-9);
  CHECK(p.U_g == 0.0);
  CHECK(p.U_e_res == 0.0);
  CHECK(p.U_e == 0.0);
}

TEST_CASE("two-term mean potentials equal two-level ones with normalized dipoles") {
  const FiberGeometry f = silica_fiber(200e-9);
  const double r = f.radius + 250e-9;
  const TransitionLine& d2 = line("5P3/2", "5S1/2");
  const FineLevel& up = rb().level("5P3/2");
  const FineLevel& low = rb().level("5S1/2");
  const TwoTermPotentials t = two_term_potentials(d2, up, low, f, r);
  const double w = up.omega() - low.omega();
  const double d = d2.reduced_d_au * constants::dipole_au;
  const TwoLevelPotentials as_low = two_level_potentials(w, d / std::sqrt(2.0), f, r);
  const TwoLevelPotentials as_up = two_level_potentials(w, d / std::sqrt(4.0), f, r);
  CHECK(t.U_lower == approx(as_low.U_g).epsilon(1e-12));
  CHECK(t.U_upper == approx(as_up.U_e).epsilon(1e-12));
  CHECK_THROWS_AS(two_term_potentials(d2, low, up, f, r), DomainError);
}

TEST_CASE("toy two-level catalog reproduces the two-level potentials") {
  const AtomCatalog toy = AtomCatalog::from_json_text(toy_catalog(4.0));
  const FiberGeometry f = silica_fiber(200e-9);
  const std::vector<double> grid{f.radius + 100e-9, f.radius + 350e-9};
  const PotentialCurve g = potential_curve("g", toy, f, grid);
  const PotentialCurve e = potential_curve("e", toy, f, grid);
  const double w = toy.level("e").omega();
  const double d = 4.0 * constants::dipole_au / std::sqrt(2.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    const TwoLevelPotentials p = two_level_potentials(w, d, f, grid[i]);
    CHECK(g.U_total[i] == approx(p.U_g).epsilon(1e-12));
    CHECK(g.U_res[i] == 0.0);
    CHECK(e.U_nres[i] == approx(p.U_e_nres).epsilon(1e-12));
    CHECK(e.U_res[i] == approx(p.U_e_res).epsilon(1e-12));
  }
}

TEST_CASE("finite-difference force is exact for low-degree polynomials") {
  std::vector<double> r, U;
  for (int i = 0; i < 9; ++i) {
    const double x = 1.0 + 0.1 * i + 0.013 * i * i;  // nonuniform
    r.push_back(x);
    U.push_back(2.0 - 3.0 * x + 0.5 * x * x - 0.7 * x * x * x + 0.25 * x * x * x * x);
  }
  const auto F = radial_force(r, U);
  for (size_t i = 0; i < r.size(); ++i) {
    const double x = r[i];
    const double exact = -(-3.0 + x - 2.1 * x * x + x * x * x);
    CHECK(F[i] == approx(exact).epsilon(1e-9));
  }
  // three points: exact for a parabola
  const std::vector<double> r3{1.0, 1.5, 2.5};
  std::vector<double> U3;
  for (double x : r3) U3.push_back(x * x - x);
  const auto F3 = radial_force(r3, U3);
  for (size_t i = 0; i < 3; ++i) CHECK(F3[i] == approx(-(2.0 * r3[i] - 1.0)).epsilon(1e-12));
  CHECK(radial_force({1.0}, {3.0}) == std::vector<double>{0.0});
  CHECK_THROWS_AS(radial_force({1.0, 2.0}, {1.0}), DomainError);
}

TEST_CASE("frequency shift") {
  PotentialCurve a, b;
  a.r = b.r = {1e-7, 2e-7};
  a.U_total = {2.0 * constants::hbar, 0.0};
  b.U_total = {constants::hbar, 0.0};
  const auto s = frequency_shift(a, b);
  CHECK(s[0] == approx(1.0).epsilon(1e-15));
  CHECK(s[1] == 0.0);
  for (double v : frequency_shift(a, a)) CHECK(v == 0.0);
  b.r = {1e-7, 2.5e-7};
  CHECK_THROWS_AS(frequency_shift(a, b), DomainError);
  CHECK(to_MHz(2.0 * constants::pi * 1e6) == approx(1.0).epsilon(1e-15));
}

TEST_CASE("recoil energy and spontaneous force ceiling") {
  const double m = rb().mass_kg();
  CHECK(recoil_energy_nK(780e-9, m) == approx(181.0).epsilon(0.01));
  CHECK(recoil_energy_nK(1560e-9, m) == approx(recoil_energy_nK(780e-9, m) / 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(recoil_energy_nK(0.0, m), DomainError);
  const double g2 = line_decay_rate(line("5P3/2", "5S1/2"), rb());
  CHECK(g2 == approx(3.81e7).epsilon(0.02));
  const double f1 = to_zN(spontaneous_force_max(line("5P1/2", "5S1/2"), rb()));
  const double f2 = to_zN(spontaneous_force_max(line("5P3/2", "5S1/2"), rb()));
  CHECK(f1 == approx(15.0).epsilon(0.1));
  CHECK(f2 == approx(16.0).epsilon(0.1));
}

TEST_CASE("curve does not depend on the worker count") {
  const FiberGeometry f = silica_fiber(200e-9);
  std::vector<double> grid;
  for (int i = 0; i < 4; ++i) grid.push_back(f.radius + (120 + 90 * i) * 1e-9);
  const PotentialCurve one = potential_curve("5P1/2", rb(), f, grid, {}, 1);
  const PotentialCurve three = potential_curve("5P1/2", rb(), f, grid, {}, 3);
  CHECK(one.U_total == three.U_total);
  CHECK(one.U_error == three.U_error);
  CHECK(one.F == three.F);
}

TEST_CASE("pole strategies and detour radii agree within their errors") {
  const FiberGeometry f = silica_fiber(200e-9);
  const double w = omega_from_wavelength(780.241e-9);
  for (double d : {150e-9, 700e-9}) {
    const double r = f.radius + d;
    PotentialOptions lossy;
    lossy.pole_strategy = PoleStrategy::lossy_epsilon;
    const RealTrace a = resonant_trace(f, r, w);
    const RealTrace b = resonant_trace(f, r, w, lossy);
    CHECK(std::abs(a.trace.real() - b.trace.real()) <= a.error + b.error);
    CHECK(b.error < 1e-4 * std::abs(b.trace.real()));

    const double k0 = w / constants::c;
    const double k1 = std::sqrt(at_real_freq(f, w).eps_inner.real()) * k0;
    PotentialOptions small;
    small.detour_radius_override = 0.01 * (k1 - k0);
    const RealTrace s = resonant_trace(f, r, w, small);
    CHECK(std::abs(a.trace.real() - s.trace.real()) <= a.error + s.error);
  }
}

TEST_CASE("argument errors and per-point failures") {
  const FiberGeometry f = silica_fiber(200e-9);
  CHECK_THROWS_AS(u_nonresonant("5S1/2", rb(), f, 150e-9), DomainError);
  CHECK_THROWS_AS(u_nonresonant("9Z1/2", rb(), f, 300e-9), LookupError);
  CHECK_THROWS_AS(potential_curve("5S1/2", rb(), f, {300e-9, 250e-9}), DomainError);
  CHECK_THROWS_AS(potential_curve("5S1/2", rb(), f, {}), DomainError);
  // 2 nm from the surface needs more azimuthal orders than allowed
  const PotentialCurve cv = potential_curve("5S1/2", rb(), f, {f.radius + 2e-9, f.radius + 100e-9});
  CHECK(!cv.converged[0]);
  CHECK(std::isnan(cv.U_total[0]));
  CHECK(!cv.messages[0].empty());
  CHECK(cv.converged[1]);
  CHECK(cv.U_total[1] < 0.0);
}
