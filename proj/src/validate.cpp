#include <cmath>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <random>

#include "cpnf/dielectric.hpp"
#include "cpnf/error.hpp"
#include "cpnf/green.hpp"
#include "cpnf/run.hpp"
#include "cpnf/specfun.hpp"
#include "cpnf/wigner.hpp"

namespace cpnf {

namespace {

using constants::pi;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double rel(complex a, complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// records "what: value (limit)" and fails the group when value > limit
void bound(ValidationGroup& g, const std::string& what, double value, double limit) {
  const bool ok = value <= limit;
  g.passed = g.passed && ok;
  g.details.push_back(what + ": " + sci(value) + (ok ? " <= " : " > ") + sci(limit));
}

void expect(ValidationGroup& g, const std::string& what, bool ok) {
  g.passed = g.passed && ok;
  g.details.push_back(what + (ok ? ": ok" : ": FAILED"));
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return x;
}

void specfun_group(ValidationGroup& g) {
  using namespace specfun;
  double ik = 0.0, jy = 0.0, conn_j = 0.0, conn_h = 0.0;
  for (int n = 0; n <= 50; ++n) {
    complex in_pow(1.0, 0.0);
    for (int k = 0; k < n; ++k) in_pow *= complex(0.0, 1.0);
    for (double x : log_grid(1e-3, 50.0, 25)) {
      const double w = bessel_i(n, x) * bessel_k_prime(n, x) - bessel_i_prime(n, x) * bessel_k(n, x);
      ik = std::max(ik, std::abs(w * x + 1.0));
      if (n <= 20 || x > 0.1) {
        const complex wr = bessel_j(n, x) * bessel_y_prime(n, x) - bessel_j_prime(n, x) * bessel_y(n, x);
        jy = std::max(jy, rel(wr, 2.0 / (pi * x)));
      }
      conn_j = std::max(conn_j, rel(bessel_j(n, complex(0.0, x)), in_pow * bessel_i(n, x)));
      conn_h = std::max(conn_h, rel(hankel1(n, complex(0.0, x)), 2.0 / pi / (in_pow * complex(0.0, 1.0)) * bessel_k(n, x)));
    }
  }
  bound(g, "I-K Wronskian, n <= 50", ik, 1e-12);
  bound(g, "J-Y Wronskian", jy, 1e-12);
  bound(g, "J(ix) = i^n I(x)", conn_j, 1e-12);
  bound(g, "H1(ix) = 2 K(x) / (pi i^(n+1))", conn_h, 1e-12);
}

void wigner_group(ValidationGroup& g) {
  using namespace wigner;
  double o3 = 0.0;
  for (int tj3 = 0; tj3 <= 4; tj3 += 2)
    for (int tj3p = 0; tj3p <= 4; tj3p += 2)
      for (int tm3 = -tj3; tm3 <= tj3; tm3 += 2) {
        double s = 0.0;
        for (int tm1 = -2; tm1 <= 2; tm1 += 2)
          for (int tm2 = -2; tm2 <= 2; tm2 += 2)
            s += wigner3j_twice(2, 2, tj3, tm1, tm2, tm3) * wigner3j_twice(2, 2, tj3p, tm1, tm2, tm3);
        o3 = std::max(o3, std::abs(s - (tj3 == tj3p ? 1.0 / (tj3 + 1) : 0.0)));
      }
  double o6 = 0.0;
  for (int tj6 = 0; tj6 <= 6; ++tj6)
    for (int tj6p = 0; tj6p <= 6; ++tj6p) {
      if (!triangle(1, 2, tj6) || !triangle(1, 2, tj6p)) continue;
      double s = 0.0;
      for (int tj3 = 0; tj3 <= 8; ++tj3)
        s += (tj3 + 1) * wigner6j_twice(1, 2, tj3, 1, 2, tj6) * wigner6j_twice(1, 2, tj3, 1, 2, tj6p);
      o6 = std::max(o6, std::abs(s - (tj6 == tj6p ? 1.0 / (tj6 + 1) : 0.0)));
    }
  bound(g, "3j orthogonality", o3, 1e-14);
  bound(g, "6j orthogonality", o6, 1e-14);

  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  const std::vector<std::pair<int, int>> pairs = {{1, 1}, {1, 3}, {3, 1}, {3, 3}, {3, 5}, {5, 3}, {5, 5}};
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    Dyadic t;
    for (auto& row : t)
      for (auto& v : row) v = complex(nd(rng), nd(rng));
    for (auto [tj, tjp] : pairs)
      for (const auto& c : validate_sum_rule(AngularMomentum(tj), AngularMomentum(tjp), AngularMomentum(3), t))
        worst = std::max(worst, rel(c.lhs, c.rhs));
  }
  bound(g, "sublevel sum rule, 200 random dyadics", worst, 1e-12);
}

void dielectric_group(ValidationGroup& g) {
  const DawsonModel d = load_dawson(data_dir() + "/silica_dawson.json");
  expect(g, "eps_inf = 2.1232 from the data file", d.eps_inf == 2.1232);
  const double e1 = std::abs(d.eps_real_freq(omega_from_wavelength(8.249e-6)));
  const double e2 = std::abs(d.eps_real_freq(omega_from_wavelength(8.495e-6)));
  bound(g, "| |eps(8.249 um)| / 0.69 - 1 |", std::abs(e1 / 0.69 - 1.0), 0.05);
  bound(g, "| |eps(8.495 um)| / 1.07 - 1 |", std::abs(e2 / 1.07 - 1.0), 0.05);
  // the Faddeeva form continued to imaginary wavenumber must be real
  const double gs = 2.0 * std::sqrt(std::log(2.0));
  double residue = 0.0;
  for (double u = 1e10; u <= 1e17; u *= 1.5) {
    const complex eta(0.0, wavenumber_from_omega(u));
    complex eps = d.eps_inf;
    for (const auto& t : d.terms)
      eps += complex(0.0, t.alpha) *
             (specfun::faddeeva(gs * (eta - t.center_cm) / t.width_cm) - specfun::faddeeva(gs * (eta + t.center_cm) / t.width_cm));
    residue = std::max(residue, std::abs(eps.imag()));
  }
  bound(g, "Im eps(iu), Dawson model", residue, 1e-13);
}

void catalog_group(ValidationGroup& g, const std::string& path) {
  const AtomCatalog c = path.empty() ? AtomCatalog::load(data_dir() + "/rb_catalog.json", false)
                                     : AtomCatalog::load(path, false);
  const auto issues = c.problems();
  g.details.push_back("catalog " + c.version() + ": " + std::to_string(c.levels().size()) + " levels, " +
                      std::to_string(c.lines().size()) + " lines");
  for (const auto& s : issues) g.details.push_back(s);
  g.passed = issues.empty();
}

void green_group(ValidationGroup& g) {
  FiberGeometry hom;
  hom.radius = 200e-9;
  hom.eps_inner = PermittivityModel::constant(2.1);
  hom.eps_outer = PermittivityModel::constant(2.1);
  FiberGeometry fib = hom;
  fib.eps_outer = PermittivityModel::constant(1.0);
  const double r = 350e-9, w = omega_from_wavelength(780e-9);
  const double ref = std::abs(trace_sc_imag(fib, r, w).value);
  bound(g, "homogeneous medium, |Tr G(iu)| relative", std::abs(trace_sc_imag(hom, r, w).value) / ref, 1e-12);
  bound(g, "homogeneous medium, |Tr G(omega)| relative",
        std::abs(trace_sc_real(hom, r, w, PoleAvoidancePlan{}).value) / ref, 1e-12);

  const CylinderAt cyl = at_imag_freq(fib, w);
  double imag_part = 0.0;
  for (int n = 0; n <= 12; n += 3)
    for (double q : {0.1, 1.0, 3.0, 10.0}) {
      const complex t = trace_integrand(cyl, n, q * w / constants::c, r, w, true);
      imag_part = std::max(imag_part, std::abs(t.imag()) / std::abs(t));
    }
  const GreenTrace tr = trace_sc_imag(fib, r, w);
  imag_part = std::max(imag_part, std::abs(tr.value.imag()) / std::abs(tr.value));
  bound(g, "imaginary-frequency trace is real", imag_part, 1e-10);
}

void potential_group(ValidationGroup& g) {
  FiberGeometry f;
  f.radius = 200e-9;
  f.eps_inner = default_silica();
  const TwoLevelPotentials p = two_level_potentials(omega_from_wavelength(780.241e-9), 3.0 * constants::dipole_au, f,
                                                    f.radius + 300e-9);
  expect(g, "U_g = -U_e_nres exactly", p.U_g == -p.U_e_nres);
  const AtomCatalog c = AtomCatalog::default_rb();
  const PotentialCurve cv = potential_curve("5P3/2", c, f, {f.radius + 200e-9, f.radius + 500e-9});
  bool add = true;
  for (size_t i = 0; i < cv.r.size(); ++i) add = add && cv.converged[i] && cv.U_total[i] == cv.U_nres[i] + cv.U_res[i];
  expect(g, "U_total = U_nres + U_res exactly", add);
  const PotentialCurve gs = potential_curve("5S1/2", c, f, {f.radius + 100e-9});
  expect(g, "ground state has no resonant part", gs.U_res[0] == 0.0 && gs.U_total[0] < 0.0);
}

void poles_group(ValidationGroup& g, int points) {
  FiberGeometry f;
  f.radius = 200e-9;
  f.eps_inner = default_silica();
  const double lines[2] = {omega_from_wavelength(780.241e-9), omega_from_wavelength(794.979e-9)};
  PotentialOptions lossy;
  lossy.pole_strategy = PoleStrategy::lossy_epsilon;
  int agree = 0;
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double d = 100e-9 + 1100e-9 * i / std::max(1, points - 1);
    const double w = lines[i % 2];
    const RealTrace a = resonant_trace(f, f.radius + d, w);
    const RealTrace b = resonant_trace(f, f.radius + d, w, lossy);
    const double ratio = std::abs(a.trace.real() - b.trace.real()) / (a.error + b.error);
    worst = std::max(worst, ratio);
    agree += ratio <= 1.0;
  }
  g.details.push_back("detour vs lossy-epsilon: " + std::to_string(agree) + "/" + std::to_string(points) +
                      " points within combined errors, worst |diff|/(err_a + err_b) = " + sci(worst));
  g.passed = agree == points;

  const double w = lines[0];
  const double k0 = w / constants::c;
  const double k1 = std::sqrt(at_real_freq(f, w).eps_inner.real()) * k0;
  PotentialOptions small;
  small.detour_radius_override = 0.01 * (k1 - k0);
  double worst_r = 0.0;
  for (double d : {150e-9, 450e-9, 900e-9}) {
    const RealTrace a = resonant_trace(f, f.radius + d, w);
    const RealTrace b = resonant_trace(f, f.radius + d, w, small);
    worst_r = std::max(worst_r, std::abs(a.trace.real() - b.trace.real()) / (a.error + b.error));
  }
  bound(g, "detour radius 0.01 (k1 - k2) vs default, |diff|/(err_a + err_b)", worst_r, 1.0);
}

}  // namespace

std::vector<ValidationGroup> run_validation(const ValidationOptions& opt) {
  const std::vector<std::pair<std::string, std::function<void(ValidationGroup&)>>> groups = {
      {"specfun", specfun_group},
      {"wigner", wigner_group},
      {"dielectric", dielectric_group},
      {"catalog", [&](ValidationGroup& g) { catalog_group(g, opt.catalog_path); }},
      {"green", green_group},
      {"potential", potential_group},
      {"poles", [&](ValidationGroup& g) { poles_group(g, opt.pole_points); }},
  };
  std::vector<ValidationGroup> out;
  for (const auto& [name, run] : groups) {
    ValidationGroup g;
    g.name = name;
    try {
      run(g);
    } catch (const std::exception& e) {
      g.passed = false;
      g.details.push_back(std::string("error: ") + e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::string validation_report_json(const std::vector<ValidationGroup>& groups) {
  nlohmann::json j;
  bool all = true;
  j["groups"] = nlohmann::json::array();
  for (const auto& g : groups) {
    all = all && g.passed;
    j["groups"].push_back({{"name", g.name}, {"passed", g.passed}, {"details", g.details}});
  }
  j["passed"] = all;
  return j.dump(2);
}

}  // namespace cpnf
