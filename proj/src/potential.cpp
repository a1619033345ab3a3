#include "cpnf/potential.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "cpnf/dielectric.hpp"
#include "cpnf/error.hpp"
#include "cpnf/quadrature.hpp"

namespace cpnf {

namespace {

using constants::c;
using constants::eps0;
using constants::hbar;
using constants::pi;

double trace_rel_error(const GreenTrace& g) { return g.beta_error_estimate + g.n_error_estimate; }

void check_outside(const FiberGeometry& geom, double r) {
  geom.validate();
  if (!(r > geom.radius) || !std::isfinite(r)) throw DomainError("field point must lie outside the fiber (r > a)");
}

// u values where the imaginary-frequency permittivity switches model
std::vector<double> seams(const FiberGeometry& geom) {
  std::vector<double> out;
  for (const PermittivityModel* m : {&geom.eps_inner, &geom.eps_outer})
    if (m->kind() == PermittivityModel::Kind::auto_silica) out.push_back(omega_from_wavelength(m->switch_wavelength()));
  return out;
}

double dipole_si(const TransitionLine& line) { return line.reduced_d_au * constants::dipole_au; }

}  // namespace

PoleAvoidancePlan pole_plan_for(const FiberGeometry& geom, double omega, const PotentialOptions& opt) {
  const CylinderAt cyl = at_real_freq(geom, omega);
  const double k2 = std::sqrt(cyl.eps_outer.real()) * omega / c;
  const double k1 = std::sqrt(cyl.eps_inner).real() * omega / c;
  return make_pole_plan(locate_guided_mode_poles(cyl, omega), k2, k1, opt.half_plane, opt.detour_radius_override);
}

RealTrace resonant_trace(const FiberGeometry& geom, double r, double omega, const PotentialOptions& opt,
                         const PoleAvoidancePlan* plan) {
  check_outside(geom, r);
  if (!(omega > 0.0)) throw DomainError("transition frequency must be positive");
  RealTrace out;
  if (opt.pole_strategy == PoleStrategy::detour) {
    const PoleAvoidancePlan own = plan ? PoleAvoidancePlan{} : pole_plan_for(geom, omega, opt);
    const GreenTrace g = trace_sc_real(geom, r, omega, plan ? *plan : own, opt.trace);
    out.trace = g.value;
    out.error = trace_rel_error(g) * std::abs(g.value);
    return out;
  }
  if (!(opt.lossy_delta > 0.0)) throw DomainError("lossy_delta must be positive");
  // poles move off the axis with core loss; the trace is smooth in the loss
  // and extrapolated from 4, 2 and 1 times delta
  const CylinderAt base = at_real_freq(geom, omega);
  TraceOptions topt = opt.trace;
  topt.max_panels = std::max(topt.max_panels, 20000);
  complex v[3];
  double inner = 0.0;
  for (int i = 0; i < 3; ++i) {
    CylinderAt cyl = base;
    cyl.eps_inner += complex(0.0, opt.lossy_delta * double(4 >> i));
    const GreenTrace g = trace_sc_real(cyl, r, omega, PoleAvoidancePlan{}, topt);
    v[i] = g.value;
    inner = std::max(inner, trace_rel_error(g) * std::abs(g.value));
  }
  const complex r1a = 2.0 * v[1] - v[0];
  const complex r1b = 2.0 * v[2] - v[1];
  const complex r2 = (4.0 * r1b - r1a) / 3.0;
  out.trace = r2;
  out.error = std::abs(r2.real() - r1b.real()) + 3.0 * inner;
  return out;
}

Estimate weighted_imag_integral(const FiberGeometry& geom, double r, const std::vector<LorentzWeight>& weights,
                                const PotentialOptions& opt) {
  check_outside(geom, r);
  if (weights.empty()) return {};
  const double u0 = c / (2.0 * (r - geom.radius));
  // Below u_qs the trace is quasi-static, u^2 Tr G(iu) -> const, and the
  // beta integral loses digits to cancellation; above u_max it is below e^-80.
  const double u_qs = 1e-3 * u0, u_max = 80.0 * u0;
  auto w = [&](double u) {
    double s = 0.0;
    for (const auto& k : weights) s += k.strength * u * u / (k.omega * k.omega + u * u);
    return s;
  };
  auto f = [&](double u) -> Tracked {
    if (u < u_qs || u > u_max) return {0.0, 0.0};
    const GreenTrace g = trace_sc_imag(geom, r, u, opt.trace);
    const double v = w(u) * g.value.real();
    return {v, trace_rel_error(g) * std::abs(v)};
  };
  std::vector<double> breaks = seams(geom);
  for (const auto& k : weights) breaks.push_back(std::abs(k.omega));
  breaks.push_back(u_qs);
  breaks.push_back(u_max);
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double b) { return b < u_qs || b > u_max; }),
               breaks.end());
  QuadratureOptions q;
  q.rel_tol = opt.u_rel_tol;
  const QuadratureResult res = integrate_semi_infinite(f, u0, q, breaks);

  // int_0^u_qs sum_k s_k u^2/(omega_k^2 + u^2) L/u^2 du with L = u_qs^2 Tr G(i u_qs)
  const GreenTrace g = trace_sc_imag(geom, r, u_qs, opt.trace);
  const double L = u_qs * u_qs * g.value.real();
  double low = 0.0;
  for (const auto& k : weights) low += k.strength / std::abs(k.omega) * std::atan(u_qs / std::abs(k.omega));
  low *= L;
  return {res.value.real() + low, res.abs_error + res.aux + trace_rel_error(g) * std::abs(low)};
}

Estimate u_nonresonant(const std::string& state, const AtomCatalog& catalog, const FiberGeometry& geom, double r,
                       const PotentialOptions& opt) {
  const FineLevel& a = catalog.level(state);
  std::vector<LorentzWeight> weights;
  for (const auto& t : catalog.transitions_from(state, opt.shells)) {
    const double d = dipole_si(*t.line);
    weights.push_back({t.omega_ab, t.omega_ab * d * d / a.J.multiplicity()});
  }
  const Estimate i = weighted_imag_integral(geom, r, weights, opt);
  const double pre = -1.0 / (3.0 * pi * eps0 * c * c);
  return {pre * i.value, std::abs(pre) * i.error};
}

Estimate u_resonant(const std::string& state, const AtomCatalog& catalog, const FiberGeometry& geom, double r,
                    const PotentialOptions& opt) {
  const FineLevel& a = catalog.level(state);
  check_outside(geom, r);
  Estimate out;
  for (const auto& t : catalog.transitions_from(state, opt.shells)) {
    if (t.direction != Direction::downward) continue;
    const double d = dipole_si(*t.line);
    const RealTrace g = resonant_trace(geom, r, t.omega_ab, opt);
    const double pre = -t.omega_ab * t.omega_ab / (3.0 * eps0 * c * c) * d * d / a.J.multiplicity();
    out.value += pre * g.trace.real();
    out.error += std::abs(pre) * g.error;
  }
  return out;
}

TwoLevelPotentials two_level_potentials(double omega0, double d, const FiberGeometry& geom, double r,
                                        const PotentialOptions& opt) {
  if (!(omega0 > 0.0)) throw DomainError("transition frequency must be positive");
  // isotropic dipole: d.G.d* -> |d|^2 Tr G / 3
  const double d2 = d * d / 3.0;
  const Estimate i = weighted_imag_integral(geom, r, {{omega0, 1.0}}, opt);
  TwoLevelPotentials p;
  p.U_g = omega0 / (pi * eps0 * c * c) * d2 * i.value;
  p.U_e_nres = -p.U_g;
  p.U_e_res = -omega0 * omega0 / (eps0 * c * c) * d2 * resonant_trace(geom, r, omega0, opt).trace.real();
  p.U_e = p.U_e_nres + p.U_e_res;
  return p;
}

TwoTermPotentials two_term_potentials(const TransitionLine& line, const FineLevel& upper, const FineLevel& lower,
                                      const FiberGeometry& geom, double r, const PotentialOptions& opt) {
  if (upper.label != line.upper || lower.label != line.lower)
    throw DomainError("levels do not match line " + line.id());
  const double omega = upper.omega() - lower.omega();
  const double d = dipole_si(line);
  const Estimate i = weighted_imag_integral(geom, r, {{omega, 1.0}}, opt);
  const double nres = omega / (3.0 * pi * eps0 * c * c) * d * d * i.value;
  const double res = -omega * omega / (3.0 * eps0 * c * c) * d * d * resonant_trace(geom, r, omega, opt).trace.real();
  TwoTermPotentials p;
  p.U_lower = nres / lower.J.multiplicity();
  p.U_upper = (-nres + res) / upper.J.multiplicity();
  return p;
}

PotentialCurve potential_curve(const std::string& state, const AtomCatalog& catalog, const FiberGeometry& geom,
                               const std::vector<double>& r_grid, const PotentialOptions& opt, int workers) {
  geom.validate();
  if (r_grid.empty()) throw DomainError("empty radial grid");
  for (size_t i = 0; i < r_grid.size(); ++i) {
    check_outside(geom, r_grid[i]);
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw DomainError("radial grid must be strictly increasing");
  }
  const FineLevel& a = catalog.level(state);
  const auto lines = catalog.transitions_from(state, opt.shells);

  std::vector<LorentzWeight> weights;
  struct Down {
    double omega, pre;
    PoleAvoidancePlan plan;
  };
  std::vector<Down> down;
  for (const auto& t : lines) {
    const double d = dipole_si(*t.line);
    weights.push_back({t.omega_ab, t.omega_ab * d * d / a.J.multiplicity()});
    if (t.direction == Direction::downward) {
      Down dn{t.omega_ab, -t.omega_ab * t.omega_ab / (3.0 * eps0 * c * c) * d * d / a.J.multiplicity(), {}};
      if (opt.pole_strategy == PoleStrategy::detour) dn.plan = pole_plan_for(geom, t.omega_ab, opt);
      down.push_back(std::move(dn));
    }
  }

  const size_t n = r_grid.size();
  PotentialCurve cv;
  cv.state = state;
  cv.radius = geom.radius;
  cv.eps_inner = geom.eps_inner.describe();
  cv.eps_outer = geom.eps_outer.describe();
  cv.r = r_grid;
  cv.U_total.assign(n, 0.0);
  cv.U_nres.assign(n, 0.0);
  cv.U_res.assign(n, 0.0);
  cv.U_error.assign(n, 0.0);
  cv.converged.assign(n, true);
  cv.messages.assign(n, {});

  const double pre_nres = -1.0 / (3.0 * pi * eps0 * c * c);
  auto point = [&](size_t i) {
    const double r = r_grid[i];
    try {
      const Estimate ni = weighted_imag_integral(geom, r, weights, opt);
      double res = 0.0, err = std::abs(pre_nres) * ni.error;
      for (const auto& dn : down) {
        const RealTrace g = resonant_trace(geom, r, dn.omega, opt, &dn.plan);
        res += dn.pre * g.trace.real();
        err += std::abs(dn.pre) * g.error;
      }
      cv.U_nres[i] = pre_nres * ni.value;
      cv.U_res[i] = res;
      cv.U_total[i] = cv.U_nres[i] + cv.U_res[i];
      cv.U_error[i] = err;
    } catch (const ConvergenceError& e) {
      cv.converged[i] = false;
      cv.messages[i] = e.what();
    } catch (const PoleError& e) {
      cv.converged[i] = false;
      cv.messages[i] = e.what();
    } catch (const ContourError& e) {
      cv.converged[i] = false;
      cv.messages[i] = e.what();
    } catch (const OverflowError& e) {
      cv.converged[i] = false;
      cv.messages[i] = e.what();
    }
    if (!cv.converged[i]) cv.U_total[i] = cv.U_nres[i] = cv.U_res[i] = cv.U_error[i] = std::nan("");
  };

  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (nw == 1) {
    for (size_t i = 0; i < n; ++i) point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (size_t i = next++; i < n; i = next++) point(i);
      });
    for (auto& t : pool) t.join();
  }
  cv.F = radial_force(cv.r, cv.U_total);
  return cv;
}

std::vector<double> radial_force(const std::vector<double>& r, const std::vector<double>& U) {
  if (r.size() != U.size()) throw DomainError("grid and values differ in length");
  const size_t n = r.size();
  std::vector<double> F(n, 0.0);
  if (n < 2) return F;
  const size_t m = std::min<size_t>(5, n);
  for (size_t i = 0; i < n; ++i) {
    const size_t lo = std::min(i >= m / 2 ? i - m / 2 : 0, n - m);
    // Fornberg weights for the first derivative at r[i] on r[lo .. lo+m-1]
    double w[5][2] = {};
    double c1 = 1.0, c4 = r[lo] - r[i];
    w[0][0] = 1.0;
    for (size_t j = 1; j < m; ++j) {
      double c2 = 1.0;
      const double c5 = c4;
      c4 = r[lo + j] - r[i];
      for (size_t k = 0; k < j; ++k) {
        const double c3 = r[lo + j] - r[lo + k];
        c2 *= c3;
        if (k == j - 1) {
          w[j][1] = c1 * (w[j - 1][0] - c5 * w[j - 1][1]) / c2;
          w[j][0] = -c1 * c5 * w[j - 1][0] / c2;
        }
        w[k][1] = (c4 * w[k][1] - w[k][0]) / c3;
        w[k][0] = c4 * w[k][0] / c3;
      }
      c1 = c2;
    }
    double d = 0.0;
    for (size_t j = 0; j < m; ++j) d += w[j][1] * U[lo + j];
    F[i] = -d;
  }
  return F;
}

std::vector<double> frequency_shift(const PotentialCurve& upper, const PotentialCurve& lower) {
  if (upper.r != lower.r) throw DomainError("frequency shift needs curves on the same grid");
  std::vector<double> out(upper.r.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = (upper.U_total[i] - lower.U_total[i]) / hbar;
  return out;
}

double recoil_energy_nK(double wavelength_m, double mass_kg) {
  if (!(wavelength_m > 0.0) || !(mass_kg > 0.0)) throw DomainError("wavelength and mass must be positive");
  const double k = 2.0 * pi / wavelength_m;
  return hbar * hbar * k * k / (2.0 * mass_kg * constants::k_boltzmann) * 1e9;
}

double line_decay_rate(const TransitionLine& line, const AtomCatalog& catalog) {
  const FineLevel& up = catalog.level(line.upper);
  const double omega = up.omega() - catalog.level(line.lower).omega();
  const double d = dipole_si(line);
  return omega * omega * omega * d * d / (3.0 * pi * eps0 * hbar * c * c * c * up.J.multiplicity());
}

double spontaneous_force_max(const TransitionLine& line, const AtomCatalog& catalog) {
  const double omega = catalog.level(line.upper).omega() - catalog.level(line.lower).omega();
  return hbar * (omega / c) * line_decay_rate(line, catalog) / 2.0;
}

}  // namespace cpnf
