#include "cpnf/quadrature.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <string>
#include <type_traits>

#include "cpnf/error.hpp"

namespace cpnf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Integrand value with an auxiliary channel carried through the same rule.
template <class V>
complex primary(const V& v) {
  if constexpr (std::is_same_v<V, complex>)
    return v;
  else
    return v.value;
}

template <class V>
double aux_abs(const V& v) {
  if constexpr (std::is_same_v<V, complex>)
    return 0.0;
  else
    return std::abs(v.aux);
}

template <class V>
struct Panel {
  double a, b;
  V value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// Kronrod abscissae x[0] = 0 < x[1] < ... < x[7]; Gauss nodes are the even
// indices.
struct Gk15 {
  std::array<double, 8> x{}, wk{}, wg{};
  Gk15() {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& xa = gauss_kronrod<double, 15>::abscissa();
    const auto& wa = gauss_kronrod<double, 15>::weights();
    const auto& wgs = gauss<double, 7>::weights();
    for (int i = 0; i < 8; ++i) {
      x[i] = xa[i];
      wk[i] = wa[i];
      wg[i] = (i % 2 == 0) ? wgs[i / 2] : 0.0;
    }
  }
};

const Gk15& rule() {
  static const Gk15 r;
  return r;
}

template <class V, class F>
Panel<V> evaluate(const F& f, double a, double b, long& evals) {
  const Gk15& g = rule();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const V f0 = f(c);
  V k = f0 * g.wk[0];
  complex gs = g.wg[0] * primary(f0);
  for (int i = 1; i < 8; ++i) {
    const V fl = f(c - h * g.x[i]), fr = f(c + h * g.x[i]);
    k = k + (fl + fr) * g.wk[i];
    gs += g.wg[i] * (primary(fl) + primary(fr));
  }
  evals += 15;
  return {a, b, k * h, std::abs((primary(k) - gs) * h)};
}

bool finite(complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

namespace {

template <class V, class F>
QuadratureResult adaptive(const F& f, const std::vector<double>& edges, const QuadratureOptions& opt) {
  if (edges.size() < 2) throw DomainError("integration needs at least two edges");
  QuadratureResult out;
  std::priority_queue<Panel<V>> queue;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i + 1] >= edges[i])) throw DomainError("integration edges must be sorted");
    if (edges[i + 1] > edges[i]) queue.push(evaluate<V>(f, edges[i], edges[i + 1], out.evaluations));
  }
  if (queue.empty()) return out;
  int panels = static_cast<int>(queue.size());
  complex running = 0.0;
  double running_err = 0.0;
  {
    auto copy = queue;
    while (!copy.empty()) running += primary(copy.top().value), running_err += copy.top().error, copy.pop();
  }
  for (;;) {
    if (!finite(running)) throw DomainError("integrand is not finite");
    if (running_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(running))) break;
    const Panel<V> worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (panels >= opt.max_panels || !(mid > worst.a && mid < worst.b))
      throw ConvergenceError("adaptive quadrature hit its panel limit (estimate " + std::to_string(running.real()) +
                                 ", error " + std::to_string(running_err) + ")",
                             running.real());
    queue.pop();
    const Panel<V> l = evaluate<V>(f, worst.a, mid, out.evaluations);
    const Panel<V> r = evaluate<V>(f, mid, worst.b, out.evaluations);
    queue.push(l);
    queue.push(r);
    running += primary(l.value) + primary(r.value) - primary(worst.value);
    running_err += l.error + r.error - worst.error;
    ++panels;
  }
  // final sum in left-to-right order
  std::vector<Panel<V>> all;
  while (!queue.empty()) all.push_back(queue.top()), queue.pop();
  std::sort(all.begin(), all.end(), [](const Panel<V>& p, const Panel<V>& q) { return p.a < q.a; });
  for (const auto& p : all) out.value += primary(p.value), out.abs_error += p.error, out.aux += aux_abs(p.value);
  return out;
}

}  // namespace

QuadratureResult integrate_adaptive(const RealIntegrand& f, const std::vector<double>& edges,
                                    const QuadratureOptions& opt) {
  return adaptive<complex>(f, edges, opt);
}

QuadratureResult integrate_adaptive(const RealIntegrand& f, double a, double b, const QuadratureOptions& opt) {
  return integrate_adaptive(f, std::vector<double>{a, b}, opt);
}

namespace {

template <class V, class F>
QuadratureResult semi_infinite(const F& f, double u0, const QuadratureOptions& opt,
                               const std::vector<double>& breakpoints) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw DomainError("semi-infinite map needs a positive scale");
  auto g = [&f, u0](double t) -> V {
    const double s = 1.0 - t;
    return f(u0 * t / s) * (u0 / (s * s));
  };
  std::vector<double> edges{0.0};
  // initial panels one decade wide over [1e-3, 1e3] u0
  std::vector<double> bp = breakpoints;
  for (int d = -3; d <= 3; ++d) bp.push_back(u0 * std::pow(10.0, d));
  std::sort(bp.begin(), bp.end());
  for (double u : bp)
    if (u > 0.0 && std::isfinite(u) && u / (u + u0) > edges.back()) edges.push_back(u / (u + u0));
  edges.push_back(1.0);
  return adaptive<V>(g, edges, opt);
}

}  // namespace

QuadratureResult integrate_semi_infinite(const RealIntegrand& f, double u0, const QuadratureOptions& opt,
                                         const std::vector<double>& breakpoints) {
  return semi_infinite<complex>(f, u0, opt, breakpoints);
}

QuadratureResult integrate_semi_infinite(const TrackedRealIntegrand& f, double u0, const QuadratureOptions& opt,
                                         const std::vector<double>& breakpoints) {
  return semi_infinite<Tracked>(f, u0, opt, breakpoints);
}

namespace {

// Real end of the branch chord: halfway between k2 and the first detour, at
// most sqrt(2) k2.
double chord_end(const PoleAvoidancePlan& plan, double k2) {
  double beta_e = std::sqrt(2.0) * k2;
  for (size_t i = 0; i < plan.poles.size(); ++i)
    if (plan.radii[i] > 0.0) {
      beta_e = std::min(beta_e, k2 + 0.5 * (plan.poles[i].beta - plan.radii[i] - k2));
      break;
    }
  return beta_e;
}

}  // namespace

void PoleAvoidancePlan::validate(double k2, double k1) const {
  if (radii.size() != poles.size()) throw ContourError("pole plan: one radius per pole required");
  bool detoured = false;
  for (size_t i = 0; i < poles.size(); ++i) {
    const double b = poles[i].beta, r = radii[i];
    const std::string where = " (pole at beta = " + std::to_string(b) + ")";
    if (i > 0 && !(poles[i - 1].beta < b || poles[i - 1].b < poles[i].b))
      throw ContourError("pole plan: poles must be sorted and distinct");
    if (r == 0.0) {
      if (!bypass_branch_point || half_plane != HalfPlane::lower)
        throw ContourError("pole plan: a pole without detour needs the branch chord and the lower half plane" + where);
      if (detoured || !(b < chord_end(*this, k2)))
        throw ContourError("pole plan: pole without detour lies beyond the branch chord" + where);
      continue;
    }
    detoured = true;
    if (!(r > 0.0)) throw ContourError("pole plan: detour radius must be positive" + where);
    if (k1 > k2 && r < 1e-6 * (k1 - k2)) throw ContourError("pole plan: detour radius too small to resolve" + where);
    if (b - r <= k2) throw ContourError("pole plan: detour reaches the branch point" + where);
    if (k1 > k2 && r >= 0.1 * (k1 - k2)) throw ContourError("pole plan: detour radius not below (k1 - k2)/10" + where);
    if (i > 0 && 2.0 * r >= b - poles[i - 1].beta) throw ContourError("pole plan: detours overlap" + where);
    if (i + 1 < poles.size() && 2.0 * r >= poles[i + 1].beta - b)
      throw ContourError("pole plan: detours overlap" + where);
  }
}

PoleAvoidancePlan make_pole_plan(std::vector<GuidedPole> poles, double k2, double k1, HalfPlane half_plane,
                                 double radius_override) {
  std::sort(poles.begin(), poles.end(), [](const GuidedPole& a, const GuidedPole& b) { return a.beta < b.beta; });
  PoleAvoidancePlan plan;
  plan.half_plane = half_plane;
  const double base = radius_override > 0.0 ? radius_override : 0.05 * (k1 - k2);
  const bool can_absorb = plan.bypass_branch_point && half_plane == HalfPlane::lower;
  for (size_t i = 0; i < poles.size(); ++i) {
    const double b = poles[i].beta;
    if (can_absorb && b - k2 < 1e-3 * (k1 - k2) && (i == 0 || plan.radii.back() == 0.0)) {
      plan.radii.push_back(0.0);
      continue;
    }
    double r = std::min(base, 0.099 * (k1 - k2));
    r = std::min(r, 0.5 * (b - k2));
    r = std::min(r, 0.5 * std::abs(k1 - b));
    if (i > 0) r = std::min(r, 0.499 * (b - poles[i - 1].beta));
    if (i + 1 < poles.size()) r = std::min(r, 0.499 * (poles[i + 1].beta - b));
    plan.radii.push_back(r);
  }
  plan.poles = std::move(poles);
  plan.validate(k2, k1);
  return plan;
}

namespace {

template <class V, class F>
QuadratureResult detours(const F& f, const PoleAvoidancePlan& plan, double k2, const QuadratureOptions& opt) {
  if (!(k2 > 0.0)) throw DomainError("branch point k2 must be positive");
  if (plan.radii.size() != plan.poles.size()) throw ContourError("pole plan: one radius per pole required");
  QuadratureResult out;
  auto add = [&out](const QuadratureResult& r) {
    out.value += r.value;
    out.abs_error += r.abs_error;
    out.evaluations += r.evaluations;
    out.aux += r.aux;
  };
  auto integrate = [&opt](const auto& g, double lo, double hi) { return adaptive<V>(g, {lo, hi}, opt); };

  // radiation side, beta = k2 sin t
  const double t_end = plan.bypass_branch_point ? kPi / 6 : kPi / 2;
  add(integrate([&](double t) -> V { return f(k2 * std::sin(t)) * (k2 * std::cos(t)); }, 0.0, t_end));

  double s_from = 0.0;
  if (plan.bypass_branch_point) {
    const double beta_e = chord_end(plan, k2);
    const complex w_s(0.0, -k2 * std::cos(t_end));
    const complex w_e(std::sqrt((beta_e - k2) * (beta_e + k2)), 0.0);
    const complex dw = w_e - w_s;
    auto chord = [&](double tau) -> V {
      const complex w = w_s + tau * dw;
      const complex beta = std::sqrt(w * w + k2 * k2);
      return f(beta) * (w / beta * dw);
    };
    add(integrate(chord, 0.0, 1.0));
    s_from = std::acosh(beta_e / k2);
  }

  auto evanescent = [&](double s) -> V { return f(k2 * std::cosh(s)) * (k2 * std::sinh(s)); };
  for (size_t i = 0; i < plan.poles.size(); ++i) {
    const double b = plan.poles[i].beta, r = plan.radii[i];
    if (r == 0.0) {
      if (!plan.bypass_branch_point || plan.half_plane != HalfPlane::lower)
        throw ContourError("pole at beta = " + std::to_string(b) + " has no detour");
      continue;
    }
    if (b - r <= k2) throw ContourError("detour around beta = " + std::to_string(b) + " reaches the branch point");
    const double s_to = std::acosh((b - r) / k2);
    if (s_to < s_from) throw ContourError("detours overlap");
    if (s_to > s_from) add(integrate(evanescent, s_from, s_to));
    // semicircle from b - r to b + r
    const double sign = plan.half_plane == HalfPlane::lower ? -1.0 : 1.0;
    auto arc = [&, b, r, sign](double th) -> V {
      const complex e = std::polar(1.0, sign * th);
      return f(b + r * e) * (complex(0.0, sign * r) * e);
    };
    const QuadratureResult d = integrate(arc, 0.0, kPi);
    // parameter runs from b + r to b - r; flip orientation
    add({-d.value, d.abs_error, d.evaluations, d.aux});
    s_from = std::acosh((b + r) / k2);
  }

  // tail in panels of s
  const double width = 0.5;
  int quiet = 0;
  for (int panel = 0; quiet < 3; ++panel) {
    if (panel > 400) throw ConvergenceError("beta tail did not decay", out.value.real());
    const QuadratureResult p = integrate(evanescent, s_from, s_from + width);
    add(p);
    s_from += width;
    quiet = (std::abs(p.value) <= opt.rel_tol * std::abs(out.value)) ? quiet + 1 : 0;
  }
  return out;
}

}  // namespace

QuadratureResult integrate_beta_with_detours(const ComplexIntegrand& f, const PoleAvoidancePlan& plan, double k2,
                                             const QuadratureOptions& opt) {
  return detours<complex>(f, plan, k2, opt);
}

QuadratureResult integrate_beta_with_detours(const TrackedComplexIntegrand& f, const PoleAvoidancePlan& plan,
                                             double k2, const QuadratureOptions& opt) {
  return detours<Tracked>(f, plan, k2, opt);
}

}  // namespace cpnf
