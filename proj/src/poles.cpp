#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <string>

#include "cpnf/constants.hpp"
#include "cpnf/error.hpp"
#include "cpnf/green.hpp"
#include "cpnf/quadrature.hpp"

namespace cpnf {

namespace {

// Scan points in the normalized propagation constant b in (0, 1); dense near
// both band edges where weakly guided roots and cut-offs sit.  A thin
// high-contrast fiber puts the HE11 root at b ~ 1e-14 and below.
std::vector<double> scan_grid() {
  std::vector<double> b;
  for (int e = -600; e < -24; ++e) b.push_back(std::pow(10.0, e / 2.0));
  for (int e = -120; e < -20; ++e) b.push_back(std::pow(10.0, e / 10.0));
  for (int i = 1; i < 800; ++i) b.push_back(i / 800.0);
  for (int e = -20; e >= -120; --e) b.push_back(1.0 - std::pow(10.0, e / 10.0));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  b.erase(std::remove_if(b.begin(), b.end(), [](double x) { return !(x > 0.0 && x < 1.0); }), b.end());
  return b;
}

}  // namespace

std::vector<GuidedPole> locate_guided_mode_poles(const CylinderAt& cyl, double omega, int max_order) {
  if (!(omega > 0.0)) throw DomainError("real frequency must be positive");
  if (cyl.eps_inner.imag() != 0.0 || cyl.eps_outer.imag() != 0.0) return {};
  const double e1 = cyl.eps_inner.real(), e2 = cyl.eps_outer.real();
  if (!(e1 > e2) || !(e2 > 0.0)) return {};
  const double k1s = e1 * omega * omega / (constants::c * constants::c);
  const double k2s = e2 * omega * omega / (constants::c * constants::c);
  auto beta_of = [&](double b) { return std::sqrt(k2s + b * (k1s - k2s)); };
  if (!(cyl.radius > 0.0)) throw DomainError("cylinder radius must be positive");
  static const std::vector<double> grid = scan_grid();

  std::vector<GuidedPole> found;
  for (int n = 0; n <= max_order; ++n) {
    auto f = [&](double b) { return guided_dispersion_normalized(cyl.radius, e1, e2, n, b, omega); };
    double b0 = grid.front(), f0 = f(b0);
    bool any = false;
    for (size_t i = 1; i < grid.size(); ++i) {
      const double b1 = grid[i], f1 = f(b1);
      if (!std::isfinite(f0) || !std::isfinite(f1))
        throw Error("dispersion scan: non-finite value for order " + std::to_string(n));
      if ((f0 < 0.0) != (f1 < 0.0)) {
        std::uintmax_t iters = 200;
        auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-15 * std::abs(lo); };
        const auto [lo, hi] = boost::math::tools::toms748_solve(f, b0, b1, f0, f1, tol, iters);
        if (iters >= 200) throw Error("dispersion root bracketing failed for order " + std::to_string(n));
        const double b = 0.5 * (lo + hi);
        found.push_back({beta_of(b), b, {n}});
        any = true;
      }
      b0 = b1;
      f0 = f1;
    }
    // higher orders have higher cut-offs; stop after the first order without
    // roots once past n = 1
    if (!any && n >= 1) break;
  }
  std::sort(found.begin(), found.end(), [](const GuidedPole& p, const GuidedPole& q) { return p.b < q.b; });
  // merge coincident roots of different orders
  std::vector<GuidedPole> out;
  for (auto& p : found) {
    if (!out.empty() && std::abs(p.b - out.back().b) <= 1e-12 * p.b)
      out.back().orders.insert(out.back().orders.end(), p.orders.begin(), p.orders.end());
    else
      out.push_back(std::move(p));
  }
  return out;
}

std::vector<GuidedPole> locate_guided_mode_poles(const FiberGeometry& geom, double omega, int max_order) {
  return locate_guided_mode_poles(at_real_freq(geom, omega), omega, max_order);
}

}  // namespace cpnf
