#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>

#include "cpnf/dielectric.hpp"
#include "cpnf/error.hpp"
#include "cpnf/green.hpp"
#include "cpnf/run.hpp"

using namespace cpnf;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, not_converged = 3, data_error = 4 };

// Flags shared by potential and shift; applied on top of the config file.
struct CurveFlags {
  std::string config_file;
  std::vector<double> radii;
  std::vector<std::string> states;
  double rmin = 0, rmax = 0, u_tol = 0, beta_tol = 0, n_tol = 0, detour = 0, switch_um = 0;
  int points = 0, workers = 0;
  bool log_grid = false, strict = false;
  std::string strategy, catalog, output, format;
  std::vector<CLI::Option*> opts;

  void add(CLI::App* app, bool with_state) {
    app->add_option("--config", config_file, "JSON config file; flags override it")->check(CLI::ExistingFile);
    if (with_state) opts.push_back(app->add_option("--state", states, "level label(s), e.g. 5P3/2"));
    opts.push_back(app->add_option("--radius-nm", radii, "fiber radius (repeatable)"));
    opts.push_back(app->add_option("--rmin-nm", rmin, "smallest distance from the surface"));
    opts.push_back(app->add_option("--rmax-nm", rmax, "largest distance from the surface"));
    opts.push_back(app->add_option("--points", points, "grid points"));
    opts.push_back(app->add_flag("--log-grid", log_grid, "logarithmic grid spacing"));
    opts.push_back(app->add_option("--u-tol", u_tol, "relative tolerance of the imaginary-frequency integral"));
    opts.push_back(app->add_option("--beta-tol", beta_tol, "relative tolerance of the beta integral"));
    opts.push_back(app->add_option("--n-tol", n_tol, "relative cut of the azimuthal sum"));
    opts.push_back(app->add_option("--pole-strategy", strategy, "detour or lossy-epsilon")
                       ->check(CLI::IsMember({"detour", "lossy-epsilon"})));
    opts.push_back(app->add_option("--detour-radius", detour, "detour radius in rad/m (0: default)"));
    opts.push_back(app->add_option("--switch-um", switch_um, "Sellmeier/Dawson switch wavelength"));
    opts.push_back(app->add_option("--catalog", catalog, "atom catalog JSON (default: shipped)"));
    opts.push_back(app->add_option("-o,--output", output, "output directory"));
    opts.push_back(app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"})));
    opts.push_back(app->add_option("-j,--workers", workers, "worker threads"));
    opts.push_back(app->add_flag("--strict", strict, "exit 3 if any point fails to converge"));
  }

  bool given(const char* name) const {
    for (auto* o : opts)
      if (o->check_lname(name)) return o->count() > 0;
    return false;
  }

  RunConfig resolve(const std::string& subcommand) const {
    RunConfig c = config_file.empty() ? RunConfig{} : config_from_file(config_file);
    c.subcommand = subcommand;
    if (given("state")) c.states = states;
    if (given("radius-nm")) c.radii_nm = radii;
    if (given("rmin-nm")) c.grid.min_nm = rmin;
    if (given("rmax-nm")) c.grid.max_nm = rmax;
    if (given("points")) c.grid.count = points;
    if (given("log-grid")) c.grid.log = log_grid;
    if (given("u-tol")) c.u_rel_tol = u_tol;
    if (given("beta-tol")) c.beta_rel_tol = beta_tol;
    if (given("n-tol")) c.n_rel_tol = n_tol;
    if (given("pole-strategy"))
      c.pole_strategy = strategy == "detour" ? PoleStrategy::detour : PoleStrategy::lossy_epsilon;
    if (given("detour-radius")) c.detour_radius = detour;
    if (given("switch-um")) c.switch_wavelength_um = switch_um;
    if (given("catalog")) c.catalog_path = catalog;
    if (given("output")) c.output_dir = output;
    if (given("format")) c.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (given("workers")) c.workers = workers;
    if (given("strict")) c.strict = strict;
    validate_config(c);
    return c;
  }
};

int finish(const RunSummary& s, const RunConfig& cfg) {
  if (s.failed_points > 0) {
    std::cerr << s.failed_points << " point(s) did not converge\n";
    if (cfg.strict) return not_converged;
  }
  return ok;
}

void print_permittivity(const PermittivityModel& m, const std::vector<double>& wavelengths_um) {
  std::printf("# %s\n", m.describe().c_str());
  std::printf("wavelength_um,eps_re,eps_im,abs_eps,eps_iu,in_window\n");
  for (double l : wavelengths_um) {
    const double w = omega_from_wavelength(l * 1e-6);
    const PermittivityValue v = m.eps_real_freq(w);
    std::printf("%.6f,%.10e,%.10e,%.10e,%.10e,%d\n", l, v.eps.real(), v.eps.imag(), std::abs(v.eps),
                m.eps_imag_freq(w), v.in_window ? 1 : 0);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir-Polder potentials of an alkali atom outside an optical nanofiber"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("cpnf ") + CPNF_VERSION);

  auto* pot = app.add_subcommand("potential", "potential curves U(r) for states and fiber radii");
  CurveFlags pf;
  pf.add(pot, true);

  auto* shift = app.add_subcommand("shift", "transition frequency shift (U_upper - U_lower)/hbar");
  CurveFlags sf;
  sf.add(shift, false);
  std::string upper = "5P3/2", lower = "5S1/2";
  shift->add_option("--upper", upper, "upper level")->capture_default_str();
  shift->add_option("--lower", lower, "lower level")->capture_default_str();

  auto* perm = app.add_subcommand("permittivity", "silica permittivity table");
  std::vector<double> wl_list;
  double wl_from = 0.5, wl_to = 20.0, switch_um = 7.0;
  int wl_points = 40;
  std::string model = "auto";
  perm->add_option("--wavelength-um", wl_list, "explicit wavelengths");
  perm->add_option("--from-um", wl_from, "range start")->capture_default_str();
  perm->add_option("--to-um", wl_to, "range end")->capture_default_str();
  perm->add_option("--points", wl_points, "range points")->capture_default_str();
  perm->add_option("--model", model, "auto, sellmeier or dawson")
      ->check(CLI::IsMember({"auto", "sellmeier", "dawson"}))
      ->capture_default_str();
  perm->add_option("--switch-um", switch_um, "switch wavelength of the auto model")->capture_default_str();

  auto* gt = app.add_subcommand("green-trace", "scattering Green tensor trace at one point");
  double gt_radius = 200.0, gt_dist = 100.0, gt_wl = 780.0, gt_u = 0.0;
  gt->add_option("--radius-nm", gt_radius, "fiber radius")->capture_default_str();
  gt->add_option("--distance-nm", gt_dist, "distance from the surface")->capture_default_str();
  auto* wl_opt = gt->add_option("--wavelength-nm", gt_wl, "real frequency given as a vacuum wavelength");
  auto* u_opt = gt->add_option("--imag-u", gt_u, "imaginary frequency u in rad/s");
  wl_opt->excludes(u_opt);

  auto* val = app.add_subcommand("validate", "run the property suites and print a JSON report");
  std::string val_catalog;
  int val_points = 20;
  val->add_option("--catalog", val_catalog, "catalog to check instead of the shipped one");
  val->add_option("--pole-points", val_points, "points of the pole-strategy cross-check")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return config_error;
  }

  try {
    if (*pot) {
      const RunConfig cfg = pf.resolve("potential");
      const AtomCatalog cat = catalog_for(cfg);
      return finish(run_potential(cfg, cat, std::cerr), cfg);
    }
    if (*shift) {
      RunConfig cfg = sf.resolve("shift");
      cfg.states = {upper, lower};
      const AtomCatalog cat = catalog_for(cfg);
      return finish(run_shift(cfg, cat, upper, lower, std::cerr), cfg);
    }
    if (*perm) {
      if (wl_list.empty()) {
        if (!(wl_from > 0.0) || !(wl_to > wl_from) || wl_points < 2)
          throw ConfigError("wavelength range needs 0 < from < to and at least 2 points");
        for (int i = 0; i < wl_points; ++i) wl_list.push_back(wl_from + (wl_to - wl_from) * i / (wl_points - 1));
      }
      const PermittivityModel m =
          model == "auto"        ? default_silica(switch_um * 1e-6)
          : model == "sellmeier" ? PermittivityModel::sellmeier(load_sellmeier(data_dir() + "/silica_sellmeier.json"))
                                 : PermittivityModel::dawson(load_dawson(data_dir() + "/silica_dawson.json"));
      print_permittivity(m, wl_list);
      return ok;
    }
    if (*gt) {
      RunConfig cfg;
      const FiberGeometry geom = geometry_for(cfg, gt_radius);
      const double r = geom.radius + gt_dist * 1e-9;
      nlohmann::json j;
      j["radius_nm"] = gt_radius;
      j["distance_nm"] = gt_dist;
      if (u_opt->count() > 0) {
        const GreenTrace g = trace_sc_imag(geom, r, gt_u);
        j["imag_u"] = gt_u;
        j["trace"] = {g.value.real(), g.value.imag()};
        j["beta_error"] = g.beta_error_estimate;
        j["n_error"] = g.n_error_estimate;
        j["orders"] = g.n_terms_used;
      } else {
        const double w = omega_from_wavelength(gt_wl * 1e-9);
        const RealTrace g = resonant_trace(geom, r, w);
        j["wavelength_nm"] = gt_wl;
        j["trace"] = {g.trace.real(), g.trace.imag()};
        j["error_re"] = g.error;
      }
      std::cout << j.dump(2) << '\n';
      return ok;
    }
    if (*val) {
      ValidationOptions vo;
      vo.catalog_path = val_catalog;
      vo.pole_points = val_points;
      const auto groups = run_validation(vo);
      std::cout << validation_report_json(groups) << '\n';
      for (const auto& g : groups)
        if (!g.passed) return failure;
      return ok;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const LookupError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return data_error;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
  return ok;
}
