#include "cpnf/run.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "cpnf/dielectric.hpp"
#include "cpnf/error.hpp"

namespace cpnf {

namespace {

using nlohmann::json;

std::string fmt(const char* f, double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config field '" + key + "': expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config field '" + key + "': expected an integer");
  return v.get<int>();
}

std::string string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config field '" + key + "': expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("config field '" + key + "': expected true or false");
  return v.get<bool>();
}

// a scalar or an array of scalars
template <class F>
auto list(const json& v, const std::string& key, F one) {
  std::vector<decltype(one(v, key))> out;
  if (v.is_array()) {
    for (size_t i = 0; i < v.size(); ++i) out.push_back(one(v[i], key + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(one(v, key));
  }
  return out;
}

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> known) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw ConfigError("config field '" + prefix + k + "': unknown key");
  }
}

PoleStrategy parse_strategy(const std::string& s) {
  if (s == "detour") return PoleStrategy::detour;
  if (s == "lossy-epsilon") return PoleStrategy::lossy_epsilon;
  throw ConfigError("config field 'pole_strategy': expected 'detour' or 'lossy-epsilon', got '" + s + "'");
}

const char* strategy_name(PoleStrategy p) { return p == PoleStrategy::detour ? "detour" : "lossy-epsilon"; }

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string radius_label(double radius_nm) { return fmt("%g", radius_nm); }

std::string open_and_write(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file " + path);
  f << content;
  return path;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text, RunConfig cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1;
    for (size_t i = 0; i < std::min<size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw ConfigError("config line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j, "",
                 {"radius_nm", "state", "grid", "tolerances", "pole_strategy", "detour_radius", "switch_wavelength_um",
                  "catalog", "output", "format", "workers", "strict"});
  if (j.contains("radius_nm")) cfg.radii_nm = list(j["radius_nm"], "radius_nm", number);
  if (j.contains("state")) cfg.states = list(j["state"], "state", string);
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) throw ConfigError("config field 'grid': expected an object");
    reject_unknown(g, "grid.", {"min_nm", "max_nm", "count", "spacing"});
    if (g.contains("min_nm")) cfg.grid.min_nm = number(g["min_nm"], "grid.min_nm");
    if (g.contains("max_nm")) cfg.grid.max_nm = number(g["max_nm"], "grid.max_nm");
    if (g.contains("count")) cfg.grid.count = integer(g["count"], "grid.count");
    if (g.contains("spacing")) {
      const std::string s = string(g["spacing"], "grid.spacing");
      if (s != "linear" && s != "log") throw ConfigError("config field 'grid.spacing': expected 'linear' or 'log'");
      cfg.grid.log = s == "log";
    }
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("config field 'tolerances': expected an object");
    reject_unknown(t, "tolerances.", {"u", "beta", "n"});
    if (t.contains("u")) cfg.u_rel_tol = number(t["u"], "tolerances.u");
    if (t.contains("beta")) cfg.beta_rel_tol = number(t["beta"], "tolerances.beta");
    if (t.contains("n")) cfg.n_rel_tol = number(t["n"], "tolerances.n");
  }
  if (j.contains("pole_strategy")) cfg.pole_strategy = parse_strategy(string(j["pole_strategy"], "pole_strategy"));
  if (j.contains("detour_radius")) cfg.detour_radius = number(j["detour_radius"], "detour_radius");
  if (j.contains("switch_wavelength_um"))
    cfg.switch_wavelength_um = number(j["switch_wavelength_um"], "switch_wavelength_um");
  if (j.contains("catalog")) cfg.catalog_path = string(j["catalog"], "catalog");
  if (j.contains("output")) cfg.output_dir = string(j["output"], "output");
  if (j.contains("format")) {
    const std::string f = string(j["format"], "format");
    if (f != "csv" && f != "json") throw ConfigError("config field 'format': expected 'csv' or 'json'");
    cfg.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
  }
  if (j.contains("workers")) cfg.workers = integer(j["workers"], "workers");
  if (j.contains("strict")) cfg.strict = boolean(j["strict"], "strict");
  return cfg;
}

RunConfig config_from_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return config_from_json_text(ss.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void validate_config(const RunConfig& cfg) {
  if (cfg.radii_nm.empty()) throw ConfigError("at least one fiber radius is required");
  for (double a : cfg.radii_nm)
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("fiber radius must be positive");
  if (cfg.states.empty()) throw ConfigError("at least one state is required");
  if (!(cfg.grid.min_nm > 0.0)) throw ConfigError("grid minimum distance must be > 0");
  if (cfg.grid.count < 2) throw ConfigError("grid needs at least 2 points");
  if (!(cfg.grid.max_nm > cfg.grid.min_nm) || !std::isfinite(cfg.grid.max_nm))
    throw ConfigError("grid maximum must exceed the minimum");
  for (auto [v, name] : {std::pair{cfg.u_rel_tol, "u"}, {cfg.beta_rel_tol, "beta"}, {cfg.n_rel_tol, "n"}})
    if (!(v > 0.0 && v < 1.0)) throw ConfigError(std::string(name) + " tolerance must lie in (0, 1)");
  if (!(cfg.detour_radius >= 0.0)) throw ConfigError("detour radius must be >= 0");
  if (!(cfg.switch_wavelength_um > 0.0)) throw ConfigError("permittivity switch wavelength must be positive");
  if (cfg.workers < 1) throw ConfigError("worker count must be >= 1");
}

std::string canonical_config(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["radius_nm"] = cfg.radii_nm;
  j["state"] = cfg.states;
  j["grid"] = {{"min_nm", cfg.grid.min_nm},
               {"max_nm", cfg.grid.max_nm},
               {"count", cfg.grid.count},
               {"spacing", cfg.grid.log ? "log" : "linear"}};
  j["tolerances"] = {{"u", cfg.u_rel_tol}, {"beta", cfg.beta_rel_tol}, {"n", cfg.n_rel_tol}};
  j["pole_strategy"] = strategy_name(cfg.pole_strategy);
  j["detour_radius"] = cfg.detour_radius;
  j["switch_wavelength_um"] = cfg.switch_wavelength_um;
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_config(cfg))));
  return buf;
}

std::vector<double> radial_grid(const GridSpec& g, double radius_m) {
  std::vector<double> r(g.count);
  for (int i = 0; i < g.count; ++i) {
    const double t = double(i) / (g.count - 1);
    const double d = g.log ? g.min_nm * std::pow(g.max_nm / g.min_nm, t) : g.min_nm + (g.max_nm - g.min_nm) * t;
    r[i] = radius_m + (i == g.count - 1 ? g.max_nm : d) * 1e-9;
  }
  return r;
}

FiberGeometry geometry_for(const RunConfig& cfg, double radius_nm) {
  FiberGeometry g;
  g.radius = radius_nm * 1e-9;
  g.eps_inner = default_silica(cfg.switch_wavelength_um * 1e-6);
  g.eps_outer = PermittivityModel::constant(1.0);
  return g;
}

PotentialOptions options_for(const RunConfig& cfg) {
  PotentialOptions o;
  o.u_rel_tol = cfg.u_rel_tol;
  o.trace.beta_rel_tol = cfg.beta_rel_tol;
  o.trace.n_rel_tol = cfg.n_rel_tol;
  o.pole_strategy = cfg.pole_strategy;
  o.detour_radius_override = cfg.detour_radius;
  return o;
}

AtomCatalog catalog_for(const RunConfig& cfg) {
  return cfg.catalog_path.empty() ? AtomCatalog::default_rb() : AtomCatalog::load(cfg.catalog_path);
}

OutputMeta output_meta(const RunConfig& cfg, const AtomCatalog& catalog) {
  return {config_hash(cfg), catalog.version(), CPNF_VERSION};
}

void write_curve_csv(std::ostream& out, const PotentialCurve& cv, const OutputMeta& meta) {
  const double a_nm = cv.radius * 1e9;
  out << "# cpnf " << meta.code_version << "\n"
      << "# config_hash " << meta.config_hash << "\n"
      << "# catalog " << meta.catalog_version << "\n"
      << "# state " << cv.state << "\n"
      << "# radius_nm " << fmt("%.6f", a_nm) << "\n"
      << "# eps_inner " << cv.eps_inner << "\n"
      << "# eps_outer " << cv.eps_outer << "\n"
      << "r_nm,r_minus_a_nm,U_total_uK,U_nres_uK,U_res_uK,F_zN,converged\n";
  for (size_t i = 0; i < cv.r.size(); ++i) {
    const double r_nm = cv.r[i] * 1e9;
    out << fmt("%.6f", r_nm) << ',' << fmt("%.6f", r_nm - a_nm) << ',' << fmt("%.9e", to_uK(cv.U_total[i])) << ','
        << fmt("%.9e", to_uK(cv.U_nres[i])) << ',' << fmt("%.9e", to_uK(cv.U_res[i])) << ','
        << fmt("%.9e", to_zN(cv.F[i])) << ',' << (cv.converged[i] ? 1 : 0) << '\n';
  }
}

void write_curve_json(std::ostream& out, const PotentialCurve& cv, const OutputMeta& meta, const RunConfig& cfg) {
  json j;
  j["schema"] = "cpnf-curve/1";
  j["code_version"] = meta.code_version;
  j["config_hash"] = meta.config_hash;
  j["catalog_version"] = meta.catalog_version;
  j["state"] = cv.state;
  j["geometry"] = {{"radius_nm", cv.radius * 1e9}, {"eps_inner", cv.eps_inner}, {"eps_outer", cv.eps_outer}};
  j["tolerances"] = {{"u", cfg.u_rel_tol}, {"beta", cfg.beta_rel_tol}, {"n", cfg.n_rel_tol}};
  j["pole_strategy"] = strategy_name(cfg.pole_strategy);
  json cols = {{"r_nm", json::array()},    {"r_minus_a_nm", json::array()}, {"U_total_uK", json::array()},
               {"U_nres_uK", json::array()}, {"U_res_uK", json::array()},     {"F_zN", json::array()},
               {"converged", json::array()}};
  // NaN has no JSON form; failed points carry null
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  for (size_t i = 0; i < cv.r.size(); ++i) {
    cols["r_nm"].push_back(cv.r[i] * 1e9);
    cols["r_minus_a_nm"].push_back((cv.r[i] - cv.radius) * 1e9);
    cols["U_total_uK"].push_back(num(to_uK(cv.U_total[i])));
    cols["U_nres_uK"].push_back(num(to_uK(cv.U_nres[i])));
    cols["U_res_uK"].push_back(num(to_uK(cv.U_res[i])));
    cols["F_zN"].push_back(num(to_zN(cv.F[i])));
    cols["converged"].push_back(bool(cv.converged[i]));
  }
  j["columns"] = cols;
  json failures = json::array();
  for (size_t i = 0; i < cv.r.size(); ++i)
    if (!cv.converged[i]) failures.push_back({{"index", i}, {"message", cv.messages[i]}});
  j["failures"] = failures;
  out << j.dump(1) << '\n';
}

std::string gnuplot_script(const std::string& data_file, const PotentialCurve& cv) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set xlabel 'r - a (nm)'\n"
    << "set ylabel 'U (uK)'\n"
    << "set title '" << cv.state << ", a = " << radius_label(cv.radius * 1e9) << " nm'\n"
    << "set grid\n"
    << "plot '" << data_file << "' using 2:3 with lines lw 2, '' using 2:4 with lines dt 2, '' using 2:5 with lines dt 3\n";
  return s.str();
}

std::string curve_stem(const std::string& state, double radius_nm) {
  std::string s = state;
  for (char& ch : s)
    if (ch == '/') ch = '-';
  return "U_" + s + "_a" + radius_label(radius_nm) + "nm";
}

RunSummary run_potential(const RunConfig& cfg, const AtomCatalog& catalog, std::ostream& log) {
  validate_config(cfg);
  for (const auto& s : cfg.states) catalog.level(s);  // unknown states fail before any work
  std::filesystem::create_directories(cfg.output_dir);
  const OutputMeta meta = output_meta(cfg, catalog);
  const PotentialOptions opt = options_for(cfg);
  RunSummary sum;
  for (double a : cfg.radii_nm) {
    const FiberGeometry geom = geometry_for(cfg, a);
    const auto grid = radial_grid(cfg.grid, geom.radius);
    for (const auto& state : cfg.states) {
      const PotentialCurve cv = potential_curve(state, catalog, geom, grid, opt, cfg.workers);
      int failed = 0;
      for (bool ok : cv.converged) failed += !ok;
      sum.failed_points += failed;
      const std::string stem = (std::filesystem::path(cfg.output_dir) / curve_stem(state, a)).string();
      std::ostringstream body;
      if (cfg.format == OutputFormat::csv) {
        write_curve_csv(body, cv, meta);
        sum.files.push_back(open_and_write(stem + ".csv", body.str()));
        const std::string data = std::filesystem::path(stem + ".csv").filename().string();
        sum.files.push_back(open_and_write(stem + ".gp", gnuplot_script(data, cv)));
      } else {
        write_curve_json(body, cv, meta, cfg);
        sum.files.push_back(open_and_write(stem + ".json", body.str()));
      }
      log << state << " a=" << radius_label(a) << " nm: " << cv.r.size() << " points, " << failed
          << " not converged -> " << stem << (cfg.format == OutputFormat::csv ? ".csv" : ".json") << '\n';
    }
  }
  return sum;
}

RunSummary run_shift(const RunConfig& cfg, const AtomCatalog& catalog, const std::string& upper,
                     const std::string& lower, std::ostream& log) {
  validate_config(cfg);
  catalog.level(upper);
  catalog.level(lower);
  std::filesystem::create_directories(cfg.output_dir);
  const OutputMeta meta = output_meta(cfg, catalog);
  const PotentialOptions opt = options_for(cfg);
  RunSummary sum;
  for (double a : cfg.radii_nm) {
    const FiberGeometry geom = geometry_for(cfg, a);
    const auto grid = radial_grid(cfg.grid, geom.radius);
    const PotentialCurve up = potential_curve(upper, catalog, geom, grid, opt, cfg.workers);
    const PotentialCurve low = potential_curve(lower, catalog, geom, grid, opt, cfg.workers);
    const auto shift = frequency_shift(up, low);
    std::string u = upper, l = lower;
    for (std::string* s : {&u, &l})
      for (char& ch : *s)
        if (ch == '/') ch = '-';
    const std::string path =
        (std::filesystem::path(cfg.output_dir) / ("shift_" + u + "_" + l + "_a" + radius_label(a) + "nm.csv")).string();
    std::ostringstream out;
    out << "# cpnf " << meta.code_version << "\n"
        << "# config_hash " << meta.config_hash << "\n"
        << "# catalog " << meta.catalog_version << "\n"
        << "# transition " << upper << " - " << lower << "\n"
        << "# radius_nm " << fmt("%.6f", a) << "\n"
        << "r_nm,r_minus_a_nm,shift_rad_s,shift_MHz,converged\n";
    int failed = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
      const bool ok = up.converged[i] && low.converged[i];
      failed += !ok;
      const double r_nm = grid[i] * 1e9;
      out << fmt("%.6f", r_nm) << ',' << fmt("%.6f", r_nm - a) << ',' << fmt("%.9e", shift[i]) << ','
          << fmt("%.9e", to_MHz(shift[i])) << ',' << (ok ? 1 : 0) << '\n';
    }
    sum.failed_points += failed;
    sum.files.push_back(open_and_write(path, out.str()));
    log << upper << " - " << lower << " a=" << radius_label(a) << " nm: " << failed << " not converged -> " << path
        << '\n';
  }
  return sum;
}

}  // namespace cpnf
