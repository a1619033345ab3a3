#pragma once

// Batch runs: configuration, radial grids, curve files and the validation
// suite behind the command-line front end.

#include <iosfwd>
#include <string>
#include <vector>

#include "cpnf/atomdata.hpp"
#include "cpnf/potential.hpp"

namespace cpnf {

struct GridSpec {
  double min_nm = 50.0;  // distance from the surface
  double max_nm = 1200.0;
  int count = 200;
  bool log = false;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string subcommand = "potential";
  std::vector<double> radii_nm{200.0};
  std::vector<std::string> states{"5S1/2"};
  GridSpec grid;
  double u_rel_tol = 1e-6;
  double beta_rel_tol = 1e-8;
  double n_rel_tol = 1e-8;
  PoleStrategy pole_strategy = PoleStrategy::detour;
  double detour_radius = 0.0;  // rad/m; 0 = default
  double switch_wavelength_um = 7.0;
  std::string catalog_path;  // empty: shipped catalog
  std::string output_dir = ".";
  OutputFormat format = OutputFormat::csv;
  int workers = 1;
  bool strict = false;
};

/// Overlays the fields present in a JSON config text onto `base`.  Unknown
/// keys, wrong types and malformed JSON raise ConfigError naming the field or
/// the line.
RunConfig config_from_json_text(const std::string& text, RunConfig base = {});
RunConfig config_from_file(const std::string& path, RunConfig base = {});

/// Throws ConfigError on the first invalid field.
void validate_config(const RunConfig& cfg);

/// Config fields that determine the numbers, as compact JSON with sorted
/// keys.  Worker count and output location are left out.
std::string canonical_config(const RunConfig& cfg);
/// 64-bit FNV-1a of canonical_config, 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Radial positions r = a + d in metres for the grid of distances d.
std::vector<double> radial_grid(const GridSpec& grid, double radius_m);

FiberGeometry geometry_for(const RunConfig& cfg, double radius_nm);
PotentialOptions options_for(const RunConfig& cfg);
AtomCatalog catalog_for(const RunConfig& cfg);

struct OutputMeta {
  std::string config_hash;
  std::string catalog_version;
  std::string code_version;
};
OutputMeta output_meta(const RunConfig& cfg, const AtomCatalog& catalog);

/// Columns r_nm, r_minus_a_nm, U_total_uK, U_nres_uK, U_res_uK, F_zN,
/// converged, after '#' metadata lines.
void write_curve_csv(std::ostream& out, const PotentialCurve& cv, const OutputMeta& meta);
void write_curve_json(std::ostream& out, const PotentialCurve& cv, const OutputMeta& meta, const RunConfig& cfg);
/// gnuplot script plotting the three potential columns of `data_file`.
std::string gnuplot_script(const std::string& data_file, const PotentialCurve& cv);

/// File name stem for a curve, e.g. "U_5P3-2_a200nm".
std::string curve_stem(const std::string& state, double radius_nm);

struct RunSummary {
  std::vector<std::string> files;
  int failed_points = 0;
};

/// One curve file (plus gnuplot script for CSV) per state and radius.
RunSummary run_potential(const RunConfig& cfg, const AtomCatalog& catalog, std::ostream& log);

/// Shift of the upper-lower transition frequency for each radius; columns
/// r_nm, r_minus_a_nm, shift_rad_s, shift_MHz, converged.
RunSummary run_shift(const RunConfig& cfg, const AtomCatalog& catalog, const std::string& upper,
                     const std::string& lower, std::ostream& log);

struct ValidationGroup {
  std::string name;
  bool passed = true;
  std::vector<std::string> details;
};

struct ValidationOptions {
  std::string catalog_path;  // empty: shipped catalog
  int pole_points = 20;      // sampled points of the pole-strategy cross-check
};

/// Property groups: specfun, wigner, dielectric, catalog, green, potential,
/// poles.  Failures are reported in the groups, not thrown.
std::vector<ValidationGroup> run_validation(const ValidationOptions& opt = {});
std::string validation_report_json(const std::vector<ValidationGroup>& groups);

}  // namespace cpnf
