#pragma once

// Fine-structure levels and electric-dipole lines of an alkali atom, loaded
// from a JSON catalog.

#include <map>
#include <string>
#include <vector>

#include "cpnf/wigner.hpp"

namespace cpnf {

struct FineLevel {
  std::string label;  // e.g. "5P3/2"
  int n = 0;
  int L = 0;
  wigner::AngularMomentum J;
  double energy_cm = 0.0;  // above the ground state

  /// Angular frequency of the level above the ground state, rad/s.
  double omega() const;
};

struct TransitionLine {
  std::string upper, lower;
  double reduced_d_au = 0.0;  // <upper||D||lower> in e a0
  double wavelength_nm = 0.0;
  std::string source;

  std::string id() const { return upper + "-" + lower; }
};

enum class Direction { upward, downward };

/// One line seen from a given initial level a.
struct Transition {
  const TransitionLine* line = nullptr;
  const FineLevel* other = nullptr;  // level b
  Direction direction = Direction::upward;
  double omega_ab = 0.0;  // omega_a - omega_b, rad/s; positive for downward lines
};

/// Which configured shells transitions_from returns.
enum class Shells {
  production,  // the per-level inclusion list
  audit,       // inclusion list plus the next shell
  all          // every catalog line touching the level
};

class AtomCatalog {
public:
  /// Parses a catalog.  With `strict`, any consistency problem (see
  /// problems()) raises DataError; structural errors always do.
  static AtomCatalog from_json_text(const std::string& text, bool strict = true);
  static AtomCatalog load(const std::string& path, bool strict = true);
  /// The shipped rubidium catalog.
  static AtomCatalog default_rb();

  /// Selection-rule, wavelength and energy violations, one message per
  /// offending level or line (the line id leads the message).
  std::vector<std::string> problems() const;

  const FineLevel& level(const std::string& label) const;
  const FineLevel& ground() const;
  const std::vector<FineLevel>& levels() const { return levels_; }
  const std::vector<TransitionLine>& lines() const { return lines_; }

  /// Lines between `label` and the configured partner levels.  Levels
  /// without a configured list use every line touching them.  Throws
  /// LookupError for an unknown level.
  std::vector<Transition> transitions_from(const std::string& label, Shells shells = Shells::production) const;

  const std::string& version() const { return version_; }
  const std::string& species() const { return species_; }
  double mass_kg() const { return mass_kg_; }
  int twice_nuclear_spin() const { return twice_nuclear_spin_; }

private:
  std::vector<FineLevel> levels_;
  std::vector<TransitionLine> lines_;
  std::map<std::string, std::vector<std::string>> inclusion_, audit_;
  std::string version_, species_;
  double mass_kg_ = 0.0;
  int twice_nuclear_spin_ = 0;

  const TransitionLine* find_line(const std::string& a, const std::string& b) const;
};

/// |<n'J'||D||nJ>| / sqrt(2 J_initial + 1), in e a0.  `initial` must be an
/// endpoint of the line (DomainError otherwise).
double normalized_reduced_d(const TransitionLine& line, const FineLevel& initial);

struct Polarizability {
  double si = 0.0;         // C m^2 / V
  double volume_m3 = 0.0;  // si / (4 pi eps0)
  double au = 0.0;         // si / (4 pi eps0 a0^3)
};

/// Scalar polarizability of the ground level at imaginary frequency u >= 0,
/// summed over the ground level's production lines.
Polarizability polarizability_iu(const AtomCatalog& catalog, double u);

}  // namespace cpnf
