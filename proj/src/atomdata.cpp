#include "cpnf/atomdata.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "cpnf/constants.hpp"
#include "cpnf/dielectric.hpp"
#include "cpnf/error.hpp"

namespace cpnf {

namespace {

using nlohmann::json;

template <class T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw DataError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(where + ": field '" + key + "' has the wrong type");
  }
}

std::map<std::string, std::vector<std::string>> read_lists(const json& j, const char* key) {
  std::map<std::string, std::vector<std::string>> out;
  if (!j.contains(key)) return out;
  for (const auto& [label, list] : j.at(key).items()) out[label] = list.get<std::vector<std::string>>();
  return out;
}

}  // namespace

double FineLevel::omega() const { return omega_from_wavenumber(energy_cm); }

AtomCatalog AtomCatalog::from_json_text(const std::string& text, bool strict) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("atom catalog: ") + e.what());
  }
  if (j.value("schema", "") != "cpnf-atom-catalog/1") throw DataError("atom catalog: unknown schema");
  AtomCatalog cat;
  cat.version_ = field<std::string>(j, "version", "atom catalog");
  cat.species_ = j.value("species", "");
  cat.mass_kg_ = j.value("mass_u", 0.0) * constants::atomic_mass_unit;
  cat.twice_nuclear_spin_ = j.value("nuclear_spin_twice", 0);

  std::set<std::string> labels;
  for (const auto& lv : field<json>(j, "levels", "atom catalog")) {
    FineLevel l;
    l.label = field<std::string>(lv, "label", "level");
    const std::string where = "level " + l.label;
    l.n = field<int>(lv, "n", where);
    l.L = field<int>(lv, "L", where);
    const int two_j = field<int>(lv, "twoJ", where);
    if (two_j < 0) throw DataError(where + ": negative J");
    l.J = wigner::AngularMomentum(two_j);
    l.energy_cm = field<double>(lv, "energy_cm", where);
    if (!std::isfinite(l.energy_cm)) throw DataError(where + ": non-finite energy");
    if (!labels.insert(l.label).second) throw DataError(where + ": duplicate label");
    cat.levels_.push_back(std::move(l));
  }
  for (const auto& ln : field<json>(j, "lines", "atom catalog")) {
    TransitionLine t;
    t.upper = field<std::string>(ln, "upper", "line");
    t.lower = field<std::string>(ln, "lower", "line");
    const std::string where = "line " + t.id();
    if (!labels.count(t.upper) || !labels.count(t.lower)) throw DataError(where + ": unknown level");
    t.reduced_d_au = field<double>(ln, "reduced_d_au", where);
    t.wavelength_nm = field<double>(ln, "wavelength_nm", where);
    t.source = ln.value("source", "");
    cat.lines_.push_back(std::move(t));
  }
  cat.inclusion_ = read_lists(j, "inclusion");
  cat.audit_ = read_lists(j, "audit_inclusion");
  for (const auto* lists : {&cat.inclusion_, &cat.audit_})
    for (const auto& [label, partners] : *lists) {
      if (!labels.count(label)) throw DataError("inclusion list for unknown level " + label);
      for (const auto& p : partners)
        if (!labels.count(p)) throw DataError("inclusion list of " + label + " names unknown level " + p);
    }

  if (strict) {
    const auto issues = cat.problems();
    if (!issues.empty()) {
      std::string msg = "atom catalog " + cat.version_ + " is inconsistent:";
      for (const auto& s : issues) msg += "\n  " + s;
      throw DataError(msg);
    }
  }
  return cat;
}

AtomCatalog AtomCatalog::load(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open atom catalog " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), strict);
}

AtomCatalog AtomCatalog::default_rb() { return load(data_dir() + "/rb_catalog.json"); }

std::vector<std::string> AtomCatalog::problems() const {
  std::vector<std::string> out;
  int grounds = 0;
  for (const auto& l : levels_) {
    if (l.energy_cm < 0.0) out.push_back("level " + l.label + ": negative energy");
    if (l.energy_cm == 0.0) ++grounds;
    // single valence electron: J = L +- 1/2
    if (std::abs(l.J.twice() - 2 * l.L) != 1) out.push_back("level " + l.label + ": J incompatible with L");
  }
  if (grounds != 1) out.push_back("catalog: expected exactly one level at zero energy, found " + std::to_string(grounds));
  for (const auto& t : lines_) {
    const FineLevel& u = level(t.upper);
    const FineLevel& d = level(t.lower);
    const int dj2 = std::abs(u.J.twice() - d.J.twice());
    if (dj2 > 2) out.push_back(t.id() + ": |delta J| > 1");
    if (std::abs(u.L - d.L) != 1) out.push_back(t.id() + ": delta L is not +-1");
    if (u.J.twice() == 0 && d.J.twice() == 0) out.push_back(t.id() + ": J = J' = 0");
    const double de = u.energy_cm - d.energy_cm;
    if (!(de > 0.0)) {
      out.push_back(t.id() + ": upper level is not above the lower one");
      continue;
    }
    const double lam = 1e7 / de;
    if (!(std::abs(lam - t.wavelength_nm) <= 1e-6 * lam))
      out.push_back(t.id() + ": wavelength " + std::to_string(t.wavelength_nm) + " nm does not match the level energies (" +
                    std::to_string(lam) + " nm)");
  }
  return out;
}

const FineLevel& AtomCatalog::level(const std::string& label) const {
  for (const auto& l : levels_)
    if (l.label == label) return l;
  throw LookupError("no level '" + label + "' in atom catalog " + version_);
}

const FineLevel& AtomCatalog::ground() const {
  for (const auto& l : levels_)
    if (l.energy_cm == 0.0) return l;
  throw DataError("atom catalog " + version_ + " has no ground level");
}

const TransitionLine* AtomCatalog::find_line(const std::string& a, const std::string& b) const {
  for (const auto& t : lines_)
    if ((t.upper == a && t.lower == b) || (t.upper == b && t.lower == a)) return &t;
  return nullptr;
}

std::vector<Transition> AtomCatalog::transitions_from(const std::string& label, Shells shells) const {
  const FineLevel& a = level(label);
  std::vector<const TransitionLine*> chosen;
  const auto inc = inclusion_.find(label);
  if (shells == Shells::all || inc == inclusion_.end()) {
    for (const auto& t : lines_)
      if (t.upper == label || t.lower == label) chosen.push_back(&t);
  } else {
    std::vector<std::string> partners = inc->second;
    if (shells == Shells::audit)
      if (const auto au = audit_.find(label); au != audit_.end())
        partners.insert(partners.end(), au->second.begin(), au->second.end());
    for (const auto& p : partners) {
      const TransitionLine* t = find_line(label, p);
      if (!t) throw DataError("atom catalog " + version_ + ": no line between " + label + " and " + p);
      chosen.push_back(t);
    }
  }
  std::vector<Transition> out;
  for (const TransitionLine* t : chosen) {
    Transition tr;
    tr.line = t;
    tr.other = &level(t->upper == label ? t->lower : t->upper);
    tr.omega_ab = a.omega() - tr.other->omega();
    tr.direction = tr.omega_ab > 0.0 ? Direction::downward : Direction::upward;
    out.push_back(tr);
  }
  return out;
}

double normalized_reduced_d(const TransitionLine& line, const FineLevel& initial) {
  if (initial.label != line.upper && initial.label != line.lower)
    throw DomainError("level " + initial.label + " is not an endpoint of line " + line.id());
  return std::abs(line.reduced_d_au) / std::sqrt(double(initial.J.multiplicity()));
}

Polarizability polarizability_iu(const AtomCatalog& catalog, double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("imaginary frequency must be >= 0");
  const FineLevel& g = catalog.ground();
  const auto lines = catalog.transitions_from(g.label);
  if (lines.empty()) throw DataError("no lines from the ground level in atom catalog " + catalog.version());
  double sum = 0.0;
  for (const auto& t : lines) {
    const double d = t.line->reduced_d_au * constants::dipole_au;
    const double w = -t.omega_ab;  // omega_eg > 0
    sum += d * d * w / (w * w + u * u);
  }
  Polarizability p;
  p.si = 2.0 * sum / (3.0 * g.J.multiplicity() * constants::hbar);
  p.volume_m3 = p.si / (4.0 * constants::pi * constants::eps0);
  p.au = p.si / constants::polarizability_au;
  return p;
}

}  // namespace cpnf
