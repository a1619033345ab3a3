#include "cpnf/dielectric.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cpnf/constants.hpp"
#include "cpnf/error.hpp"
#include "cpnf/specfun.hpp"

namespace cpnf {

namespace {

using constants::c;
using constants::pi;

const double kGaussScale = 2.0 * std::sqrt(std::log(2.0));

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string("non-finite ") + what);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void check_header(const nlohmann::json& j, const std::string& path, const char* model) {
  if (j.value("schema", "") != "cpnf-permittivity/1") throw DataError(path + ": unknown schema");
  if (j.value("model", "") != model) throw DataError(path + ": expected model '" + model + "'");
}

}  // namespace

double omega_from_wavenumber(double eta_cm) { return 2.0 * pi * c * 100.0 * eta_cm; }
double wavenumber_from_omega(double omega) { return omega / (2.0 * pi * c * 100.0); }
double omega_from_wavelength(double lambda_m) { return 2.0 * pi * c / lambda_m; }
double wavelength_from_omega(double omega) { return 2.0 * pi * c / omega; }

// --- Sellmeier --------------------------------------------------------------

complex SellmeierModel::eps_real_freq(double omega) const {
  const double lam2 = std::pow(wavelength_from_omega(omega) * 1e6, 2);
  double eps = 1.0;
  for (const auto& t : terms) eps += t.b * lam2 / (lam2 - t.lambda_um * t.lambda_um);
  return {eps, 0.0};
}

double SellmeierModel::eps_imag_freq(double u) const {
  // B lambda^2/(lambda^2 - lambda_j^2) = B w_j^2/(w_j^2 - omega^2), omega -> iu
  double eps = 1.0;
  for (const auto& t : terms) {
    const double wj = omega_from_wavelength(t.lambda_um * 1e-6);
    eps += t.b * wj * wj / (wj * wj + u * u);
  }
  return eps;
}

double SellmeierModel::static_value() const {
  double eps = 1.0;
  for (const auto& t : terms) eps += t.b;
  return eps;
}

// --- Dawson -----------------------------------------------------------------

complex DawsonModel::eps_real_freq(double omega) const {
  const double eta = wavenumber_from_omega(omega);
  complex eps = eps_inf;
  for (const auto& t : terms) {
    const double zm = kGaussScale * (eta - t.center_cm) / t.width_cm;
    const double zp = kGaussScale * (eta + t.center_cm) / t.width_cm;
    eps += complex{0.0, t.alpha} * (specfun::faddeeva(zm) - specfun::faddeeva(zp));
  }
  return eps;
}

double DawsonModel::eps_imag_freq(double u) const {
  const double eta = wavenumber_from_omega(u);
  double eps = eps_inf;
  for (const auto& t : terms) {
    const complex zeta = kGaussScale * complex{t.center_cm, eta} / t.width_cm;
    eps += 2.0 * t.alpha * specfun::faddeeva(zeta).imag();
  }
  return eps;
}

complex DawsonModel::eps_real_freq_dawson_form(double omega) const {
  const double eta = wavenumber_from_omega(omega);
  double re = eps_inf, im = 0.0;
  for (const auto& t : terms) {
    const double zm = kGaussScale * (eta - t.center_cm) / t.width_cm;
    const double zp = kGaussScale * (eta + t.center_cm) / t.width_cm;
    re += 2.0 * t.alpha / std::sqrt(pi) * (specfun::dawson(zp) - specfun::dawson(zm));
    im += t.alpha * (std::exp(-zm * zm) - std::exp(-zp * zp));
  }
  return {re, im};
}

// --- PermittivityModel ------------------------------------------------------

PermittivityModel PermittivityModel::sellmeier(SellmeierModel m) {
  PermittivityModel p;
  p.kind_ = Kind::sellmeier;
  p.sellmeier_ = std::move(m);
  return p;
}

PermittivityModel PermittivityModel::dawson(DawsonModel m) {
  PermittivityModel p;
  p.kind_ = Kind::dawson;
  p.dawson_ = std::move(m);
  return p;
}

PermittivityModel PermittivityModel::constant(complex eps) {
  if (!std::isfinite(eps.real()) || !std::isfinite(eps.imag())) throw DomainError("non-finite constant permittivity");
  PermittivityModel p;
  p.kind_ = Kind::constant;
  p.constant_ = eps;
  return p;
}

PermittivityModel PermittivityModel::auto_silica(SellmeierModel s, DawsonModel d, double switch_wavelength_m) {
  if (!(switch_wavelength_m > 0.0)) throw DomainError("switch wavelength must be positive");
  PermittivityModel p;
  p.kind_ = Kind::auto_silica;
  p.sellmeier_ = std::move(s);
  p.dawson_ = std::move(d);
  p.switch_wavelength_ = switch_wavelength_m;
  return p;
}

std::string PermittivityModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::sellmeier: os << "sellmeier(" << sellmeier_.version << ")"; break;
    case Kind::dawson: os << "dawson(" << dawson_.version << ")"; break;
    case Kind::constant: os << "constant(" << constant_.real() << "," << constant_.imag() << ")"; break;
    case Kind::auto_silica:
      os << "auto-silica(" << sellmeier_.version << "|" << dawson_.version << " at " << switch_wavelength_ * 1e6 << " um)";
      break;
  }
  return os.str();
}

std::string PermittivityModel::version() const {
  switch (kind_) {
    case Kind::sellmeier: return sellmeier_.version;
    case Kind::dawson: return dawson_.version;
    case Kind::auto_silica: return sellmeier_.version + "+" + dawson_.version;
    case Kind::constant: break;
  }
  return "constant";
}

PermittivityValue PermittivityModel::eps_real_freq(double omega) const {
  require_finite(omega, "angular frequency");
  if (!(omega > 0.0)) throw DomainError("real-frequency permittivity needs omega > 0");
  const double lambda = wavelength_from_omega(omega);
  auto in = [lambda](double lo, double hi) { return lambda >= lo && lambda <= hi; };
  switch (kind_) {
    case Kind::sellmeier:
      return {sellmeier_.eps_real_freq(omega), in(sellmeier_.window_min_m, sellmeier_.window_max_m)};
    case Kind::dawson:
      return {dawson_.eps_real_freq(omega), in(dawson_.window_min_m, dawson_.window_max_m)};
    case Kind::constant:
      return {constant_, true};
    case Kind::auto_silica:
      if (lambda < switch_wavelength_)
        return {sellmeier_.eps_real_freq(omega), in(sellmeier_.window_min_m, sellmeier_.window_max_m)};
      return {dawson_.eps_real_freq(omega), in(dawson_.window_min_m, dawson_.window_max_m)};
  }
  return {constant_, true};
}

double PermittivityModel::eps_imag_freq(double u) const {
  require_finite(u, "imaginary frequency");
  if (u < 0.0) throw DomainError("imaginary-frequency permittivity needs u >= 0");
  switch (kind_) {
    case Kind::sellmeier: return sellmeier_.eps_imag_freq(u);
    case Kind::dawson: return dawson_.eps_imag_freq(u);
    case Kind::constant: return constant_.real();
    case Kind::auto_silica:
      if (u > 0.0 && wavelength_from_omega(u) < switch_wavelength_) return sellmeier_.eps_imag_freq(u);
      return dawson_.eps_imag_freq(u);
  }
  return constant_.real();
}

bool PermittivityModel::lossless_at(double omega) const {
  return eps_real_freq(omega).eps.imag() == 0.0;
}

double PermittivityModel::seam_jump_real() const {
  if (kind_ != Kind::auto_silica) return 0.0;
  const double w = omega_from_wavelength(switch_wavelength_);
  return std::abs(sellmeier_.eps_real_freq(w) - dawson_.eps_real_freq(w));
}

double PermittivityModel::seam_jump_imag() const {
  if (kind_ != Kind::auto_silica) return 0.0;
  const double u = omega_from_wavelength(switch_wavelength_);
  return std::abs(sellmeier_.eps_imag_freq(u) - dawson_.eps_imag_freq(u));
}

// --- loading ----------------------------------------------------------------

SellmeierModel load_sellmeier(const std::string& path) {
  const auto j = read_json(path);
  check_header(j, path, "sellmeier");
  SellmeierModel m;
  try {
    m.version = j.at("version").get<std::string>();
    m.source = j.at("source").get<std::string>();
    const auto w = j.at("validity_um");
    m.window_min_m = w.at(0).get<double>() * 1e-6;
    m.window_max_m = w.at(1).get<double>() * 1e-6;
    for (const auto& t : j.at("terms")) m.terms.push_back({t.at("B").get<double>(), t.at("lambda_um").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  if (m.terms.empty()) throw DataError(path + ": no Sellmeier terms");
  return m;
}

DawsonModel load_dawson(const std::string& path) {
  const auto j = read_json(path);
  check_header(j, path, "dawson");
  DawsonModel m;
  try {
    m.version = j.at("version").get<std::string>();
    m.source = j.at("source").get<std::string>();
    m.eps_inf = j.at("eps_inf").get<double>();
    const auto w = j.at("validity_um");
    m.window_min_m = w.at(0).get<double>() * 1e-6;
    m.window_max_m = w.at(1).get<double>() * 1e-6;
    for (const auto& t : j.at("terms"))
      m.terms.push_back({t.at("alpha").get<double>(), t.at("center_cm").get<double>(), t.at("width_cm").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  for (const auto& t : m.terms)
    if (!(t.width_cm > 0.0)) throw DataError(path + ": band width must be positive");
  return m;
}

std::string data_dir() {
  if (const char* env = std::getenv("CPNF_DATA_DIR"); env && *env) return env;
#ifdef CPNF_DATA_DIR
  return CPNF_DATA_DIR;
#else
  return "data";
#endif
}

PermittivityModel default_silica(double switch_wavelength_m) {
  return PermittivityModel::auto_silica(load_sellmeier(data_dir() + "/silica_sellmeier.json"),
                                        load_dawson(data_dir() + "/silica_dawson.json"), switch_wavelength_m);
}

}  // namespace cpnf
