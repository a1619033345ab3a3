#pragma once

// Dispersive permittivity models evaluable at real and imaginary frequency.

#include <complex>
#include <string>
#include <vector>

namespace cpnf {

using complex = std::complex<double>;

// Unit conversions.  Wavenumbers are in cm^-1, angular frequencies in rad/s.
double omega_from_wavenumber(double eta_cm);
double wavenumber_from_omega(double omega);
double omega_from_wavelength(double lambda_m);
double wavelength_from_omega(double omega);

struct SellmeierTerm {
  double b;          // oscillator strength
  double lambda_um;  // resonance wavelength
};

/// n^2(lambda) = 1 + sum_j B_j lambda^2 / (lambda^2 - lambda_j^2)
struct SellmeierModel {
  std::vector<SellmeierTerm> terms;
  double window_min_m = 0.2e-6;
  double window_max_m = 7.0e-6;
  std::string version;
  std::string source;

  complex eps_real_freq(double omega) const;
  double eps_imag_freq(double u) const;
  double static_value() const;
};

struct DawsonTerm {
  double alpha;
  double center_cm;
  double width_cm;
};

/// Gaussian-band model written through the Faddeeva function.
struct DawsonModel {
  double eps_inf = 0.0;
  std::vector<DawsonTerm> terms;
  double window_min_m = 7.0e-6;
  double window_max_m = 50.0e-6;
  std::string version;
  std::string source;

  complex eps_real_freq(double omega) const;
  double eps_imag_freq(double u) const;

  /// Same quantity from the real form with the Dawson function D(x) and
  /// explicit Gaussians; used for cross-checking.
  complex eps_real_freq_dawson_form(double omega) const;
};

struct PermittivityValue {
  complex eps;
  bool in_window = true;
};

class PermittivityModel {
public:
  enum class Kind { sellmeier, dawson, constant, auto_silica };

  static PermittivityModel sellmeier(SellmeierModel m);
  static PermittivityModel dawson(DawsonModel m);
  static PermittivityModel constant(complex eps);
  /// Sellmeier for wavelengths below the switch, Dawson at and above it.
  static PermittivityModel auto_silica(SellmeierModel s, DawsonModel d, double switch_wavelength_m = 7.0e-6);

  Kind kind() const { return kind_; }
  std::string describe() const;

  /// epsilon(omega) at real omega > 0, plus whether omega lies inside the
  /// validity window of the model that produced it.
  PermittivityValue eps_real_freq(double omega) const;
  /// epsilon(iu), real, for u >= 0.
  double eps_imag_freq(double u) const;

  /// True when the model has no absorption at omega (Sellmeier, real constant).
  bool lossless_at(double omega) const;

  /// |epsilon just above - epsilon just below| at the switch wavelength, on the
  /// real and imaginary frequency axes.  Zero for non-switching models.
  double seam_jump_real() const;
  double seam_jump_imag() const;

  double switch_wavelength() const { return switch_wavelength_; }
  const SellmeierModel& sellmeier_part() const { return sellmeier_; }
  const DawsonModel& dawson_part() const { return dawson_; }
  std::string version() const;

private:
  Kind kind_ = Kind::constant;
  SellmeierModel sellmeier_;
  DawsonModel dawson_;
  complex constant_{1.0, 0.0};
  double switch_wavelength_ = 7.0e-6;
};

SellmeierModel load_sellmeier(const std::string& path);
DawsonModel load_dawson(const std::string& path);

/// Directory holding the shipped data files; overridable with CPNF_DATA_DIR.
std::string data_dir();

/// Auto-silica model from the shipped data files.
PermittivityModel default_silica(double switch_wavelength_m = 7.0e-6);

}  // namespace cpnf
