#pragma once

// Wigner 3j/6j symbols evaluated exactly (rational arithmetic under the
// square root) and the hyperfine dipole components built from them.

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace cpnf::wigner {

using complex = std::complex<double>;

/// Integer or half-integer angular momentum, stored as twice its value.
class AngularMomentum {
public:
  AngularMomentum() = default;
  explicit AngularMomentum(int twice_value);
  /// Accepts only integers and half-integers.
  static AngularMomentum from_value(double j);

  int twice() const { return twice_; }
  double value() const { return 0.5 * twice_; }
  int multiplicity() const { return twice_ + 1; }

  friend bool operator==(AngularMomentum, AngularMomentum) = default;

private:
  int twice_ = 0;
};

/// Triangle condition |a-b| <= c <= a+b with a+b+c integral.
bool triangle(int ta, int tb, int tc);

// Arguments are twice the angular momenta / projections.  Malformed input
// (negative j, j and m of different parity) raises DomainError; selection-rule
// violations, including |m| > j, give exactly 0.
double wigner3j_twice(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3);
double wigner6j_twice(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6);

double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3);
double wigner6j(double j1, double j2, double j3, double j4, double j5, double j6);

struct HfsSublevel {
  std::string label;
  AngularMomentum J, I, F;
  int twice_m = 0;

  /// Checks |M| <= F, |J - I| <= F <= J + I and the parities.
  void validate() const;
};

/// Spherical component d^(q) of <upper| D |lower> for hyperfine sublevels, in
/// the units of reduced_d.  Zero unless M' - M = q.
double dipole_component(const HfsSublevel& upper, const HfsSublevel& lower, int q, double reduced_d);

using Dyadic = std::array<std::array<complex, 3>, 3>;

/// Cartesian dipole vector sum_q d^(q) e_q^* for one sublevel pair.
std::array<complex, 3> dipole_vector(const HfsSublevel& upper, const HfsSublevel& lower, double reduced_d);

struct SumRuleCheck {
  bool lower_average;  // true: average over the lower F level, else the upper F'
  int twice_f;         // the hyperfine level that was averaged over
  complex lhs;         // explicit sublevel sum
  complex rhs;         // |<J'||D||J>|^2 Tr(T) / (3 (2J+1))  or  / (3 (2J'+1))
};

/// Both sides of the sublevel sum rules for every hyperfine level of the
/// lower (J) and upper (J') fine-structure levels with nuclear spin I.
std::vector<SumRuleCheck> validate_sum_rule(AngularMomentum J, AngularMomentum Jp, AngularMomentum I, const Dyadic& T,
                                            double reduced_d = 1.0);

}  // namespace cpnf::wigner
