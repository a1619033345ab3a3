#include "cpnf/wigner.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>

#include "cpnf/error.hpp"

namespace cpnf::wigner {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Per-thread factorial cache.
cpp_int factorial(int n) {
  thread_local std::vector<cpp_int> table{cpp_int(1)};
  while (static_cast<int>(table.size()) <= n) table.push_back(table.back() * static_cast<int>(table.size()));
  return table[n];
}

int twice_of(double x, const char* what) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (!std::isfinite(x) || std::abs(t - r) > 1e-9) throw DomainError(std::string(what) + " is not a multiple of 1/2");
  return static_cast<int>(r);
}

void require_j(int tj) {
  if (tj < 0) throw DomainError("negative angular momentum");
}

void require_jm(int tj, int tm) {
  require_j(tj);
  if (((tj - tm) % 2) != 0) throw DomainError("j and m differ by a non-integer");
}

// (a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!, arguments twice the momenta.
cpp_rational delta(int ta, int tb, int tc) {
  return cpp_rational(factorial((ta + tb - tc) / 2) * factorial((ta - tb + tc) / 2) * factorial((-ta + tb + tc) / 2),
                      factorial((ta + tb + tc) / 2 + 1));
}

// sign(s) sqrt(s^2 r) with a single conversion to double.
double signed_sqrt(const cpp_rational& s, const cpp_rational& r) {
  if (s == 0) return 0.0;
  const double mag = std::sqrt(static_cast<double>(cpp_rational(s * s * r)));
  return s < 0 ? -mag : mag;
}

}  // namespace

AngularMomentum::AngularMomentum(int twice_value) : twice_(twice_value) {
  if (twice_value < 0) throw DomainError("negative angular momentum");
}

AngularMomentum AngularMomentum::from_value(double j) { return AngularMomentum(twice_of(j, "angular momentum")); }

bool triangle(int ta, int tb, int tc) {
  if (ta < 0 || tb < 0 || tc < 0) return false;
  if (((ta + tb + tc) % 2) != 0) return false;
  return tc >= std::abs(ta - tb) && tc <= ta + tb;
}

double wigner3j_twice(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
  require_jm(tj1, tm1);
  require_jm(tj2, tm2);
  require_jm(tj3, tm3);
  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return 0.0;
  if (!triangle(tj1, tj2, tj3)) return 0.0;

  const int j1pm1 = (tj1 + tm1) / 2, j1mm1 = (tj1 - tm1) / 2;
  const int j2pm2 = (tj2 + tm2) / 2, j2mm2 = (tj2 - tm2) / 2;
  const int j3pm3 = (tj3 + tm3) / 2, j3mm3 = (tj3 - tm3) / 2;
  const int j1j2mj3 = (tj1 + tj2 - tj3) / 2;
  const int a = (tj3 - tj2 + tm1) / 2;  // j3 - j2 + m1
  const int b = (tj3 - tj1 - tm2) / 2;  // j3 - j1 - m2

  const int kmin = std::max({0, -a, -b});
  const int kmax = std::min({j1j2mj3, j1mm1, j2pm2});
  cpp_rational s = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const cpp_int den = factorial(k) * factorial(a + k) * factorial(b + k) * factorial(j1j2mj3 - k) *
                        factorial(j1mm1 - k) * factorial(j2pm2 - k);
    s += cpp_rational((k % 2) ? -1 : 1, den);
  }
  const cpp_rational r = delta(tj1, tj2, tj3) * factorial(j1pm1) * factorial(j1mm1) * factorial(j2pm2) *
                         factorial(j2mm2) * factorial(j3pm3) * factorial(j3mm3);
  const int phase = ((tj1 - tj2 - tm3) / 2) % 2 == 0 ? 1 : -1;
  return phase * signed_sqrt(s, r);
}

double wigner6j_twice(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6) {
  for (int tj : {tj1, tj2, tj3, tj4, tj5, tj6}) require_j(tj);
  if (!triangle(tj1, tj2, tj3) || !triangle(tj1, tj5, tj6) || !triangle(tj4, tj2, tj6) || !triangle(tj4, tj5, tj3))
    return 0.0;
  const int a1 = (tj1 + tj2 + tj3) / 2, a2 = (tj1 + tj5 + tj6) / 2;
  const int a3 = (tj4 + tj2 + tj6) / 2, a4 = (tj4 + tj5 + tj3) / 2;
  const int b1 = (tj1 + tj2 + tj4 + tj5) / 2, b2 = (tj2 + tj3 + tj5 + tj6) / 2;
  const int b3 = (tj3 + tj1 + tj6 + tj4) / 2;
  const int tmin = std::max({a1, a2, a3, a4});
  const int tmax = std::min({b1, b2, b3});
  cpp_rational s = 0;
  for (int t = tmin; t <= tmax; ++t) {
    const cpp_int den = factorial(t - a1) * factorial(t - a2) * factorial(t - a3) * factorial(t - a4) *
                        factorial(b1 - t) * factorial(b2 - t) * factorial(b3 - t);
    const cpp_int num = (t % 2) ? cpp_int(-factorial(t + 1)) : factorial(t + 1);
    s += cpp_rational(num, den);
  }
  const cpp_rational r = delta(tj1, tj2, tj3) * delta(tj1, tj5, tj6) * delta(tj4, tj2, tj6) * delta(tj4, tj5, tj3);
  return signed_sqrt(s, r);
}

double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3) {
  return wigner3j_twice(twice_of(j1, "j1"), twice_of(j2, "j2"), twice_of(j3, "j3"), twice_of(m1, "m1"),
                        twice_of(m2, "m2"), twice_of(m3, "m3"));
}

double wigner6j(double j1, double j2, double j3, double j4, double j5, double j6) {
  return wigner6j_twice(twice_of(j1, "j1"), twice_of(j2, "j2"), twice_of(j3, "j3"), twice_of(j4, "j4"),
                        twice_of(j5, "j5"), twice_of(j6, "j6"));
}

void HfsSublevel::validate() const {
  if (!triangle(J.twice(), I.twice(), F.twice()))
    throw DomainError("sublevel " + label + ": F outside |J - I| .. J + I");
  if (std::abs(twice_m) > F.twice() || ((F.twice() - twice_m) % 2) != 0)
    throw DomainError("sublevel " + label + ": invalid magnetic quantum number");
}

double dipole_component(const HfsSublevel& upper, const HfsSublevel& lower, int q, double reduced_d) {
  if (!(upper.I == lower.I)) throw DomainError("dipole component between sublevels with different nuclear spin");
  if (q < -1 || q > 1) throw DomainError("spherical index q must be -1, 0 or +1");
  upper.validate();
  lower.validate();
  if (upper.twice_m - lower.twice_m != 2 * q) return 0.0;
  const int tI = upper.I.twice(), tJp = upper.J.twice(), tJ = lower.J.twice();
  const int tFp = upper.F.twice(), tF = lower.F.twice(), tMp = upper.twice_m, tM = lower.twice_m;
  // (-1)^(I + J' - M') sqrt((2F+1)(2F'+1)) {J' F' I; F J 1} (F 1 F'; M q -M')
  const int phase = ((tI + tJp - tMp) / 2) % 2 == 0 ? 1 : -1;
  const double six = wigner6j_twice(tJp, tFp, tI, tF, tJ, 2);
  const double three = wigner3j_twice(tF, 2, tFp, tM, 2 * q, -tMp);
  return phase * reduced_d * std::sqrt(double((tF + 1) * (tFp + 1))) * six * three;
}

std::array<complex, 3> dipole_vector(const HfsSublevel& upper, const HfsSublevel& lower, double reduced_d) {
  // e_{+1} = -(x + i y)/sqrt2, e_0 = z, e_{-1} = (x - i y)/sqrt2; d = sum_q d^(q) e_q^*
  const double s = 1.0 / std::sqrt(2.0);
  std::array<complex, 3> d{};
  const double dp = dipole_component(upper, lower, 1, reduced_d);
  const double d0 = dipole_component(upper, lower, 0, reduced_d);
  const double dm = dipole_component(upper, lower, -1, reduced_d);
  d[0] = -s * dp + s * dm;
  d[1] = complex(0.0, s * dp) + complex(0.0, s * dm);
  d[2] = d0;
  return d;
}

std::vector<SumRuleCheck> validate_sum_rule(AngularMomentum J, AngularMomentum Jp, AngularMomentum I, const Dyadic& T,
                                            double reduced_d) {
  const complex trace = T[0][0] + T[1][1] + T[2][2];
  auto contract = [&T](const std::array<complex, 3>& d) {
    complex v = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v += d[i] * T[i][j] * std::conj(d[j]);
    return v;
  };
  auto f_values = [&I](AngularMomentum j) {
    std::vector<int> out;
    for (int tf = std::abs(j.twice() - I.twice()); tf <= j.twice() + I.twice(); tf += 2) out.push_back(tf);
    return out;
  };
  auto sublevel = [&I](const char* label, AngularMomentum j, int tf, int tm) {
    return HfsSublevel{label, j, I, AngularMomentum(tf), tm};
  };

  std::vector<SumRuleCheck> out;
  const double d2 = reduced_d * reduced_d;
  for (int tf : f_values(J)) {
    complex sum = 0.0;
    for (int tm = -tf; tm <= tf; tm += 2)
      for (int tfp : f_values(Jp))
        for (int tmp = -tfp; tmp <= tfp; tmp += 2)
          sum += contract(dipole_vector(sublevel("e", Jp, tfp, tmp), sublevel("g", J, tf, tm), reduced_d));
    out.push_back({true, tf, sum / double(tf + 1), d2 * trace / (3.0 * (J.twice() + 1))});
  }
  for (int tfp : f_values(Jp)) {
    complex sum = 0.0;
    for (int tmp = -tfp; tmp <= tfp; tmp += 2)
      for (int tf : f_values(J))
        for (int tm = -tf; tm <= tf; tm += 2)
          sum += contract(dipole_vector(sublevel("e", Jp, tfp, tmp), sublevel("g", J, tf, tm), reduced_d));
    out.push_back({false, tfp, sum / double(tfp + 1), d2 * trace / (3.0 * (Jp.twice() + 1))});
  }
  return out;
}

}  // namespace cpnf::wigner
