#pragma once

#include <string>

#include "spb/spectrum.hpp"

namespace spb {

// The n-free constant c = (d/(d+2)) 4 pi^2 / (V omega_d)^{2/d} that every
// lower bound here is built from.  Scales as t^{-2} under dilation by t.
struct LYConstant {
  int d;
  double volume;
  double value;
};
LYConstant ly_constant(int d, double volume);

// n^{2/d}, exact for d = 1 and d = 2.
double index_power(double n, int d);

double liyau_sum_bound(long n, int d, double volume);     // c n^{1+2/d}
double liyau_single_bound(long n, int d, double volume);  // c n^{2/d}
double polya_bound(long n, int d, double volume);  // 4 pi^2 n^{2/d}/(V omega_d)^{2/d}
double weyl_ratio(const Spectrum& s, int n);       // lambda_n / polya_bound(n)

// liyau_sum + c_melas (V / I) n.  The constant is caller-supplied; only its
// existence is known, no explicit value.
double melas_bound(long n, int d, double volume, double inertia, double c_melas);

// lambda_1 >= pi j_{d/2-1,1}^2 / (Gamma(d/2+1)^{2/d} V^{2/d}); equality for
// the ball of the same volume.
double faber_krahn_bound(int d, double volume);

// One-point bound: lambda_n >= liyau_single(n) + (k/n)(lambda_n - lambda_k).
double one_point_rhs(const Spectrum& s, int n, int k);
// The same inequality rearranged: ((n-k)/n) lambda_n + (k/n) lambda_k, to be
// compared against liyau_single(n).
double one_point_rearranged_lhs(const Spectrum& s, int n, int k);

struct BestShift {
  int k;
  double improvement;  // max over k of (k/n)(lambda_n - lambda_k)
};
// Ties broken by smallest k; n = 1 gives k = 1, improvement 0.
BestShift one_point_best_shift(const Spectrum& s, int n);

// Two-point bound admissibility (n + l)^{2/d} l >= n^{1+2/d}, decided exactly
// as (n + l)^2 l^d vs n^{d+2} in integer arithmetic for d <= 6 (log-domain
// comparison above that).
bool two_point_admissible(long n, long ell, int d);

// The factor 2 + (n/l)(1 - (n/(n+l))^{2/d}) multiplying the constant c.
// Always > 2; equals 3 - 2^{-2/d} at l = n.
double two_point_factor(long n, long ell, int d);

// RHS of the two-point bound: factor * c.  Inadmissible pairs are rejected
// with the violated condition in the message.
double two_point_rhs(long n, long ell, int d, double volume);

// LHS lambda_n / n^{2/d} + lambda_{n+l} / (n+l)^{2/d}.
double two_point_lhs(const Spectrum& s, long n, long ell);

// A_n = (1/n) sum_{m<=n} lambda_m / m^{2/d}; compare against LYConstant.
double averaged_statistic(const Spectrum& s, int n);

// Parametrized Li-Yau factor (1 - eta)^{(d+2)/d} + ((d+2)/d) eta for
// eta in [0, 1]; equals 1 only at eta = 0.
double concentration_factor(double eta, int d);

// x^p - y^p >= p y^{p-1} (x - y) with p = (d+2)/d, for x >= y >= 0.
// `holds` allows rounding slack 1e-14 relative; the inequality itself is an
// exact theorem on this range.
struct PowerTangent {
  double lhs;
  double rhs;
  bool holds;
};
PowerTangent power_tangent(double x, double y, int d);

// One checked inequality instance.  k and ell are -1 where not applicable.
struct BoundEvaluation {
  std::string kind;
  long n = 0;
  long k = -1;
  long ell = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  bool verified = false;

  double margin() const { return lhs - rhs; }
  double sharpness() const { return lhs / rhs; }
};

}  // namespace spb
