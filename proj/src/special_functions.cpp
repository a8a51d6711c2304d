#include "spb/special_functions.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>

#include "spb/common.hpp"

namespace spb {

namespace {

constexpr double kMaxOrder = 700.0;
constexpr double kMaxArg = 1.0e5;

void validate_order_arg(double nu, double x) {
  const bool order_ok = (nu == -0.5) || (nu >= 0.0 && nu <= kMaxOrder);
  if (!order_ok || !std::isfinite(nu)) {
    throw std::invalid_argument("bessel order out of supported range: nu = " +
                                std::to_string(nu));
  }
  if (!(x >= 0.0) || !(x <= kMaxArg)) {
    throw std::invalid_argument("bessel argument out of supported range: x = " +
                                std::to_string(x));
  }
}

// Ascending series around x = 0.  Restricted to x^2 <= 4(nu+1) or x < 2,
// where the terms decrease from the start and nothing cancels.
BesselPair series_jnu(double nu, double x) {
  const double log_t0 = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
  if (log_t0 < -745.0) return {0.0, 0.0};  // underflows; |J| < 1e-300
  const double q = 0.25 * x * x;
  double term = std::exp(log_t0);
  double sum = term;
  double dsum = term * nu / x;
  for (int m = 0; m < 1000; ++m) {
    term *= -q / ((m + 1.0) * (m + 1.0 + nu));
    sum += term;
    dsum += term * (2.0 * (m + 1.0) + nu) / x;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return {sum, dsum};
}

// J'_nu/J_nu + i Y-phase continued fraction evaluated at order mu <= x + 1.5.
// Returns p + i q with (J' + iY')/(J + iY) = p + iq.
std::complex<double> steed_cf2(double mu, double x) {
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> b = std::complex<double>(-0.5 / x, 1.0);
  std::complex<double> f = b;
  if (std::abs(f) < 1e-30) f = 1e-30;
  std::complex<double> C = f;
  std::complex<double> D = 0.0;
  for (int k = 1; k <= 40000; ++k) {
    const std::complex<double> a =
        (k == 1) ? I * ((0.25 - mu * mu) / x)
                 : std::complex<double>((k - 0.5) * (k - 0.5) - mu * mu, 0.0);
    const std::complex<double> bk(2.0 * x, 2.0 * k);
    D = bk + a * D;
    if (std::abs(D) < 1e-290) D = 1e-290;
    C = bk + a / C;
    if (std::abs(C) < 1e-290) C = 1e-290;
    D = 1.0 / D;
    const std::complex<double> delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 3e-16) return f;
  }
  throw ConvergenceError("bessel continued fraction failed to settle at mu = " +
                         std::to_string(mu) + ", x = " + std::to_string(x));
}

// Backward recurrence from well above the turning point fixes every ratio and
// sign; the continued fraction above plus the Wronskian J Y' - Y J' = 2/(pi x)
// supplies one true magnitude to scale the whole walk.
BesselPair steed_jnu(double nu, double x) {
  const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
  const double mu = nu - nl;

  const int extra =
      static_cast<int>(std::ceil(std::max(0.0, x - nu) + 8.0 * std::cbrt(x + 1.0))) + 40;
  const int top = nl + extra;  // order(i) = mu + i, i in [0, top]

  double up = 0.0;            // J~ at order mu + i + 1
  double cur = 1e-155;        // J~ at order mu + i
  double at_nu = 0.0, at_nu1 = 0.0;
  double rec[3] = {0.0, 0.0, 0.0};  // J~ at orders mu, mu+1, mu+2
  for (int i = top; i >= 1; --i) {
    const double order = mu + i;
    const double down = (2.0 * order / x) * cur - up;
    up = cur;
    cur = down;
    const int idx = i - 1;
    if (idx == nl + 1) at_nu1 = cur;
    if (idx == nl) at_nu = cur;
    if (idx < 3) rec[idx] = cur;
    if (std::abs(cur) > 1e250) {
      const double s = 1e-250;
      cur *= s;
      up *= s;
      at_nu *= s;
      at_nu1 *= s;
      rec[0] *= s;
      rec[1] *= s;
      rec[2] *= s;
    }
  }

  // Normalize at whichever of mu, mu+1 the walk left farther from a zero.
  double o = mu;
  double jo = rec[0], jo1 = rec[1];
  if (std::abs(rec[0]) < 0.1 * std::abs(rec[1])) {
    o = mu + 1.0;
    jo = rec[1];
    jo1 = rec[2];
  }
  const double f = o / x - jo1 / jo;
  const std::complex<double> pq = steed_cf2(o, x);
  const double p = pq.real(), q = pq.imag();
  const double gam = (p - f) / q;
  const double w = 2.0 / (M_PI * x);
  double jmag = std::sqrt(w / ((p - f) * gam + q));
  const double scale = (jo < 0.0 ? -jmag : jmag) / jo;

  const double j = at_nu * scale;
  const double jp = ((nu / x) * at_nu - at_nu1) * scale;
  return {j, jp};
}

double airy_zero_magnitude(int k) {
  const double t = 3.0 * M_PI * (4.0 * k - 1.0) / 8.0;
  const double u = 1.0 / (t * t);
  return std::pow(t, 2.0 / 3.0) *
         (1.0 + u * (5.0 / 48.0 + u * (-5.0 / 36.0 + u * (77125.0 / 82944.0))));
}

double mcmahon_guess(double nu, int k) {
  const double beta = (k + 0.5 * nu - 0.25) * M_PI;
  const double mu = 4.0 * nu * nu;
  const double b = 8.0 * beta;
  const double c1 = (mu - 1.0) / b;
  const double c2 = 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b * b * b);
  const double c3 = 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) /
                    (15.0 * b * b * b * b * b);
  return beta - c1 - c2 - c3;
}

// Solves (2/3) zeta^(3/2) = sqrt(z^2 - 1) - arccos(1/z) for z >= 1.
double olver_z_of_zeta(double zeta) {
  const double target = (2.0 / 3.0) * std::pow(zeta, 1.5);
  double lo = 1.0;
  double hi = target + M_PI_2 + 1.0;
  double z = (zeta < 1.7) ? 1.0 + zeta / std::cbrt(2.0) : target + M_PI_2;
  z = std::min(std::max(z, lo + 1e-12), hi);
  for (int it = 0; it < 200; ++it) {
    const double s = std::sqrt(std::max(z * z - 1.0, 0.0));
    const double F = s - std::acos(1.0 / z) - target;
    if (F > 0.0) hi = z; else lo = z;
    const double dF = (z > 1.0) ? s / z : 0.0;
    double next = (dF > 0.0) ? z - F / dF : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) < 1e-13 * z) return next;
    z = next;
  }
  return z;
}

// Initial guess for j_{nu,k}.  McMahon's expansion covers small orders for
// every k; beyond that the uniform (Airy-seeded) form stays within ~0.2 of the
// zero for every k, which the +-0.5 bracket absorbs.
double zero_guess(double nu, int k) {
  if (nu <= 8.0) return mcmahon_guess(nu, k);
  const double zeta = airy_zero_magnitude(k) / std::cbrt(nu * nu);
  return nu * olver_z_of_zeta(zeta);
}

double refine_zero(double nu, int k, double floor_above) {
  const double guess = zero_guess(nu, k);
  double lo = std::max({guess - 0.5, nu + 1e-9, floor_above});
  double hi = guess + 0.5;
  if (!(lo < hi)) lo = std::max(nu + 1e-9, hi - 1.0);

  double flo = bessel_j(nu, lo);
  double fhi = bessel_j(nu, hi);
  // Consecutive zeros of one order are separated by more than 3, so a widened
  // window around a guess this good still isolates the k-th zero.
  for (int grow = 0; (flo > 0.0) == (fhi > 0.0); ++grow) {
    if (grow >= 6) {
      throw ConvergenceError("bessel zero bracketing failed for nu = " +
                             std::to_string(nu) + ", k = " + std::to_string(k));
    }
    lo = std::max({lo - 0.25, nu + 1e-9, floor_above});
    hi += 0.25;
    flo = bessel_j(nu, lo);
    fhi = bessel_j(nu, hi);
  }

  double x = std::min(std::max(guess, lo), hi);
  for (int it = 0; it < 100; ++it) {
    const BesselPair jp = bessel_j_pair(nu, x);
    if ((jp.j > 0.0) == (flo > 0.0)) {
      lo = x;
    } else {
      hi = x;
    }
    double next;
    if (jp.jp != 0.0) {
      next = x - jp.j / jp.jp;
      if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    } else {
      next = 0.5 * (lo + hi);
    }
    const double step = std::abs(next - x);
    x = next;
    if (step < 1e-14 * x || hi - lo < 4e-14 * x) {
      if (std::abs(x - guess) > 1.6) {
        throw ConvergenceError("bessel zero drifted from its estimate: nu = " +
                               std::to_string(nu) + ", k = " + std::to_string(k));
      }
      return x;
    }
  }
  throw ConvergenceError("bessel zero iteration cap reached for nu = " +
                         std::to_string(nu) + ", k = " + std::to_string(k));
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("gamma_fn requires x > 0");
  }
  return std::tgamma(x);
}

BesselPair bessel_j_pair(double nu, double x) {
  validate_order_arg(nu, x);
  if (nu == -0.5) {
    // Closed form; the recurrence machinery below covers nu >= 0 only.  This
    // order exists for the d = 1 isoperimetric constant.
    if (x == 0.0) throw std::invalid_argument("bessel_j(-1/2, x) requires x > 0");
    const double c = std::sqrt(2.0 / (M_PI * x));
    const double j = c * std::cos(x);
    return {j, -c * std::sin(x) - 0.5 * j / x};
  }
  if (x == 0.0) {
    if (nu == 0.0) return {1.0, 0.0};
    if (nu == 1.0) return {0.0, 0.5};
    if (nu < 1.0) return {0.0, std::numeric_limits<double>::infinity()};
    return {0.0, 0.0};
  }
  if (x < 2.0 || x * x <= 4.0 * (nu + 1.0)) return series_jnu(nu, x);
  return steed_jnu(nu, x);
}

double bessel_j(double nu, double x) { return bessel_j_pair(nu, x).j; }

double bessel_zero(double nu, int k) {
  if (k < 1 || k > 1000000) throw std::invalid_argument("zero index k out of range");
  if (nu == -0.5) return (k - 0.5) * M_PI;  // zeros of cos
  validate_order_arg(nu, 1.0);
  return refine_zero(nu, k, 0.0);
}

BesselZeroTable bessel_zero_table(double nu, int k_max) {
  if (k_max < 1 || k_max > 1000000) throw std::invalid_argument("zero count out of range");
  BesselZeroTable table{nu, {}};
  table.zeros.reserve(k_max);
  if (nu == -0.5) {
    for (int k = 1; k <= k_max; ++k) table.zeros.push_back((k - 0.5) * M_PI);
    return table;
  }
  validate_order_arg(nu, 1.0);
  double floor_above = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double z = refine_zero(nu, k, floor_above);
    table.zeros.push_back(z);
    floor_above = z + 0.5;  // gaps exceed 3; keeps brackets off the previous zero
  }
  return table;
}

}  // namespace spb
