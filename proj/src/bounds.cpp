#include "spb/bounds.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "spb/common.hpp"
#include "spb/special_functions.hpp"

namespace spb {

namespace {

void check_index(long n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

void check_volume(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("volume must be positive and finite");
  }
}

void check_dim(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
}

int spectrum_dim(const Spectrum& s) { return dimension(s.domain); }

// Little-endian fixed-capacity product of 64-bit factors; enough for
// (n + l)^2 l^6 and n^8 at n, l <= 1e12.
struct BigProduct {
  std::array<std::uint64_t, 8> limb{};
  int size = 1;

  void multiply(std::uint64_t m) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < size; ++i) {
      const unsigned __int128 p = static_cast<unsigned __int128>(limb[i]) * m + carry;
      limb[i] = static_cast<std::uint64_t>(p);
      carry = p >> 64;
    }
    while (carry != 0) {
      limb[size++] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
  }

  int compare(const BigProduct& o) const {
    if (size != o.size) return size < o.size ? -1 : 1;
    for (int i = size - 1; i >= 0; --i) {
      if (limb[i] != o.limb[i]) return limb[i] < o.limb[i] ? -1 : 1;
    }
    return 0;
  }
};

BigProduct big_power(std::uint64_t base, int exponent) {
  BigProduct p;
  p.limb[0] = 1;
  for (int i = 0; i < exponent; ++i) p.multiply(base);
  return p;
}

}  // namespace

double index_power(double n, int d) {
  if (d == 1) return n * n;
  if (d == 2) return n;
  return power_ratio(n, 2.0, d);
}

LYConstant ly_constant(int d, double volume) {
  check_dim(d);
  check_volume(volume);
  const double omega = dimension_constants(d).ball_volume;
  const double denom = power_ratio(volume * omega, 2.0, d);
  return {d, volume, (static_cast<double>(d) / (d + 2)) * 4.0 * M_PI * M_PI / denom};
}

double liyau_sum_bound(long n, int d, double volume) {
  check_index(n, "n");
  return ly_constant(d, volume).value * n * index_power(static_cast<double>(n), d);
}

double liyau_single_bound(long n, int d, double volume) {
  check_index(n, "n");
  return ly_constant(d, volume).value * index_power(static_cast<double>(n), d);
}

double polya_bound(long n, int d, double volume) {
  check_index(n, "n");
  const double omega = dimension_constants(d).ball_volume;
  const double denom = power_ratio(volume * omega, 2.0, d);
  return 4.0 * M_PI * M_PI * index_power(static_cast<double>(n), d) / denom;
}

double weyl_ratio(const Spectrum& s, int n) {
  return eigenvalue(s, n) / polya_bound(n, spectrum_dim(s), volume(s.domain));
}

double melas_bound(long n, int d, double volume, double inertia, double c_melas) {
  check_index(n, "n");
  check_volume(volume);
  if (!(inertia > 0.0) || !std::isfinite(inertia)) {
    throw std::invalid_argument("moment of inertia must be positive and finite");
  }
  if (!(c_melas >= 0.0) || !std::isfinite(c_melas)) {
    throw std::invalid_argument("Melas constant must be nonnegative and finite");
  }
  return liyau_sum_bound(n, d, volume) + c_melas * (volume / inertia) * n;
}

double faber_krahn_bound(int d, double volume) {
  check_dim(d);
  check_volume(volume);
  const double j1 = bessel_zero(0.5 * d - 1.0, 1);
  const double denom = power_ratio(gamma_fn(0.5 * d + 1.0), 2.0, d) *
                       power_ratio(volume, 2.0, d);
  return M_PI * j1 * j1 / denom;
}

double one_point_rhs(const Spectrum& s, int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("one-point shift k must satisfy 1 <= k <= n");
  const double ln = eigenvalue(s, n);
  const double lk = eigenvalue(s, k);
  const double base = liyau_single_bound(n, spectrum_dim(s), volume(s.domain));
  return base + (static_cast<double>(k) / n) * (ln - lk);
}

double one_point_rearranged_lhs(const Spectrum& s, int n, int k) {
  if (k < 1 || k > n) throw std::invalid_argument("one-point shift k must satisfy 1 <= k <= n");
  const double ln = eigenvalue(s, n);
  const double lk = eigenvalue(s, k);
  return (static_cast<double>(n - k) / n) * ln + (static_cast<double>(k) / n) * lk;
}

BestShift one_point_best_shift(const Spectrum& s, int n) {
  eigenvalue(s, n);  // validates n against completeness
  const double ln = s.eigenvalues[n - 1];
  BestShift best{1, (1.0 / n) * (ln - s.eigenvalues[0])};
  for (int k = 2; k <= n; ++k) {
    const double impr = (static_cast<double>(k) / n) * (ln - s.eigenvalues[k - 1]);
    if (impr > best.improvement) best = {k, impr};
  }
  return best;
}

bool two_point_admissible(long n, long ell, int d) {
  check_index(n, "n");
  check_index(ell, "l");
  check_dim(d);
  if (d <= 6) {
    if (n > 1000000000000L || ell > 1000000000000L) {
      throw std::invalid_argument("two-point indices above 1e12 unsupported");
    }
    BigProduct lhs = big_power(static_cast<std::uint64_t>(n + ell), 2);
    for (int i = 0; i < d; ++i) lhs.multiply(static_cast<std::uint64_t>(ell));
    const BigProduct rhs = big_power(static_cast<std::uint64_t>(n), d + 2);
    return lhs.compare(rhs) >= 0;
  }
  // No exact-tie risk in the geometric range; d > 6 is served in log domain.
  const long double lhs = 2.0L * std::log(static_cast<long double>(n + ell)) +
                          d * std::log(static_cast<long double>(ell));
  const long double rhs = (d + 2) * std::log(static_cast<long double>(n));
  return lhs >= rhs;
}

double two_point_factor(long n, long ell, int d) {
  check_index(n, "n");
  check_index(ell, "l");
  check_dim(d);
  const double ratio = static_cast<double>(n) / (n + ell);
  return 2.0 + (static_cast<double>(n) / ell) * (1.0 - index_power(ratio, d));
}

double two_point_rhs(long n, long ell, int d, double volume) {
  if (!two_point_admissible(n, ell, d)) {
    throw std::invalid_argument(
        "inadmissible pair: (n+l)^(2/d) l < n^(1+2/d) for n = " + std::to_string(n) +
        ", l = " + std::to_string(ell) + ", d = " + std::to_string(d));
  }
  return two_point_factor(n, ell, d) * ly_constant(d, volume).value;
}

double two_point_lhs(const Spectrum& s, long n, long ell) {
  check_index(n, "n");
  check_index(ell, "l");
  if (n + ell > 1000000000L) throw std::invalid_argument("two-point index overflow");
  const int d = spectrum_dim(s);
  const double ln = eigenvalue(s, static_cast<int>(n));
  const double lnl = eigenvalue(s, static_cast<int>(n + ell));
  return ln / index_power(static_cast<double>(n), d) +
         lnl / index_power(static_cast<double>(n + ell), d);
}

double averaged_statistic(const Spectrum& s, int n) {
  eigenvalue(s, n);  // validates n
  const int d = spectrum_dim(s);
  double sum = 0.0;
  for (int m = 1; m <= n; ++m) {
    sum += s.eigenvalues[m - 1] / index_power(static_cast<double>(m), d);
  }
  return sum / n;
}

double concentration_factor(double eta, int d) {
  check_dim(d);
  if (!(eta >= 0.0) || !(eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in [0, 1]");
  }
  const double p = static_cast<double>(d + 2) / d;
  return std::pow(1.0 - eta, p) + p * eta;
}

PowerTangent power_tangent(double x, double y, int d) {
  check_dim(d);
  if (!(y >= 0.0) || !(x >= y) || !std::isfinite(x)) {
    throw std::invalid_argument("power_tangent requires x >= y >= 0");
  }
  const double p = static_cast<double>(d + 2) / d;
  PowerTangent r{};
  if (y == 0.0) {
    r.lhs = std::pow(x, p);
    r.rhs = 0.0;
  } else if (x == y) {
    r.lhs = 0.0;
    r.rhs = 0.0;
  } else {
    // y^p expm1(p log1p((x-y)/y)) equals x^p - y^p without the cancellation
    // of subtracting two large powers.
    const double t = x - y;
    r.lhs = std::pow(y, p) * std::expm1(p * std::log1p(t / y));
    r.rhs = p * std::pow(y, p - 1.0) * t;
  }
  r.holds = r.lhs >= r.rhs - 1e-14 * (std::abs(r.lhs) + std::abs(r.rhs));
  return r;
}

}  // namespace spb
