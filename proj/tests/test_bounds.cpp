#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "spb/bounds.hpp"
#include "spb/geometry.hpp"
#include "spb/spectrum.hpp"

using namespace spb;

namespace {
const double kPi = 3.14159265358979323846;
const double kPi2 = kPi * kPi;

Spectrum flat_spectrum(int n, double value) {
  Spectrum s;
  s.domain = make_box({1.0});
  s.eigenvalues.assign(n, value);
  s.complete_through = n;
  return s;
}
}  // namespace

TEST_CASE("the base constant in closed form") {
  // d=1, V=1: (1/3) 4 pi^2 / 4 = pi^2 / 3.
  CHECK(ly_constant(1, 1.0).value == doctest::Approx(kPi2 / 3.0).epsilon(1e-14));
  // d=2, V=1: (1/2) 4 pi^2 / pi = 2 pi.
  CHECK(ly_constant(2, 1.0).value == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  // d=2, V=pi (unit disk): 2.
  CHECK(ly_constant(2, kPi).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(ly_constant(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ly_constant(2, -1.0), std::invalid_argument);
}

TEST_CASE("the constant scales as an inverse squared length") {
  for (int d = 1; d <= 4; ++d) {
    double v = 1.7;
    double t = 2.3;
    double scaled = ly_constant(d, v * std::pow(t, d)).value;
    CHECK(scaled ==
          doctest::Approx(ly_constant(d, v).value / (t * t)).epsilon(1e-12));
  }
}

TEST_CASE("index power is exact in dimensions one and two") {
  CHECK(index_power(7.0, 1) == 49.0);
  CHECK(index_power(1000.0, 2) == 1000.0);
  CHECK(index_power(16.0, 4) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(index_power(8.0, 3) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("sum, single, and counting-function bounds fit together") {
  for (int d : {1, 2, 3}) {
    double v = d == 2 ? kPi : 1.4;
    for (long n : {1L, 2L, 17L, 1000L}) {
      double c = ly_constant(d, v).value;
      CHECK(liyau_sum_bound(n, d, v) ==
            doctest::Approx(c * n * index_power(static_cast<double>(n), d))
                .epsilon(1e-13));
      // single = sum / n pointwise.
      CHECK(liyau_single_bound(n, d, v) ==
            doctest::Approx(liyau_sum_bound(n, d, v) / n).epsilon(1e-13));
      // single = (d/(d+2)) * polya.
      CHECK(liyau_single_bound(n, d, v) ==
            doctest::Approx(polya_bound(n, d, v) * d / (d + 2.0)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(liyau_sum_bound(0, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(polya_bound(-1, 2, 1.0), std::invalid_argument);
}

TEST_CASE("the counting bound is an equality on the interval") {
  Spectrum s = box_spectrum(Box{{1.0}}, 50);
  for (int n = 1; n <= 50; ++n) {
    CHECK(polya_bound(n, 1, 1.0) == doctest::Approx(kPi2 * n * n).epsilon(1e-14));
    CHECK(weyl_ratio(s, n) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("weyl ratio exceeds one on the square and tends down toward it") {
  Spectrum s = box_spectrum(Box{{1.0, 1.0}}, 3000);
  CHECK(weyl_ratio(s, 1) == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  for (int n : {10, 100, 1000, 3000}) CHECK(weyl_ratio(s, n) > 1.0);
  CHECK(weyl_ratio(s, 3000) < weyl_ratio(s, 1));
}

TEST_CASE("moment-corrected sum bound") {
  double v = 1.0, inertia = 1.0 / 6.0;
  for (long n : {1L, 5L, 40L}) {
    double base = liyau_sum_bound(n, 2, v);
    CHECK(melas_bound(n, 2, v, inertia, 0.0) == doctest::Approx(base));
    double c = 0.31;
    CHECK(melas_bound(n, 2, v, inertia, c) ==
          doctest::Approx(base + c * (v / inertia) * n).epsilon(1e-13));
    CHECK(melas_bound(n, 2, v, inertia, 0.5) > melas_bound(n, 2, v, inertia, 0.1));
  }
}

TEST_CASE("first-eigenvalue domain bound and its equality cases") {
  // d=1: the bound equals pi^2 on the unit interval, which is the 1-ball.
  CHECK(faber_krahn_bound(1, 1.0) == doctest::Approx(kPi2).epsilon(1e-12));
  // d=2, V=pi: the unit disk attains j_{0,1}^2.
  double j01 = 2.4048255576957729;
  CHECK(faber_krahn_bound(2, kPi) == doctest::Approx(j01 * j01).epsilon(1e-12));
  // Strict on the unit square.
  CHECK(faber_krahn_bound(2, 1.0) < 2.0 * kPi2);
  CHECK(faber_krahn_bound(2, 1.0) > 0.9 * 2.0 * kPi2);
  // The bound only grows when volume shrinks.
  CHECK(faber_krahn_bound(3, 0.5) > faber_krahn_bound(3, 1.0));
}

TEST_CASE("shifted single bound: forms agree and the shift helps") {
  Spectrum s = box_spectrum(Box{{1.0, 1.0}}, 200);
  for (int n : {1, 2, 50, 200}) {
    for (int k = 1; k <= n; k += std::max(1, n / 7)) {
      double rhs = one_point_rhs(s, n, k);
      double lhs = one_point_rearranged_lhs(s, n, k);
      double single = liyau_single_bound(n, 2, 1.0);
      // lambda_n - rhs and lhs - single are the same inequality gap.
      CHECK(eigenvalue(s, n) - rhs ==
            doctest::Approx(lhs - single).epsilon(1e-10));
    }
    // k = n recovers the unshifted bound.
    CHECK(one_point_rhs(s, n, n) ==
          doctest::Approx(liyau_single_bound(n, 2, 1.0)).epsilon(1e-13));
  }
  BestShift best = one_point_best_shift(s, 100);
  CHECK(best.k >= 1);
  CHECK(best.k <= 100);
  CHECK(best.improvement > 0.0);
  // Exhaustive maximum agrees.
  double max_impr = 0.0;
  int arg = 1;
  for (int k = 1; k <= 100; ++k) {
    double impr = (static_cast<double>(k) / 100) *
                  (eigenvalue(s, 100) - eigenvalue(s, k));
    if (impr > max_impr + 1e-15) {
      max_impr = impr;
      arg = k;
    }
  }
  CHECK(best.k == arg);
  CHECK(best.improvement == doctest::Approx(max_impr).epsilon(1e-13));
}

TEST_CASE("best shift tie-breaking and degenerate cases") {
  Spectrum flat = flat_spectrum(10, 4.0);
  BestShift b = one_point_best_shift(flat, 10);
  // Every k gives improvement 0; ties resolve to the smallest k.
  CHECK(b.k == 1);
  CHECK(b.improvement == 0.0);
  BestShift first = one_point_best_shift(flat, 1);
  CHECK(first.k == 1);
  CHECK(first.improvement == 0.0);
  CHECK_THROWS_AS(one_point_rhs(flat, 5, 6), std::invalid_argument);
  CHECK_THROWS_AS(one_point_rhs(flat, 5, 0), std::invalid_argument);
}

TEST_CASE("pair admissibility is exact at the boundary") {
  // d=2, n=1000: (1000+618)^2 618^2 < 1000^4 <= (1000+619)^2 619^2.
  CHECK(!two_point_admissible(1000, 618, 2));
  CHECK(two_point_admissible(1000, 619, 2));
  // l = n is always admissible.
  for (int d = 1; d <= 6; ++d)
    for (long n : {1L, 7L, 1000L, 123456L}) CHECK(two_point_admissible(n, n, d));
  // Monotone in l.
  for (long n : {10L, 500L}) {
    bool seen = false;
    for (long l = 1; l <= n; ++l) {
      bool a = two_point_admissible(n, l, 3);
      if (seen) CHECK(a);
      seen = seen || a;
    }
    CHECK(seen);
  }
}

TEST_CASE("pair admissibility survives indices beyond double precision") {
  // Near the d=2 boundary at n = 10^11 the compared products need ~147 bits.
  long n = 100000000000L;
  long lo = 61803398874L;  // floor(0.618... n): straddles the threshold
  bool below = two_point_admissible(n, lo, 2);
  bool above = two_point_admissible(n, lo + 2, 2);
  CHECK(!below);
  CHECK(above);
  CHECK_THROWS_AS(two_point_admissible(0, 5, 2), std::invalid_argument);
  CHECK_THROWS_AS(two_point_admissible(5, 0, 2), std::invalid_argument);
}

TEST_CASE("pair factor values") {
  // l = n: 3 - 2^{-2/d}.
  for (int d : {1, 2, 3, 6}) {
    double expect = 3.0 - std::pow(2.0, -2.0 / d);
    CHECK(two_point_factor(1000, 1000, d) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(two_point_factor(1000, 1000, d) > 2.0);
  }
  CHECK(two_point_factor(1000, 1000, 2) == doctest::Approx(2.5).epsilon(1e-15));
  // Large l: factor tends to 2 from above.
  CHECK(two_point_factor(10, 100000, 2) > 2.0);
  CHECK(two_point_factor(10, 100000, 2) < 2.001);
}

TEST_CASE("pair bound right-hand side and the equal-shift anchor") {
  // d=2, l=n: rhs = 2.5 * 2 pi / V = 5 pi / V.
  for (double v : {1.0, 2.0, kPi}) {
    CHECK(two_point_rhs(1000, 1000, 2, v) ==
          doctest::Approx(5.0 * kPi / v).epsilon(1e-13));
  }
  CHECK_THROWS_AS(two_point_rhs(1000, 618, 2, 1.0), std::invalid_argument);
}

TEST_CASE("pair bound left-hand side on the interval") {
  Spectrum s = box_spectrum(Box{{1.0}}, 100);
  // lambda_n / n^2 = pi^2 for every n, so the lhs is 2 pi^2 for any pair.
  for (long n : {1L, 10L, 40L}) {
    CHECK(two_point_lhs(s, n, n) == doctest::Approx(2.0 * kPi2).epsilon(1e-13));
    CHECK(two_point_lhs(s, n, 50L) == doctest::Approx(2.0 * kPi2).epsilon(1e-13));
  }
  CHECK_THROWS_AS(two_point_lhs(s, 60, 50), std::invalid_argument);
}

TEST_CASE("running average statistic") {
  Spectrum interval = box_spectrum(Box{{1.0}}, 300);
  for (int n : {1, 2, 100, 300}) {
    CHECK(averaged_statistic(interval, n) == doctest::Approx(kPi2).epsilon(1e-13));
    CHECK(averaged_statistic(interval, n) / ly_constant(1, 1.0).value ==
          doctest::Approx(3.0).epsilon(1e-13));
  }
  Spectrum square = box_spectrum(Box{{1.0, 1.0}}, 10);
  CHECK(averaged_statistic(square, 1) == doctest::Approx(2.0 * kPi2).epsilon(1e-14));
  CHECK(averaged_statistic(square, 1) / ly_constant(2, 1.0).value ==
        doctest::Approx(kPi).epsilon(1e-13));
  CHECK_THROWS_AS(averaged_statistic(square, 0), std::invalid_argument);
  CHECK_THROWS_AS(averaged_statistic(square, 11), std::invalid_argument);
}

TEST_CASE("mass-deficit factor endpoints are exact") {
  for (int d = 1; d <= 10; ++d) {
    CHECK(concentration_factor(0.0, d) == 1.0);
    CHECK(concentration_factor(1.0, d) == (d + 2.0) / d);
    // Increasing in eta.
    double prev = 1.0;
    for (double eta = 0.05; eta <= 1.0; eta += 0.05) {
      double f = concentration_factor(eta, d);
      CHECK(f >= prev);
      prev = f;
    }
  }
  CHECK_THROWS_AS(concentration_factor(-0.01, 2), std::invalid_argument);
  CHECK_THROWS_AS(concentration_factor(1.01, 2), std::invalid_argument);
}

TEST_CASE("tangent-line inequality for the index power") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> logu(-6.0, 6.0);
  std::uniform_int_distribution<int> dd(1, 10);
  for (int trial = 0; trial < 20000; ++trial) {
    int d = dd(rng);
    double y = std::exp(logu(rng));
    double x = y + std::exp(logu(rng));
    PowerTangent pt = power_tangent(x, y, d);
    CHECK(pt.holds);
    CHECK(pt.lhs >= pt.rhs - 1e-12 * std::abs(pt.lhs));
  }
  // Equality at x = y.
  for (int d = 1; d <= 10; ++d) {
    PowerTangent eq = power_tangent(3.7, 3.7, d);
    CHECK(eq.holds);
    CHECK(std::abs(eq.lhs - eq.rhs) <= 1e-12 * std::max(1.0, std::abs(eq.lhs)));
  }
  // y = 0 degenerates to x^p >= 0.
  PowerTangent edge = power_tangent(2.0, 0.0, 2);
  CHECK(edge.holds);
  CHECK_THROWS_AS(power_tangent(1.0, 2.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(power_tangent(-1.0, -2.0, 2), std::invalid_argument);
}

TEST_CASE("evaluation record accessors") {
  BoundEvaluation ev;
  ev.kind = "liyau-sum";
  ev.n = 10;
  ev.lhs = 6.0;
  ev.rhs = 4.0;
  ev.verified = true;
  CHECK(ev.margin() == doctest::Approx(2.0));
  CHECK(ev.sharpness() == doctest::Approx(1.5));
  CHECK(ev.k == -1);
  CHECK(ev.ell == -1);
}
