#include "spb/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "spb/common.hpp"
#include "spb/special_functions.hpp"

namespace spb {

namespace {

constexpr int kMaxBoxCount = 1000000;
constexpr int kMaxBallCount = 100000;
constexpr std::size_t kEnumerationBudget = 8000000;

void check_count(int count, int cap) {
  if (count < 1 || count > cap) {
    throw std::invalid_argument("eigenvalue count out of range (1.." +
                                std::to_string(cap) + ")");
  }
}

// Depth-first walk over k_1..k_d; partial carries pi^2 sum so far, always
// accumulated in axis order so equal-sum tuples produce bit-equal lambdas.
void enumerate_axis(const std::vector<double>& lengths, std::size_t axis,
                    double partial, double cutoff, std::vector<int>& indices,
                    std::vector<BoxMode>& out) {
  const double a = lengths[axis];
  for (int k = 1;; ++k) {
    const double term = (M_PI * k / a) * (M_PI * k / a);
    const double sum = partial + term;
    if (sum > cutoff) break;
    indices[axis] = k;
    if (axis + 1 == lengths.size()) {
      if (out.size() >= kEnumerationBudget) {
        throw std::runtime_error("box mode enumeration budget exceeded");
      }
      out.push_back({sum, indices});
    } else {
      enumerate_axis(lengths, axis + 1, sum, cutoff, indices, out);
    }
  }
}

// Weyl count N(cutoff) ~ omega_d V cutoff^{d/2} / (2 pi)^d, inverted to seed
// the enumeration cutoff near the target count.
double weyl_cutoff_estimate(const std::vector<double>& lengths, int count) {
  const int d = static_cast<int>(lengths.size());
  double vol = 1.0;
  double lambda1 = 0.0;
  for (double a : lengths) {
    vol *= a;
    lambda1 += (M_PI / a) * (M_PI / a);
  }
  const double omega = dimension_constants(d).ball_volume;
  const double base = (count + 1) * std::pow(2.0 * M_PI, d) / (omega * vol);
  return 1.3 * power_ratio(base, 2.0, d) + 2.0 * lambda1;
}

struct BallLevel {
  double lambda;
  double order;
  int mult;
};

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::AnalyticBox: return "analytic-box";
    case Provenance::AnalyticBall: return "analytic-ball";
    case Provenance::FdmDiscrete: return "fdm-discrete";
    case Provenance::FdmExtrapolated: return "fdm-extrapolated";
  }
  return "unknown";
}

double eigenvalue(const Spectrum& s, int n) {
  if (n < 1 || n > s.complete_through ||
      static_cast<std::size_t>(n) > s.eigenvalues.size()) {
    throw std::invalid_argument("eigenvalue index " + std::to_string(n) +
                                " beyond completeness guarantee " +
                                std::to_string(s.complete_through));
  }
  return s.eigenvalues[n - 1];
}

namespace detail {

std::vector<BoxMode> box_modes_below(const std::vector<double>& lengths,
                                     double cutoff) {
  std::vector<BoxMode> out;
  std::vector<int> indices(lengths.size(), 0);
  enumerate_axis(lengths, 0, 0.0, cutoff, indices, out);
  std::sort(out.begin(), out.end(), [](const BoxMode& a, const BoxMode& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    return a.indices < b.indices;
  });
  return out;
}

}  // namespace detail

std::vector<BoxMode> box_modes(const Box& box, int count) {
  check_count(count, kMaxBoxCount);
  make_box(box.lengths);  // revalidate side lengths
  double cutoff = weyl_cutoff_estimate(box.lengths, count);
  for (;;) {
    std::vector<BoxMode> modes = detail::box_modes_below(box.lengths, cutoff);
    if (modes.size() >= static_cast<std::size_t>(count)) {
      modes.resize(count);
      return modes;
    }
    cutoff *= 2.0;
  }
}

Spectrum box_spectrum(const Box& box, int count) {
  std::vector<BoxMode> modes = box_modes(box, count);
  Spectrum s;
  s.domain = make_box(box.lengths);
  s.eigenvalues.reserve(modes.size());
  for (const BoxMode& m : modes) s.eigenvalues.push_back(m.lambda);
  s.provenance = Provenance::AnalyticBox;
  s.complete_through = count;
  return s;
}

Spectrum ball_spectrum(const Ball& ball, int count) {
  check_count(count, kMaxBallCount);
  Spectrum s;
  s.domain = make_ball(ball.d, ball.radius);
  s.provenance = Provenance::AnalyticBall;
  s.complete_through = count;

  if (ball.d == 1) {
    // Interval of length 2R.
    const double L = 2.0 * ball.radius;
    for (int k = 1; k <= count; ++k) {
      s.eigenvalues.push_back((k * M_PI / L) * (k * M_PI / L));
    }
    return s;
  }

  // Weyl seed for the zero cutoff J: N(J) ~ omega_d^2 J^d / (2 pi)^d.
  double J;
  if (ball.d == 2) {
    J = 2.0 * std::sqrt(1.3 * count) + 5.0;
  } else {
    J = std::cbrt(4.5 * M_PI * 1.3 * count) + 5.0;
  }

  for (;;) {
    std::vector<BallLevel> levels;
    long total = 0;
    for (int ord = 0;; ++ord) {
      const double nu = (ball.d == 2) ? ord : ord + 0.5;
      if (nu >= J) break;  // j_{nu,1} > nu, so no zero of this order fits
      const int mult = (ball.d == 2) ? (ord == 0 ? 1 : 2) : 2 * ord + 1;
      // McMahon inversion overestimates how many zeros fit below J.
      const int k_est = std::max(1, static_cast<int>(J / M_PI - 0.5 * nu + 0.25) + 2);
      BesselZeroTable table = bessel_zero_table(nu, k_est);
      while (table.zeros.back() <= J) {
        table.zeros.push_back(bessel_zero(nu, static_cast<int>(table.zeros.size()) + 1));
      }
      for (double z : table.zeros) {
        if (z > J) break;
        levels.push_back({(z / ball.radius) * (z / ball.radius), nu, mult});
        total += mult;
      }
    }
    if (total >= count) {
      std::sort(levels.begin(), levels.end(), [](const BallLevel& a, const BallLevel& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return a.order < b.order;
      });
      s.eigenvalues.clear();
      s.eigenvalues.reserve(count);
      for (const BallLevel& lv : levels) {
        for (int i = 0; i < lv.mult && s.eigenvalues.size() < static_cast<std::size_t>(count); ++i) {
          s.eigenvalues.push_back(lv.lambda);
        }
        if (s.eigenvalues.size() == static_cast<std::size_t>(count)) return s;
      }
    }
    J *= 2.0;
  }
}

Spectrum analytic_spectrum(const DomainSpec& domain, int count) {
  if (const Box* b = as_box(domain)) {
    Spectrum s = box_spectrum(*b, count);
    s.domain = domain;
    return s;
  }
  if (const Ball* b = as_ball(domain)) {
    Spectrum s = ball_spectrum(*b, count);
    s.domain = domain;
    return s;
  }
  throw std::invalid_argument("no closed-form spectrum for mask domains");
}

Spectrum scale_spectrum(const Spectrum& s, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("scale factor must be positive and finite");
  }
  if (s.provenance != Provenance::AnalyticBox && s.provenance != Provenance::AnalyticBall) {
    throw std::invalid_argument("scale_spectrum requires analytic provenance");
  }
  Spectrum out = s;
  if (const Box* b = as_box(s.domain)) {
    std::vector<double> lengths = b->lengths;
    for (double& a : lengths) a *= t;
    out.domain = make_box(std::move(lengths), s.domain.label);
  } else if (const Ball* b = as_ball(s.domain)) {
    out.domain = make_ball(b->d, b->radius * t, s.domain.label);
  }
  const double inv = 1.0 / (t * t);
  for (double& lam : out.eigenvalues) lam *= inv;
  return out;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::string out = "index,eigenvalue\n";
  char buf[64];
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i + 1, s.eigenvalues[i]);
    out += buf;
  }
  return out;
}

}  // namespace spb
