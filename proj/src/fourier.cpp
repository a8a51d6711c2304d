#include "spb/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "spb/common.hpp"
#include "spb/fdm.hpp"

namespace spb {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kBoxDefectTol = 0.005;
constexpr double kMaskDefectTol = 0.05;
constexpr long kMaxGridCells = 60000000;

double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    double z2 = z * z;
    return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0);
  }
  return std::sin(z) / z;
}

// (2/a) w^2 4 sin^2((xi -+ w) a/2) / ((xi - w)^2 (xi + w)^2), w = k pi / a,
// written with a sinc against the nearer pole so both removable singularities
// stay finite.
double axis_ft_sq(double a, int k, double xi) {
  double w = k * M_PI / a;
  double dm = xi - w;
  double dp = xi + w;
  if (std::abs(dm) <= std::abs(dp)) {
    double s = sinc(0.5 * a * dm);
    return 2.0 * a * w * w * s * s / (dp * dp);
  }
  double s = sinc(0.5 * a * dp);
  return 2.0 * a * w * w * s * s / (dm * dm);
}

void check_grid(const GridSpec& grid, int d) {
  if (!(grid.extent > 0.0) || !std::isfinite(grid.extent)) {
    throw std::invalid_argument("grid extent must be positive");
  }
  if (grid.points < 2 || grid.points % 2 != 0) {
    throw std::invalid_argument("grid points must be even and at least 2");
  }
  double cells = std::pow(static_cast<double>(grid.points), d);
  if (cells > static_cast<double>(kMaxGridCells)) {
    throw std::invalid_argument("frequency grid too large: " +
                                std::to_string(grid.points) + "^" +
                                std::to_string(d) + " cells");
  }
}

double grid_coord(const GridSpec& grid, long j) {
  return -grid.extent + (j + 0.5) * grid.step();
}

int profile_dimension(const DomainSpec& domain) {
  int d = dimension(domain);
  if (d > 2) {
    throw std::invalid_argument("spectral mass profiles support d <= 2 only");
  }
  if (as_ball(domain) != nullptr) {
    throw std::invalid_argument("spectral mass profiles are not available for ball domains");
  }
  return d;
}

void finish_profile(SpectralMassProfile& p, long double total_cells, double max_g) {
  int d = p.d;
  double vol = std::pow(p.grid.step(), d);
  p.total_mass = static_cast<double>(total_cells) * vol;
  if (p.k == 0) {
    p.plancherel_defect = 0.0;
    return;
  }
  double gcap = p.approximate ? 1.0 + kMaskDefectTol : 1.0 + 1e-6;
  if (max_g > gcap) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "phase-space bound violated: max g = %.17g exceeds 1", max_g);
    throw std::runtime_error(buf);
  }
  double target = std::pow(kTwoPi, d) * p.k / volume(p.domain);
  p.plancherel_defect = std::abs(p.total_mass - target) / target;
  double tol = p.approximate ? kMaskDefectTol : kBoxDefectTol;
  if (p.plancherel_defect > tol) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "plancherel mass defect %.4g exceeds tolerance %.4g "
                  "(quadrature %.17g, expected %.17g)",
                  p.plancherel_defect, tol, p.total_mass, target);
    throw QuadratureError(buf);
  }
}

SpectralMassProfile box_profile(const DomainSpec& domain, const Box& box, int k,
                                const GridSpec& grid) {
  int d = static_cast<int>(box.lengths.size());
  SpectralMassProfile p;
  p.domain = domain;
  p.d = d;
  p.k = k;
  p.radius = concentration_radius(domain, k);
  p.grid = grid;
  long P = grid.points;
  p.values.assign(static_cast<std::size_t>(std::pow(static_cast<double>(P), d)), 0.0);
  if (k == 0) {
    finish_profile(p, 0.0L, 0.0);
    return p;
  }

  std::vector<BoxMode> modes = box_modes(box, k);
  // Per-axis tables: axis_tab[axis][mode index][grid point].
  std::vector<std::vector<std::vector<double>>> axis_tab(d);
  for (int ax = 0; ax < d; ++ax) {
    int maxk = 0;
    for (const BoxMode& m : modes) maxk = std::max(maxk, m.indices[ax]);
    axis_tab[ax].assign(maxk + 1, {});
    for (int v = 1; v <= maxk; ++v) {
      axis_tab[ax][v].resize(P);
      for (long j = 0; j < P; ++j) {
        axis_tab[ax][v][j] = axis_ft_sq(box.lengths[ax], v, grid_coord(grid, j));
      }
    }
  }

  double inv_v = 1.0 / volume(domain);
  long double total = 0.0L;
  double max_g = 0.0;
  if (d == 1) {
    for (long j = 0; j < P; ++j) {
      double g = 0.0;
      for (const BoxMode& m : modes) g += axis_tab[0][m.indices[0]][j];
      g *= inv_v;
      p.values[j] = g;
      total += g;
      max_g = std::max(max_g, g);
    }
  } else {
    std::vector<double> row(modes.size());
    for (long j0 = 0; j0 < P; ++j0) {
      for (std::size_t m = 0; m < modes.size(); ++m) {
        row[m] = axis_tab[0][modes[m].indices[0]][j0];
      }
      double* out = p.values.data() + j0 * P;
      for (long j1 = 0; j1 < P; ++j1) {
        double g = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) {
          g += row[m] * axis_tab[1][modes[m].indices[1]][j1];
        }
        g *= inv_v;
        out[j1] = g;
        total += g;
        max_g = std::max(max_g, g);
      }
    }
  }
  finish_profile(p, total, max_g);
  return p;
}

// Piecewise-constant semidiscrete transform of FDM eigenvectors.  A unit
// Euclidean vector v corresponds to the L2-normalized cell function v/h, so
// uhat(xi) = h sinc(xi_x h/2) sinc(xi_y h/2) sum_c v_c e^{-i xi.c}.
struct MaskTransform {
  const Mask2D* mask = nullptr;
  double h = 0.0;
  std::vector<long> cell_x, cell_y;  // occupied cells, solver unknown order
  const Eigen::MatrixXd* vectors = nullptr;

  double cell_cx(std::size_t i) const { return (cell_x[i] + 0.5) * h; }
  double cell_cy(std::size_t i) const { return (cell_y[i] + 0.5) * h; }

  // |uhat(xi)|^2 of one mode at an arbitrary frequency.
  double point_ft_sq(int mode, double xix, double xiy) const {
    std::complex<double> s(0.0, 0.0);
    const double* v = vectors->col(mode).data();
    for (std::size_t i = 0; i < cell_x.size(); ++i) {
      s += v[i] * std::polar(1.0, -(xix * cell_cx(i) + xiy * cell_cy(i)));
    }
    double amp = h * sinc(0.5 * xix * h) * sinc(0.5 * xiy * h);
    return amp * amp * std::norm(s);
  }

  // Full-grid |uhat|^2 of one mode via a separable two-stage sum.
  void grid_ft_sq(int mode, const GridSpec& grid, std::vector<double>& out) const {
    long P = grid.points;
    long H = mask->height;
    const double* v = vectors->col(mode).data();
    // Stage 1: per mask row, transform along x; stored transposed as [p][row].
    std::vector<std::complex<double>> rowft(static_cast<std::size_t>(P) * H,
                                            {0.0, 0.0});
    for (std::size_t i = 0; i < cell_x.size(); ++i) {
      double c = cell_cx(i);
      std::complex<double> z = std::polar(1.0, -grid_coord(grid, 0) * c);
      std::complex<double> rot = std::polar(1.0, -grid.step() * c);
      long y = cell_y[i];
      for (long pp = 0; pp < P; ++pp) {
        rowft[static_cast<std::size_t>(pp) * H + y] += v[i] * z;
        z *= rot;
      }
    }
    // Stage 2: transform across rows for every (xi_x, xi_y) pair.
    std::vector<std::complex<double>> colph(static_cast<std::size_t>(P) * H);
    for (long q = 0; q < P; ++q) {
      double xiy = grid_coord(grid, q);
      for (long y = 0; y < H; ++y) {
        colph[static_cast<std::size_t>(q) * H + y] =
            std::polar(1.0, -xiy * (y + 0.5) * h);
      }
    }
    std::vector<double> sx(P);
    for (long pp = 0; pp < P; ++pp) sx[pp] = sinc(0.5 * grid_coord(grid, pp) * h);
    for (long pp = 0; pp < P; ++pp) {
      const std::complex<double>* col = rowft.data() + static_cast<std::size_t>(pp) * H;
      for (long q = 0; q < P; ++q) {
        const std::complex<double>* ph = colph.data() + static_cast<std::size_t>(q) * H;
        std::complex<double> s(0.0, 0.0);
        for (long y = 0; y < H; ++y) s += col[y] * ph[y];
        double amp = h * sx[pp] * sx[q];
        out[static_cast<std::size_t>(pp) * P + q] = amp * amp * std::norm(s);
      }
    }
  }
};

MaskTransform make_transform(const Mask2D& mask, const DiscreteLaplacian& lap,
                             const Eigen::MatrixXd& vectors) {
  MaskTransform t;
  t.mask = &mask;
  t.h = mask.h;
  t.vectors = &vectors;
  t.cell_x.resize(lap.size());
  t.cell_y.resize(lap.size());
  for (long y = 0; y < mask.height; ++y) {
    for (long x = 0; x < mask.width; ++x) {
      long idx = lap.cell_index(x, y);
      if (idx >= 0) {
        t.cell_x[idx] = x;
        t.cell_y[idx] = y;
      }
    }
  }
  return t;
}

SpectralMassProfile mask_profile(const DomainSpec& domain, int k,
                                 const GridSpec& grid, const MaskTransform& t) {
  SpectralMassProfile p;
  p.domain = domain;
  p.d = 2;
  p.k = k;
  p.radius = concentration_radius(domain, k);
  p.grid = grid;
  p.approximate = true;
  long P = grid.points;
  p.values.assign(static_cast<std::size_t>(P) * P, 0.0);
  if (k == 0) {
    finish_profile(p, 0.0L, 0.0);
    return p;
  }
  double inv_v = 1.0 / volume(domain);
  std::vector<double> mode_vals(static_cast<std::size_t>(P) * P);
  for (int m = 0; m < k; ++m) {
    t.grid_ft_sq(m, grid, mode_vals);
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      p.values[i] += inv_v * mode_vals[i];
    }
  }
  long double total = 0.0L;
  double max_g = 0.0;
  for (double g : p.values) {
    total += g;
    max_g = std::max(max_g, g);
  }
  finish_profile(p, total, max_g);
  return p;
}

// Midpoint quadrature of stored grid values over B(0,r); annulus cells within
// 2 steps of the boundary get one dyadic subdivision, subcells keeping the
// parent's value and counting by their own center.
double values_mass_in_ball(const SpectralMassProfile& p, double r) {
  const GridSpec& grid = p.grid;
  long P = grid.points;
  double step = grid.step();
  double vol = std::pow(step, p.d);
  double rin = r - 2.0 * step;
  double rout = r + 2.0 * step;
  long double mass = 0.0L;
  if (p.d == 1) {
    for (long j = 0; j < P; ++j) {
      double x = grid_coord(grid, j);
      double rho = std::abs(x);
      if (rho <= rin) {
        mass += p.values[j] * vol;
      } else if (rho < rout) {
        int cnt = 0;
        for (int sx = -1; sx <= 1; sx += 2) {
          if (std::abs(x + sx * 0.25 * step) <= r) ++cnt;
        }
        mass += p.values[j] * vol * cnt / 2.0;
      }
    }
  } else {
    double rin2 = rin > 0.0 ? rin * rin : -1.0;
    double rout2 = rout * rout;
    double r2 = r * r;
    for (long j0 = 0; j0 < P; ++j0) {
      double x = grid_coord(grid, j0);
      const double* row = p.values.data() + j0 * P;
      for (long j1 = 0; j1 < P; ++j1) {
        double y = grid_coord(grid, j1);
        double rho2 = x * x + y * y;
        if (rho2 <= rin2) {
          mass += row[j1] * vol;
        } else if (rho2 < rout2) {
          int cnt = 0;
          for (int sx = -1; sx <= 1; sx += 2) {
            double xs = x + sx * 0.25 * step;
            for (int sy = -1; sy <= 1; sy += 2) {
              double ys = y + sy * 0.25 * step;
              if (xs * xs + ys * ys <= r2) ++cnt;
            }
          }
          mass += row[j1] * vol * cnt / 4.0;
        }
      }
    }
  }
  return static_cast<double>(mass);
}

// Same geometry with a point evaluator instead of stored values.
double fn_mass_in_ball(const GridSpec& grid, int d, double r,
                       const std::function<double(double, double)>& f) {
  long P = grid.points;
  double step = grid.step();
  double vol = std::pow(step, d);
  double rin = r - 2.0 * step;
  double rout = r + 2.0 * step;
  long double mass = 0.0L;
  if (d == 1) {
    for (long j = 0; j < P; ++j) {
      double x = grid_coord(grid, j);
      double rho = std::abs(x);
      if (rho <= rin) {
        mass += f(x, 0.0) * vol;
      } else if (rho < rout) {
        for (int sx = -1; sx <= 1; sx += 2) {
          double xs = x + sx * 0.25 * step;
          if (std::abs(xs) <= r) mass += f(xs, 0.0) * vol / 2.0;
        }
      }
    }
  } else {
    double rin2 = rin > 0.0 ? rin * rin : -1.0;
    double rout2 = rout * rout;
    double r2 = r * r;
    for (long j0 = 0; j0 < P; ++j0) {
      double x = grid_coord(grid, j0);
      for (long j1 = 0; j1 < P; ++j1) {
        double y = grid_coord(grid, j1);
        double rho2 = x * x + y * y;
        if (rho2 <= rin2) {
          mass += f(x, y) * vol;
        } else if (rho2 < rout2) {
          for (int sx = -1; sx <= 1; sx += 2) {
            double xs = x + sx * 0.25 * step;
            for (int sy = -1; sy <= 1; sy += 2) {
              double ys = y + sy * 0.25 * step;
              if (xs * xs + ys * ys <= r2) mass += f(xs, ys) * vol / 4.0;
            }
          }
        }
      }
    }
  }
  return static_cast<double>(mass);
}

double relative_deflation(const Spectrum& s, int k) {
  if (s.provenance != Provenance::FdmDiscrete &&
      s.provenance != Provenance::FdmExtrapolated) {
    return 0.0;
  }
  const Mask2D* mask = as_mask(s.domain);
  if (mask == nullptr) return 0.0;
  double lam = s.eigenvalues[static_cast<std::size_t>(k) - 1];
  return deflation_tolerance(lam, mask->h, s.provenance) / lam;
}

GridSpec box_default_grid(const Box& box, int k, double r) {
  int d = static_cast<int>(box.lengths.size());
  std::vector<BoxMode> modes = box_modes(box, k + 1);
  double a_min = *std::min_element(box.lengths.begin(), box.lengths.end());
  double extent = 3.0 * r;
  // Transform tails decay like 8 w^2 / (a xi^4); choose L so the truncated
  // fraction stays under 0.2% split across axes.
  double delta = 0.002 / d;
  for (int ax = 0; ax < d; ++ax) {
    double wmax = 0.0;
    for (const BoxMode& m : modes) {
      wmax = std::max(wmax, m.indices[ax] * M_PI / box.lengths[ax]);
    }
    double tail = std::cbrt(8.0 * wmax * wmax /
                            (3.0 * M_PI * box.lengths[ax] * delta));
    extent = std::max(extent, wmax + tail);
  }
  GridSpec grid;
  grid.extent = extent;
  double step_target = M_PI / (64.0 * a_min);
  grid.points = static_cast<int>(2.0 * std::ceil(extent / step_target));
  return grid;
}

GridSpec mask_default_grid(const Mask2D& mask, double r) {
  double dia = std::max(mask.width, mask.height) * mask.h;
  GridSpec grid;
  grid.extent = std::max(3.0 * r, 8.0 * M_PI / dia);
  double step_target = M_PI / (32.0 * dia);
  grid.points = static_cast<int>(2.0 * std::ceil(grid.extent / step_target));
  return grid;
}

}  // namespace

double box_mode_ft_sq(const std::vector<double>& lengths,
                      const std::vector<int>& mode, const std::vector<double>& xi) {
  if (lengths.empty() || mode.size() != lengths.size() ||
      xi.size() != lengths.size()) {
    throw std::invalid_argument("mode and frequency must match the box dimension");
  }
  double out = 1.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (!(lengths[i] > 0.0) || mode[i] < 1) {
      throw std::invalid_argument("box lengths must be positive and mode indices >= 1");
    }
    out *= axis_ft_sq(lengths[i], mode[i], xi[i]);
  }
  return out;
}

double concentration_radius(const DomainSpec& domain, int k) {
  if (k < 0) throw std::invalid_argument("mode count must be nonnegative");
  if (k == 0) return 0.0;
  int d = dimension(domain);
  double v = volume(domain);
  double wd = dimension_constants(d).ball_volume;
  return power_ratio(std::pow(kTwoPi, d) * k / (v * wd), 1, d);
}

GridSpec default_grid(const DomainSpec& domain, int k) {
  int d = profile_dimension(domain);
  (void)d;
  double r = concentration_radius(domain, std::max(k, 1));
  if (const Box* b = as_box(domain)) {
    return box_default_grid(*b, std::max(k, 1), r);
  }
  return mask_default_grid(*as_mask(domain), r);
}

SpectralMassProfile g_profile(const DomainSpec& domain, int k) {
  return g_profile(domain, k, default_grid(domain, k));
}

SpectralMassProfile g_profile(const DomainSpec& domain, int k, const GridSpec& grid) {
  if (k < 0) throw std::invalid_argument("mode count must be nonnegative");
  int d = profile_dimension(domain);
  check_grid(grid, d);
  if (const Box* b = as_box(domain)) {
    return box_profile(domain, *b, k, grid);
  }
  const Mask2D& mask = *as_mask(domain);
  if (k == 0) {
    MaskTransform empty;
    return mask_profile(domain, 0, grid, empty);
  }
  DiscreteLaplacian lap(domain);
  SolverConfig cfg;
  cfg.count = k;
  FdmEigen eig = smallest_eigs(lap, cfg);
  MaskTransform t = make_transform(mask, lap, eig.vectors);
  return mask_profile(domain, k, grid, t);
}

std::string profile_to_tsv(const SpectralMassProfile& profile) {
  std::string out;
  out.reserve(profile.values.size() * 40 + 32);
  char buf[96];
  if (profile.d == 1) {
    out += "xi_1\tg\n";
    for (long j = 0; j < profile.grid.points; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\n", grid_coord(profile.grid, j),
                    profile.values[j]);
      out += buf;
    }
  } else {
    out += "xi_1\txi_2\tg\n";
    long P = profile.grid.points;
    for (long j0 = 0; j0 < P; ++j0) {
      for (long j1 = 0; j1 < P; ++j1) {
        std::snprintf(buf, sizeof(buf), "%.17g\t%.17g\t%.17g\n",
                      grid_coord(profile.grid, j0), grid_coord(profile.grid, j1),
                      profile.values[j0 * P + j1]);
        out += buf;
      }
    }
  }
  return out;
}

EtaDiagnostic eta(const SpectralMassProfile& profile, const Spectrum& s) {
  int k = profile.k;
  if (k < 1) throw std::invalid_argument("eta requires k >= 1");
  if (s.eigenvalues.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("spectrum does not cover the first k eigenvalues");
  }
  double r = profile.radius;
  if (!(r <= profile.grid.extent)) {
    throw std::invalid_argument("concentration radius exceeds the grid extent");
  }
  int d = profile.d;
  double v = volume(profile.domain);

  EtaDiagnostic diag;
  diag.k = k;
  diag.d = d;
  diag.radius = r;
  diag.approximate = profile.approximate;
  diag.mass_inside = values_mass_in_ball(profile, r);
  double target = std::pow(kTwoPi, d) * k / v;
  diag.eta = std::clamp(1.0 - diag.mass_inside / target, 0.0, 1.0);
  diag.shell_radius = r * power_ratio(1.0 + diag.eta, 1, d);
  long double sl = 0.0L;
  for (int m = 0; m < k; ++m) sl += s.eigenvalues[m];
  diag.sum_lambda = static_cast<double>(sl);
  diag.factor = concentration_factor(diag.eta, d);
  diag.sum_rhs = diag.factor * liyau_sum_bound(k, d, v);
  diag.deflation = relative_deflation(s, k);
  diag.sum_holds = diag.sum_lambda >= diag.sum_rhs * (1.0 - diag.deflation);
  diag.lambda_k = s.eigenvalues[static_cast<std::size_t>(k) - 1];
  diag.single_rhs = diag.factor * liyau_single_bound(k, d, v);
  diag.single_holds = diag.lambda_k >= diag.single_rhs * (1.0 - diag.deflation);
  return diag;
}

std::string eta_to_json(const EtaDiagnostic& diag) {
  char buf[1024];
  std::snprintf(
      buf, sizeof(buf),
      "{\"k\":%d,\"d\":%d,\"radius\":%.17g,\"shell_radius\":%.17g,"
      "\"eta\":%.17g,\"mass_inside\":%.17g,\"sum_lambda\":%.17g,"
      "\"factor\":%.17g,\"sum_rhs\":%.17g,\"sum_holds\":%s,"
      "\"lambda_k\":%.17g,\"single_rhs\":%.17g,\"single_holds\":%s,"
      "\"next_mode_outside\":%.17g,\"approximate\":%s,\"deflation\":%.17g}",
      diag.k, diag.d, diag.radius, diag.shell_radius, diag.eta, diag.mass_inside,
      diag.sum_lambda, diag.factor, diag.sum_rhs, diag.sum_holds ? "true" : "false",
      diag.lambda_k, diag.single_rhs, diag.single_holds ? "true" : "false",
      diag.next_mode_outside, diag.approximate ? "true" : "false", diag.deflation);
  return buf;
}

EtaDiagnostic eta_diagnostic(const DomainSpec& domain, int k) {
  return eta_diagnostic(domain, k, default_grid(domain, k));
}

EtaDiagnostic eta_diagnostic(const DomainSpec& domain, int k, const GridSpec& grid) {
  if (k < 1) throw std::invalid_argument("eta requires k >= 1");
  int d = profile_dimension(domain);
  check_grid(grid, d);
  double twopi_d = std::pow(kTwoPi, d);
  if (const Box* b = as_box(domain)) {
    SpectralMassProfile profile = box_profile(domain, *b, k, grid);
    Spectrum s = box_spectrum(*b, k);
    s.domain = domain;
    EtaDiagnostic diag = eta(profile, s);
    std::vector<BoxMode> modes = box_modes(*b, k + 1);
    const BoxMode& next = modes.back();
    auto f = [&](double x, double y) {
      std::vector<double> xi{x};
      if (d == 2) xi.push_back(y);
      return box_mode_ft_sq(b->lengths, next.indices, xi);
    };
    double inside = fn_mass_in_ball(grid, d, profile.radius, f);
    diag.next_mode_outside = std::clamp(1.0 - inside / twopi_d, 0.0, 1.0);
    return diag;
  }

  const Mask2D& mask = *as_mask(domain);
  DiscreteLaplacian lap(domain);
  SolverConfig cfg;
  cfg.count = k + 1;
  FdmEigen eig = smallest_eigs(lap, cfg);
  MaskTransform t = make_transform(mask, lap, eig.vectors);
  SpectralMassProfile profile = mask_profile(domain, k, grid, t);
  EtaDiagnostic diag = eta(profile, eig.spectrum);
  auto f = [&](double x, double y) { return t.point_ft_sq(k, x, y); };
  double inside = fn_mass_in_ball(grid, 2, profile.radius, f);
  diag.next_mode_outside = std::clamp(1.0 - inside / twopi_d, 0.0, 1.0);
  return diag;
}

BoundEvaluation concentration_sum_check(const Spectrum& s, const EtaDiagnostic& diag) {
  BoundEvaluation ev;
  ev.kind = "concentration-sum";
  ev.n = diag.k;
  long double sl = 0.0L;
  for (int m = 1; m <= diag.k; ++m) sl += eigenvalue(s, m);
  ev.lhs = static_cast<double>(sl);
  ev.rhs = diag.factor * liyau_sum_bound(diag.k, diag.d, volume(s.domain));
  ev.verified = ev.lhs >= ev.rhs * (1.0 - diag.deflation);
  return ev;
}

BoundEvaluation concentration_single_check(const Spectrum& s, const EtaDiagnostic& diag) {
  BoundEvaluation ev;
  ev.kind = "concentration-single";
  ev.n = diag.k;
  ev.lhs = eigenvalue(s, diag.k);
  ev.rhs = diag.factor * liyau_single_bound(diag.k, diag.d, volume(s.domain));
  ev.verified = ev.lhs >= ev.rhs * (1.0 - diag.deflation);
  return ev;
}

}  // namespace spb
