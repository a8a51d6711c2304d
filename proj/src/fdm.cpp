#include "spb/fdm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spb/common.hpp"

namespace spb {

namespace {

constexpr long kDenseCutoff = 600;

Eigen::VectorXd seeded_unit_vector(long n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = dist(rng);
  v.normalize();
  return v;
}

bool full_rectangle(const Mask2D& m) {
  return m.occupied_count() == static_cast<long>(m.width) * m.height;
}

bool near(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

DiscreteLaplacian::DiscreteLaplacian(const DomainSpec& mask_domain)
    : domain_(mask_domain) {
  const Mask2D* m = as_mask(mask_domain);
  if (!m) throw std::invalid_argument("assemble requires a mask domain");
  h_ = m->h;
  width_ = m->width;
  height_ = m->height;

  index_.assign(static_cast<std::size_t>(width_) * height_, -1);
  long next = 0;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (m->occupied(x, y)) index_[static_cast<std::size_t>(y) * width_ + x] = next++;
    }
  }

  neighbors_.assign(static_cast<std::size_t>(next) * 4, -1);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const long u = index_[static_cast<std::size_t>(y) * width_ + x];
      if (u < 0) continue;
      long* nb = &neighbors_[static_cast<std::size_t>(u) * 4];
      nb[0] = (x > 0) ? index_[static_cast<std::size_t>(y) * width_ + x - 1] : -1;
      nb[1] = (x + 1 < width_) ? index_[static_cast<std::size_t>(y) * width_ + x + 1] : -1;
      nb[2] = (y > 0) ? index_[static_cast<std::size_t>(y - 1) * width_ + x] : -1;
      nb[3] = (y + 1 < height_) ? index_[static_cast<std::size_t>(y + 1) * width_ + x] : -1;
    }
  }
}

void DiscreteLaplacian::apply(const double* v, double* out) const {
  const double inv_h2 = 1.0 / (h_ * h_);
  const long n = size();
  for (long u = 0; u < n; ++u) {
    const long* nb = &neighbors_[static_cast<std::size_t>(u) * 4];
    double s = 4.0 * v[u];
    if (nb[0] >= 0) s -= v[nb[0]];
    if (nb[1] >= 0) s -= v[nb[1]];
    if (nb[2] >= 0) s -= v[nb[2]];
    if (nb[3] >= 0) s -= v[nb[3]];
    out[u] = s * inv_h2;
  }
}

void DiscreteLaplacian::apply_flipped(const double* v, double* out) const {
  // cI - A with c = 8/h^2 collapses to (4v + sum of neighbors)/h^2.
  const double inv_h2 = 1.0 / (h_ * h_);
  const long n = size();
  for (long u = 0; u < n; ++u) {
    const long* nb = &neighbors_[static_cast<std::size_t>(u) * 4];
    double s = 4.0 * v[u];
    if (nb[0] >= 0) s += v[nb[0]];
    if (nb[1] >= 0) s += v[nb[1]];
    if (nb[2] >= 0) s += v[nb[2]];
    if (nb[3] >= 0) s += v[nb[3]];
    out[u] = s * inv_h2;
  }
}

DiscreteLaplacian assemble(const DomainSpec& mask_domain) {
  return DiscreteLaplacian(mask_domain);
}

namespace {

// Deterministic sign: largest-magnitude component positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  long imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

FdmEigen finish(const DiscreteLaplacian& A, std::vector<double> lambdas,
                Eigen::MatrixXd vectors, int restarts) {
  const long n = A.size();
  const int N = static_cast<int>(lambdas.size());
  Eigen::VectorXd Ax(n);
  double max_res = 0.0;
  for (int i = 0; i < N; ++i) {
    fix_sign(vectors.col(i));
    A.apply(vectors.col(i).data(), Ax.data());
    const double res = (Ax - lambdas[i] * vectors.col(i)).norm() / std::abs(lambdas[i]);
    max_res = std::max(max_res, res);
  }
  FdmEigen out;
  out.spectrum.domain = A.domain();
  out.spectrum.eigenvalues = std::move(lambdas);
  out.spectrum.provenance = Provenance::FdmDiscrete;
  out.spectrum.complete_through = N;
  out.vectors = std::move(vectors);
  out.max_residual = max_res;
  out.restarts = restarts;
  return out;
}

FdmEigen dense_eigs(const DiscreteLaplacian& A, int N) {
  const long n = A.size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd col(n);
  for (long j = 0; j < n; ++j) {
    e[j] = 1.0;
    A.apply(e.data(), col.data());
    M.col(j) = col;
    e[j] = 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  std::vector<double> lambdas(es.eigenvalues().data(), es.eigenvalues().data() + N);
  Eigen::MatrixXd vectors = es.eigenvectors().leftCols(N);
  return finish(A, std::move(lambdas), std::move(vectors), 0);
}

}  // namespace

FdmEigen smallest_eigs(const DiscreteLaplacian& A, const SolverConfig& config) {
  const long n = A.size();
  const int N = config.count;
  if (N < 1 || N > n) {
    throw std::invalid_argument("requested eigenvalue count out of range (1..dimension)");
  }
  if (!(config.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (config.krylov != 0 && config.krylov < 2 * N + 20) {
    throw std::invalid_argument("Krylov dimension must be at least 2*count + 20");
  }

  int m = config.krylov ? config.krylov : std::max(2 * N + 20, 96);
  if (n <= kDenseCutoff || m >= n) return dense_eigs(A, N);

  const double c = A.flip_shift();
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd Hs = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd w(n), coef, coef2;

  std::mt19937 rng(config.seed);
  V.col(0) = seeded_unit_vector(n, rng);
  int ell = 0;  // retained Ritz vectors occupy columns 0..ell-1
  double beta_last = 0.0;

  for (int restart = 0; restart <= config.max_restarts; ++restart) {
    for (int j = ell; j < m; ++j) {
      A.apply_flipped(V.col(j).data(), w.data());
      auto Vj = V.leftCols(j + 1);
      // Two classical Gram-Schmidt passes against the whole basis; the first
      // pass's coefficients are the projection column of the (symmetric) H.
      coef = Vj.transpose() * w;
      w.noalias() -= Vj * coef;
      coef2 = Vj.transpose() * w;
      w.noalias() -= Vj * coef2;
      coef += coef2;
      Hs.block(0, j, j + 1, 1) = coef;
      Hs.block(j, 0, 1, j + 1) = coef.transpose();
      double beta = w.norm();
      if (beta <= 1e-13 * c) {
        // Invariant subspace hit; continue with a fresh orthogonal direction.
        w = seeded_unit_vector(n, rng);
        coef = V.leftCols(j + 1).transpose() * w;
        w.noalias() -= V.leftCols(j + 1) * coef;
        coef = V.leftCols(j + 1).transpose() * w;
        w.noalias() -= V.leftCols(j + 1) * coef;
        w.normalize();
        beta = 0.0;
        V.col(j + 1) = w;
      } else {
        V.col(j + 1) = w / beta;
      }
      if (j + 1 < m) {
        Hs(j + 1, j) = beta;
        Hs(j, j + 1) = beta;
      }
      beta_last = beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
    const Eigen::VectorXd& theta = es.eigenvalues();  // ascending
    const Eigen::MatrixXd& Y = es.eigenvectors();

    // The N largest theta are A's N smallest candidates.
    bool all_est_ok = true;
    for (int i = 0; i < N; ++i) {
      const int col = m - 1 - i;
      const double lambda = c - theta[col];
      const double res_est = std::abs(beta_last * Y(m - 1, col));
      if (res_est > 0.5 * config.tol * std::max(std::abs(lambda), 1e-300)) {
        all_est_ok = false;
        break;
      }
    }

    if (all_est_ok) {
      std::vector<double> lambdas(N);
      Eigen::MatrixXd Ysel(m, N);
      for (int i = 0; i < N; ++i) {
        lambdas[i] = c - theta[m - 1 - i];
        Ysel.col(i) = Y.col(m - 1 - i);
      }
      Eigen::MatrixXd X = V.leftCols(m) * Ysel;
      FdmEigen out = finish(A, std::move(lambdas), std::move(X), restart);
      if (out.max_residual <= config.tol) return out;
      // Estimates were optimistic; fall through to another restart cycle.
    }

    if (restart == config.max_restarts) {
      int converged = 0;
      for (int i = 0; i < N; ++i) {
        const int col = m - 1 - i;
        const double lambda = c - theta[col];
        if (std::abs(beta_last * Y(m - 1, col)) <=
            config.tol * std::max(std::abs(lambda), 1e-300)) {
          ++converged;
        } else {
          break;
        }
      }
      throw ConvergenceError("eigensolver restart budget exhausted: " +
                             std::to_string(converged) + " of " + std::to_string(N) +
                             " eigenpairs converged");
    }

    // Thick restart: keep the leading block plus the last Lanczos vector.
    const int keep = std::min(N + 15, m - 15);
    Eigen::MatrixXd Ykeep(m, keep);
    for (int i = 0; i < keep; ++i) Ykeep.col(i) = Y.col(m - 1 - i);
    Eigen::MatrixXd retained = V.leftCols(m) * Ykeep;
    Eigen::VectorXd last = V.col(m);
    V.leftCols(keep) = retained;
    V.col(keep) = last;
    Hs.setZero();
    for (int i = 0; i < keep; ++i) Hs(i, i) = theta[m - 1 - i];
    ell = keep;
  }
  throw ConvergenceError("eigensolver restart loop exited unexpectedly");
}

Spectrum richardson_extrapolate(const Spectrum& coarse, const Spectrum& fine) {
  if (coarse.provenance != Provenance::FdmDiscrete ||
      fine.provenance != Provenance::FdmDiscrete) {
    throw std::invalid_argument("richardson_extrapolate requires fdm-discrete inputs");
  }
  if (coarse.eigenvalues.size() != fine.eigenvalues.size() || coarse.eigenvalues.empty()) {
    throw std::invalid_argument("richardson_extrapolate requires equal nonempty counts");
  }
  const Mask2D* mc = as_mask(coarse.domain);
  const Mask2D* mf = as_mask(fine.domain);
  if (!mc || !mf) throw std::invalid_argument("richardson_extrapolate requires mask domains");

  const bool identical = mc->h == mf->h && mc->width == mf->width &&
                         mc->height == mf->height && mc->cells == mf->cells;
  if (!identical) {
    if (!near(mf->h, 0.5 * mc->h, 1e-9)) {
      throw std::invalid_argument("fine spacing must be half the coarse spacing");
    }
    bool compatible = false;
    if (mf->width == 2 * mc->width && mf->height == 2 * mc->height) {
      compatible = refine(*mc).cells == mf->cells;
    }
    if (!compatible && full_rectangle(*mc) && full_rectangle(*mf)) {
      // Re-rasterizations of one rectangle: the effective Dirichlet boundary
      // (half a cell outside the mask) must trace the same rectangle.
      compatible = near((mc->width + 1) * mc->h, (mf->width + 1) * mf->h, 1e-9) &&
                   near((mc->height + 1) * mc->h, (mf->height + 1) * mf->h, 1e-9);
    }
    if (!compatible) {
      throw std::invalid_argument(
          "masks are neither a cell-split pair nor rasterizations of one rectangle");
    }
  }

  Spectrum out;
  out.domain = fine.domain;
  out.provenance = Provenance::FdmExtrapolated;
  out.complete_through = fine.complete_through;
  out.eigenvalues.resize(fine.eigenvalues.size());
  for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
    out.eigenvalues[i] = (4.0 * fine.eigenvalues[i] - coarse.eigenvalues[i]) / 3.0;
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

DomainSpec rasterize_box(const Box& box, double h) {
  if (box.lengths.size() != 2) {
    throw std::invalid_argument("rasterize_box supports 2D boxes only");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("spacing must be positive");
  int cells[2];
  for (int i = 0; i < 2; ++i) {
    const double steps = box.lengths[i] / h;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
      throw std::invalid_argument("box side must be an integer multiple of the spacing");
    }
    if (rounded < 2.0) throw std::invalid_argument("spacing too coarse for this box");
    cells[i] = static_cast<int>(rounded) - 1;
  }
  Mask2D mask;
  mask.h = h;
  mask.width = cells[0];
  mask.height = cells[1];
  mask.cells.assign(static_cast<std::size_t>(mask.width) * mask.height, 1);
  return make_mask(std::move(mask), "box-raster");
}

double deflation_tolerance(double lambda_max, double h, Provenance provenance) {
  const double base = lambda_max * h * h;
  if (provenance == Provenance::FdmExtrapolated) return 0.25 * base * base;
  return base / 6.0;
}

}  // namespace spb
