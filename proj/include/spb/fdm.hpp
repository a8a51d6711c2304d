#pragma once

#include <Eigen/Dense>

#include "spb/geometry.hpp"
#include "spb/spectrum.hpp"

namespace spb {

// Matrix-free 5-point Dirichlet Laplacian on the occupied cells of a mask.
// One unknown per occupied cell; exterior (and unoccupied) cells are zero.
// The spectrum lies in (0, 8/h^2].
class DiscreteLaplacian {
 public:
  explicit DiscreteLaplacian(const DomainSpec& mask_domain);

  long size() const { return static_cast<long>(neighbors_.size()) / 4; }
  double h() const { return h_; }
  // Flip shift c = 8/h^2; cI - A has A's smallest eigenvalues on top.
  double flip_shift() const { return 8.0 / (h_ * h_); }
  const DomainSpec& domain() const { return domain_; }

  // Unknown index of cell (x, y), -1 if the cell is unoccupied.
  long cell_index(int x, int y) const {
    return index_[static_cast<std::size_t>(y) * width_ + x];
  }

  void apply(const double* v, double* out) const;          // out = A v
  void apply_flipped(const double* v, double* out) const;  // out = (cI - A) v

 private:
  DomainSpec domain_;
  double h_ = 0.0;
  int width_ = 0, height_ = 0;
  std::vector<long> index_;          // per cell
  std::vector<long> neighbors_;      // per unknown, 4 entries, -1 = boundary
};

DiscreteLaplacian assemble(const DomainSpec& mask_domain);

struct SolverConfig {
  int count = 1;
  int krylov = 0;          // 0 = auto: max(2*count + 20, 96); else >= 2*count + 20
  double tol = 1e-8;       // relative residual |Av - lambda v| / lambda
  int max_restarts = 400;
  unsigned seed = 20240913;
};

struct FdmEigen {
  Spectrum spectrum;        // provenance fdm-discrete, ascending
  Eigen::MatrixXd vectors;  // size x count, unit Euclidean columns
  double max_residual = 0.0;
  int restarts = 0;
};

// The count smallest eigenpairs of A via thick-restart Lanczos with full
// reorthogonalization on the flipped operator.  Every reported pair has its
// true residual checked against config.tol.  Small problems fall back to a
// dense solve.  Throws ConvergenceError (naming the converged count) when the
// restart budget runs out.
FdmEigen smallest_eigs(const DiscreteLaplacian& A, const SolverConfig& config);

// Second-order error model: lambda* = (4 lambda_{h/2} - lambda_h) / 3,
// re-sorted.  Inputs must be fdm-discrete, equal counts, fine spacing half the
// coarse spacing, and geometrically compatible: the fine mask is the coarse
// mask cell-split, or both are full-rectangle rasterizations of one rectangle.
// Identical inputs are the formula's fixed point and pass through unchanged.
Spectrum richardson_extrapolate(const Spectrum& coarse, const Spectrum& fine);

// Full-rectangle mask for a 2D box at spacing h, on the convention that the
// Dirichlet boundary sits half a cell outside the occupied region: an a x b
// box needs a/h and b/h within 1e-9 of integers and occupies
// (a/h - 1) x (b/h - 1) cells.
DomainSpec rasterize_box(const Box& box, double h);

// Discretization safety margins for verifying lower bounds on FDM spectra: a
// bound counts as verified only against lambda * (1 - tol).  Discrete spectra
// understate the continuum by about lambda h^2 / 12 at worst; extrapolated
// ones by the square of that scale.
double deflation_tolerance(double lambda_max, double h, Provenance provenance);

}  // namespace spb
