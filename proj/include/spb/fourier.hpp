#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spb/bounds.hpp"
#include "spb/geometry.hpp"
#include "spb/spectrum.hpp"

namespace spb {

// Symmetric uniform frequency grid: per axis, `points` midpoint samples of
// step 2*extent/points covering [-extent, extent].
struct GridSpec {
  double extent = 0.0;
  int points = 0;

  double step() const { return 2.0 * extent / points; }
};

// The phase-space function g(xi) = (1/V) sum_{m<=k} |u_m^(xi)|^2 sampled on a
// grid, where |u_m^(xi)|^2 is the plain transform |integral of u_m e^{-i xi.x}|^2.
// Then 0 <= g <= 1 and each mode carries total mass (2 pi)^d.
struct SpectralMassProfile {
  DomainSpec domain;
  int d = 0;
  int k = 0;
  double radius = 0.0;  // r with omega_d r^d = (2 pi)^d k / V
  GridSpec grid;
  std::vector<double> values;  // row-major, axis 0 slowest, size points^d
  bool approximate = false;    // true for the discrete-transform mask route
  double total_mass = 0.0;     // midpoint quadrature over the whole grid
  double plancherel_defect = 0.0;  // relative defect vs (2 pi)^d k / V
};

// Squared magnitude of the plain transform of one box eigenfunction,
// product of per-axis closed forms; the removable singularities at
// xi_i = +-k_i pi / a_i are evaluated through a guarded sinc.
double box_mode_ft_sq(const std::vector<double>& lengths,
                      const std::vector<int>& mode, const std::vector<double>& xi);

// Ball radius r of the concentration construction for k modes on a domain.
double concentration_radius(const DomainSpec& domain, int k);

// Extent covers both 3r and an analytic transform-tail bound keeping the
// truncated mass within the Plancherel tolerance; the step resolves the
// per-axis oscillation scale pi/min(a_i) with 64 samples.
GridSpec default_grid(const DomainSpec& domain, int k);

// Profiles are supported for d <= 2 (frequency grids in higher dimension are
// out of scope).  Boxes use the closed form; masks transform FDM eigenvectors
// (piecewise-constant cells, separable semidiscrete transform, equivalent to
// a heavily zero-padded DFT) and are flagged approximate.  Throws
// QuadratureError when the Plancherel defect exceeds 0.5% (5% approximate).
SpectralMassProfile g_profile(const DomainSpec& domain, int k);
SpectralMassProfile g_profile(const DomainSpec& domain, int k, const GridSpec& grid);

// TSV dump `xi_1 ... xi_d g`, 17 significant digits, grid order.
std::string profile_to_tsv(const SpectralMassProfile& profile);

// Mass-deficit diagnostic of the concentration construction.
struct EtaDiagnostic {
  int k = 0;
  int d = 0;
  double radius = 0.0;        // r
  double shell_radius = 0.0;  // s = r (1 + eta)^{1/d}
  double eta = 0.0;           // 1 - mass_inside V / ((2 pi)^d k), clamped to [0,1]
  double mass_inside = 0.0;   // integral of g over B(0,r)
  double sum_lambda = 0.0;    // sum of the first k eigenvalues
  double factor = 0.0;        // concentration_factor(eta, d)
  double sum_rhs = 0.0;       // factor * liyau_sum_bound(k)
  bool sum_holds = false;
  double lambda_k = 0.0;      // per-eigenvalue corollary lhs
  double single_rhs = 0.0;    // factor * liyau_single_bound(k)
  bool single_holds = false;
  // Fraction of mode k+1's transform mass outside B(0,r); informational,
  // negative when not computed (profiles without an attached next mode).
  double next_mode_outside = -1.0;
  bool approximate = false;
  double deflation = 0.0;  // safety tolerance applied to fdm spectra
};

// Quadrature of the profile over B(0,r) with one dyadic boundary-refinement
// pass in the annulus ||xi| - r| <= 2 step.  The spectrum supplies the first
// k eigenvalues for the concentration inequality.  Works on synthetic
// profiles; requires r within the grid extent.
EtaDiagnostic eta(const SpectralMassProfile& profile, const Spectrum& s);

// Full pipeline: spectrum (analytic or FDM), profile, eta, next-mode mass.
EtaDiagnostic eta_diagnostic(const DomainSpec& domain, int k);
EtaDiagnostic eta_diagnostic(const DomainSpec& domain, int k, const GridSpec& grid);

// 17-significant-digit JSON rendering of the diagnostic.
std::string eta_to_json(const EtaDiagnostic& diag);

// Sum form: sum_{m<=k} lambda_m >= factor * liyau_sum_bound(k).
BoundEvaluation concentration_sum_check(const Spectrum& s, const EtaDiagnostic& diag);
// Single-eigenvalue corollary: lambda_k >= factor * liyau_single_bound(k).
BoundEvaluation concentration_single_check(const Spectrum& s, const EtaDiagnostic& diag);

}  // namespace spb
