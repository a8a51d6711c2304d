#pragma once

#include <string>
#include <vector>

#include "spb/geometry.hpp"

namespace spb {

enum class Provenance { AnalyticBox, AnalyticBall, FdmDiscrete, FdmExtrapolated };

// Serialized names: analytic-box, analytic-ball, fdm-discrete, fdm-extrapolated.
const char* provenance_name(Provenance p);

// Leading Dirichlet eigenvalues of one domain, ascending, with multiplicity.
// complete_through = N guarantees the list's first N entries are the true
// first N: no eigenvalue below eigenvalues[N-1] is missing.
struct Spectrum {
  DomainSpec domain;
  std::vector<double> eigenvalues;
  Provenance provenance = Provenance::AnalyticBox;
  int complete_through = 0;
};

// lambda_n, 1-based; n beyond the completeness guarantee is rejected.
double eigenvalue(const Spectrum& s, int n);

// One lattice mode of a box: lambda = pi^2 sum_i (k_i/a_i)^2, k_i >= 1.
struct BoxMode {
  double lambda;
  std::vector<int> indices;
};

Spectrum box_spectrum(const Box& box, int count);
std::vector<BoxMode> box_modes(const Box& box, int count);

Spectrum ball_spectrum(const Ball& ball, int count);

// Closed-form dispatch on shape; masks are rejected (use the FDM solver).
Spectrum analytic_spectrum(const DomainSpec& domain, int count);

// Homothety: domain dilated by t, eigenvalues multiplied by 1/t^2.
// Restricted to analytic provenance; a scaled FDM spectrum would silently
// misreport its grid.
Spectrum scale_spectrum(const Spectrum& s, double t);

// CSV with header `index,eigenvalue`, 17 significant digits.
std::string spectrum_to_csv(const Spectrum& s);

namespace detail {
// Every mode with lambda <= cutoff, sorted by (lambda, indices lexicographic).
// Exposed so tests can confirm cutoff doubling never changes a prefix.
std::vector<BoxMode> box_modes_below(const std::vector<double>& lengths,
                                     double cutoff);
}  // namespace detail

}  // namespace spb
