#pragma once

#include <vector>

namespace spb {

// Gamma(x), x > 0.
double gamma_fn(double x);

// Bessel function of the first kind, real order.  Supported range:
// nu = -1/2 or 0 <= nu <= 700, 0 <= x <= 1e5.
double bessel_j(double nu, double x);

// J_nu and its x-derivative from one evaluation.
struct BesselPair {
  double j;
  double jp;
};
BesselPair bessel_j_pair(double nu, double x);

// k-th positive zero j_{nu,k}, absolute accuracy better than 1e-9.
// Throws ConvergenceError if the safeguarded refinement stalls.
double bessel_zero(double nu, int k);

// Zeros 1..k_max of one order; cheaper than k independent calls because each
// zero seeds the bracket of the next.
struct BesselZeroTable {
  double order;
  std::vector<double> zeros;  // zeros[k-1] = j_{nu,k}
};
BesselZeroTable bessel_zero_table(double nu, int k_max);

}  // namespace spb
