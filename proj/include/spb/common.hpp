#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace spb {

// An iterative method ran out of its iteration budget before reaching
// tolerance.  The message names the method and reports partial progress.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quadrature could not certify its declared tolerance; the message carries
// the achieved defect.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (mask files, case files, report files).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// base^(num/den) for base > 0, evaluated in log space.  Keeps fractional
// powers of large integer indices away from integer intermediates.
inline double power_ratio(double base, double num, double den) {
  if (base == 1.0) return 1.0;
  if (num == den) return base;
  return std::exp((num / den) * std::log(base));
}

}  // namespace spb
