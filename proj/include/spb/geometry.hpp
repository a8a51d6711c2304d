#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace spb {

// Volume of the unit ball and surface measure of the unit sphere in R^d.
struct DimensionConstants {
  int d;
  double ball_volume;   // omega_d = pi^(d/2) / Gamma(d/2 + 1)
  double sphere_area;   // sigma_{d-1} = d * omega_d
};

DimensionConstants dimension_constants(int d);

// Axis-aligned box (0, a_1) x ... x (0, a_d), 1 <= d <= 6.
struct Box {
  std::vector<double> lengths;
};

// Euclidean ball of radius R centered at the origin, d in {1, 2, 3}.
struct Ball {
  int d = 0;
  double radius = 0.0;
};

// Rasterized planar domain: width x height cells of side h.  Row 0 is the top
// row; cell (x, y) covers [x*h, (x+1)*h] x [(height-1-y)*h, (height-y)*h].
struct Mask2D {
  double h = 0.0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;  // row-major, cells[y*width + x], 0 or 1

  bool occupied(int x, int y) const {
    return cells[static_cast<std::size_t>(y) * width + x] != 0;
  }
  long occupied_count() const;
};

struct DomainSpec {
  std::variant<Box, Ball, Mask2D> shape;
  std::string label;
};

DomainSpec make_box(std::vector<double> lengths, std::string label = "");
DomainSpec make_ball(int d, double radius, std::string label = "");
DomainSpec make_mask(Mask2D mask, std::string label = "");

const Box* as_box(const DomainSpec& dom);
const Ball* as_ball(const DomainSpec& dom);
const Mask2D* as_mask(const DomainSpec& dom);

int dimension(const DomainSpec& dom);
double volume(const DomainSpec& dom);

// Centroid in native coordinates (boxes and masks live in the positive
// quadrant, balls are centered at the origin).
std::vector<double> centroid(const DomainSpec& dom);

// Second moment I = integral over the domain of |x - centroid|^2.
// Masks sum cell midpoints against the midpoint centroid.
double moment_of_inertia(const DomainSpec& dom);

// Second moment about an arbitrary point.  Minimized at the centroid.
double moment_about(const DomainSpec& dom, const std::vector<double>& point);

// Mask file format, round-trips bit-exactly through mask_to_string:
//   MASK2D <width> <height> <h>
//   <height> rows of <width> space-separated 0/1 digits, top row first
Mask2D parse_mask(const std::string& text);
Mask2D load_mask(const std::string& path);
std::string mask_to_string(const Mask2D& mask);
void save_mask(const Mask2D& mask, const std::string& path);

// Splits every cell in four; h halves.  Occupied area is preserved exactly.
Mask2D refine(const Mask2D& mask);

}  // namespace spb
