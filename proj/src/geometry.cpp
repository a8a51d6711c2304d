#include "spb/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spb/common.hpp"

namespace spb {

namespace {

constexpr int kMaxBoxDim = 6;

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

// h printed with the shortest digit string that parses back to the same
// double, so a mask survives save/load without drift.
std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

DimensionConstants dimension_constants(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  const double omega = std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  return {d, omega, d * omega};
}

long Mask2D::occupied_count() const {
  return std::count_if(cells.begin(), cells.end(),
                       [](std::uint8_t c) { return c != 0; });
}

DomainSpec make_box(std::vector<double> lengths, std::string label) {
  if (lengths.empty() || lengths.size() > kMaxBoxDim) {
    throw std::invalid_argument("box dimension must be between 1 and 6");
  }
  for (double a : lengths) check_positive(a, "box side length");
  if (label.empty()) label = "box";
  return {Box{std::move(lengths)}, std::move(label)};
}

DomainSpec make_ball(int d, double radius, std::string label) {
  if (d < 1 || d > 3) throw std::invalid_argument("ball dimension must be 1, 2 or 3");
  check_positive(radius, "ball radius");
  if (label.empty()) label = "ball";
  return {Ball{d, radius}, std::move(label)};
}

DomainSpec make_mask(Mask2D mask, std::string label) {
  check_positive(mask.h, "mask cell size");
  if (mask.width < 1 || mask.height < 1 ||
      mask.cells.size() != static_cast<std::size_t>(mask.width) * mask.height) {
    throw std::invalid_argument("mask grid shape does not match cell data");
  }
  if (mask.occupied_count() == 0) throw std::invalid_argument("mask has no occupied cells");
  if (label.empty()) label = "mask";
  return {std::move(mask), std::move(label)};
}

const Box* as_box(const DomainSpec& dom) { return std::get_if<Box>(&dom.shape); }
const Ball* as_ball(const DomainSpec& dom) { return std::get_if<Ball>(&dom.shape); }
const Mask2D* as_mask(const DomainSpec& dom) { return std::get_if<Mask2D>(&dom.shape); }

int dimension(const DomainSpec& dom) {
  if (const Box* b = as_box(dom)) return static_cast<int>(b->lengths.size());
  if (const Ball* b = as_ball(dom)) return b->d;
  return 2;
}

double volume(const DomainSpec& dom) {
  if (const Box* b = as_box(dom)) {
    double v = 1.0;
    for (double a : b->lengths) v *= a;
    return v;
  }
  if (const Ball* b = as_ball(dom)) {
    return dimension_constants(b->d).ball_volume * std::pow(b->radius, b->d);
  }
  const Mask2D& m = *as_mask(dom);
  return static_cast<double>(m.occupied_count()) * m.h * m.h;
}

std::vector<double> centroid(const DomainSpec& dom) {
  if (const Box* b = as_box(dom)) {
    std::vector<double> c(b->lengths.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * b->lengths[i];
    return c;
  }
  if (const Ball* b = as_ball(dom)) return std::vector<double>(b->d, 0.0);

  const Mask2D& m = *as_mask(dom);
  double sx = 0.0, sy = 0.0;
  long count = 0;
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (!m.occupied(x, y)) continue;
      sx += (x + 0.5) * m.h;
      sy += (m.height - y - 0.5) * m.h;
      ++count;
    }
  }
  return {sx / count, sy / count};
}

double moment_of_inertia(const DomainSpec& dom) {
  if (const Box* b = as_box(dom)) {
    double sum = 0.0;
    for (double a : b->lengths) sum += a * a;
    return volume(dom) * sum / 12.0;
  }
  if (const Ball* b = as_ball(dom)) {
    const auto dc = dimension_constants(b->d);
    return dc.d * dc.ball_volume * std::pow(b->radius, b->d + 2) / (b->d + 2);
  }

  const Mask2D& m = *as_mask(dom);
  const auto c = centroid(dom);
  double sum = 0.0;
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (!m.occupied(x, y)) continue;
      const double dx = (x + 0.5) * m.h - c[0];
      const double dy = (m.height - y - 0.5) * m.h - c[1];
      sum += dx * dx + dy * dy;
    }
  }
  return sum * m.h * m.h;
}

double moment_about(const DomainSpec& dom, const std::vector<double>& point) {
  const auto c = centroid(dom);
  if (point.size() != c.size()) {
    throw std::invalid_argument("point dimension does not match domain dimension");
  }
  // Parallel-axis identity; exact for the midpoint sums as well.
  double shift = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    shift += (point[i] - c[i]) * (point[i] - c[i]);
  }
  return moment_of_inertia(dom) + volume(dom) * shift;
}

Mask2D parse_mask(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("mask header: empty input");
  if (!header.empty() && header.back() == '\r') header.pop_back();

  std::istringstream hs(header);
  std::string magic;
  long width = 0, height = 0;
  double h = 0.0;
  if (!(hs >> magic >> width >> height >> h) || magic != "MASK2D") {
    throw ParseError("mask header: expected \"MASK2D <width> <height> <h>\", got \"" +
                     header + "\"");
  }
  std::string rest;
  if (hs >> rest) throw ParseError("mask header: trailing token \"" + rest + "\"");
  if (width < 1 || height < 1 || width > 1 << 20 || height > 1 << 20) {
    throw ParseError("mask header: grid size out of range");
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw ParseError("mask header: h must be positive");

  Mask2D mask;
  mask.h = h;
  mask.width = static_cast<int>(width);
  mask.height = static_cast<int>(height);
  mask.cells.resize(static_cast<std::size_t>(width) * height);

  for (long y = 0; y < height; ++y) {
    std::string row;
    if (!std::getline(in, row)) {
      throw ParseError("mask rows: expected " + std::to_string(height) +
                       " rows, got " + std::to_string(y));
    }
    if (!row.empty() && row.back() == '\r') row.pop_back();
    std::istringstream rs(row);
    std::string tok;
    long x = 0;
    while (rs >> tok) {
      if (tok != "0" && tok != "1") {
        throw ParseError("mask rows: non-binary cell '" + tok + "' at row " +
                         std::to_string(y + 1) + " column " + std::to_string(x + 1));
      }
      if (x < width) mask.cells[static_cast<std::size_t>(y) * width + x] = (tok == "1") ? 1 : 0;
      ++x;
    }
    if (x != width) {
      throw ParseError("mask rows: row " + std::to_string(y + 1) + " has " +
                       std::to_string(x) + " cells, expected " + std::to_string(width));
    }
  }
  if (mask.occupied_count() == 0) throw ParseError("mask is empty: no occupied cells");
  return mask;
}

Mask2D load_mask(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open mask file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mask(buf.str());
}

std::string mask_to_string(const Mask2D& mask) {
  std::ostringstream out;
  out << "MASK2D " << mask.width << ' ' << mask.height << ' ' << format_double(mask.h)
      << '\n';
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (x) out << ' ';
      out << (mask.occupied(x, y) ? '1' : '0');
    }
    out << '\n';
  }
  return out.str();
}

void save_mask(const Mask2D& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write mask file: " + path);
  out << mask_to_string(mask);
}

Mask2D refine(const Mask2D& mask) {
  Mask2D fine;
  fine.h = 0.5 * mask.h;
  fine.width = 2 * mask.width;
  fine.height = 2 * mask.height;
  fine.cells.resize(static_cast<std::size_t>(fine.width) * fine.height);
  for (int y = 0; y < fine.height; ++y) {
    for (int x = 0; x < fine.width; ++x) {
      fine.cells[static_cast<std::size_t>(y) * fine.width + x] =
          mask.cells[static_cast<std::size_t>(y / 2) * mask.width + x / 2];
    }
  }
  return fine;
}

}  // namespace spb
