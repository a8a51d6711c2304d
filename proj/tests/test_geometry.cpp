#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "spb/common.hpp"
#include "spb/geometry.hpp"

using namespace spb;

namespace {
const double kPi = 3.14159265358979323846;

Mask2D square_mask(int cells, double h) {
  Mask2D m;
  m.h = h;
  m.width = cells;
  m.height = cells;
  m.cells.assign(static_cast<std::size_t>(cells) * cells, 1);
  return m;
}
}  // namespace

TEST_CASE("unit ball volumes in low dimension") {
  CHECK(dimension_constants(1).ball_volume == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(dimension_constants(2).ball_volume == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(dimension_constants(3).ball_volume ==
        doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-15));
  for (int d = 1; d <= 8; ++d) {
    DimensionConstants c = dimension_constants(d);
    CHECK(c.sphere_area == doctest::Approx(d * c.ball_volume).epsilon(1e-14));
  }
  CHECK_THROWS_AS(dimension_constants(0), std::invalid_argument);
}

TEST_CASE("box volume, centroid, inertia") {
  DomainSpec sq = make_box({1.0, 1.0});
  CHECK(dimension(sq) == 2);
  CHECK(volume(sq) == doctest::Approx(1.0).epsilon(1e-15));
  auto c = centroid(sq);
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(0.5));
  // I = a b (a^2 + b^2) / 12 about the centroid.
  CHECK(moment_of_inertia(sq) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  DomainSpec rect = make_box({2.0, 1.0});
  CHECK(volume(rect) == doctest::Approx(2.0));
  CHECK(moment_of_inertia(rect) == doctest::Approx(2.0 * 5.0 / 12.0).epsilon(1e-14));

  DomainSpec cube = make_box({1.0, 1.0, 1.0});
  CHECK(volume(cube) == doctest::Approx(1.0));
  CHECK(moment_of_inertia(cube) == doctest::Approx(3.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("box validation") {
  CHECK_THROWS_AS(make_box({}), std::invalid_argument);
  CHECK_THROWS_AS(make_box({1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_box({0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_box({1, 1, 1, 1, 1, 1, 1}), std::invalid_argument);
}

TEST_CASE("ball volume and inertia") {
  DomainSpec disk = make_ball(2, 1.0);
  CHECK(volume(disk) == doctest::Approx(kPi).epsilon(1e-15));
  auto c = centroid(disk);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);
  CHECK(moment_of_inertia(disk) == doctest::Approx(kPi / 2.0).epsilon(1e-14));

  DomainSpec b3 = make_ball(3, 2.0);
  CHECK(volume(b3) == doctest::Approx(4.0 * kPi / 3.0 * 8.0).epsilon(1e-14));
  CHECK(moment_of_inertia(b3) == doctest::Approx(4.0 * kPi * 32.0 / 5.0).epsilon(1e-14));

  DomainSpec seg = make_ball(1, 0.5);
  CHECK(volume(seg) == doctest::Approx(1.0));
  CHECK(moment_of_inertia(seg) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));

  CHECK_THROWS_AS(make_ball(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_ball(2, 0.0), std::invalid_argument);
}

TEST_CASE("moment about an arbitrary point obeys the parallel axis shift") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> off(-2.0, 2.0);
  for (const DomainSpec& dom :
       {make_box({1.0, 3.0}), make_ball(2, 1.5), make_ball(3, 0.7)}) {
    auto c = centroid(dom);
    double base = moment_of_inertia(dom);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> p = c;
      double shift2 = 0.0;
      for (double& x : p) {
        double dx = off(rng);
        x += dx;
        shift2 += dx * dx;
      }
      double expected = base + volume(dom) * shift2;
      CHECK(moment_about(dom, p) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(moment_about(dom, c) == doctest::Approx(base).epsilon(1e-14));
  }
  CHECK_THROWS_AS(moment_about(make_box({1.0, 1.0}), {0.5}), std::invalid_argument);
}

TEST_CASE("accessors expose the active shape only") {
  DomainSpec box = make_box({1.0});
  CHECK(as_box(box) != nullptr);
  CHECK(as_ball(box) == nullptr);
  CHECK(as_mask(box) == nullptr);
  DomainSpec ball = make_ball(2, 1.0);
  CHECK(as_ball(ball) != nullptr);
  CHECK(as_box(ball) == nullptr);
}

TEST_CASE("mask parse round trip") {
  const std::string text =
      "MASK2D 3 2 0.25\n"
      "1 1 0\n"
      "1 0 0\n";
  Mask2D m = parse_mask(text);
  CHECK(m.width == 3);
  CHECK(m.height == 2);
  CHECK(m.h == doctest::Approx(0.25));
  CHECK(m.occupied_count() == 3);
  CHECK(m.occupied(0, 0));
  CHECK(m.occupied(1, 0));
  CHECK(!m.occupied(2, 0));
  CHECK(m.occupied(0, 1));
  CHECK(mask_to_string(m) == text);
}

TEST_CASE("mask parse rejects malformed input") {
  CHECK_THROWS_AS(parse_mask(""), ParseError);
  CHECK_THROWS_AS(parse_mask("MASK 2 2 0.5\n1 1\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_mask("MASK2D 2 2 0.5\n1 1\n1\n"), ParseError);
  CHECK_THROWS_AS(parse_mask("MASK2D 2 2 0.5\n1 2\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_mask("MASK2D 2 2 0.5\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_mask("MASK2D 2 2 -1\n1 1\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_mask("MASK2D 2 2 0.5\n0 0\n0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_mask("MASK2D 2 2 0.5 x\n1 1\n1 1\n"), ParseError);
}

TEST_CASE("mask file round trip") {
  Mask2D m = square_mask(4, 0.125);
  m.cells[5] = 0;
  const char* path = "geom_roundtrip.mask";
  save_mask(m, path);
  Mask2D back = load_mask(path);
  CHECK(back.width == m.width);
  CHECK(back.height == m.height);
  CHECK(back.h == m.h);
  CHECK(back.cells == m.cells);
  std::remove(path);
  CHECK_THROWS_AS(load_mask("does_not_exist.mask"), ParseError);
}

TEST_CASE("mask volume and centroid use cell midpoints") {
  // Two cells in the top row of a 2x2 grid, h = 1: midpoints (0.5, 1.5)
  // and (1.5, 1.5) because row 0 is the top row.
  Mask2D m;
  m.h = 1.0;
  m.width = 2;
  m.height = 2;
  m.cells = {1, 1, 0, 0};
  DomainSpec dom = make_mask(m);
  CHECK(volume(dom) == doctest::Approx(2.0));
  auto c = centroid(dom);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(1.5));
  CHECK(moment_of_inertia(dom) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("refine quarters cells and preserves area") {
  Mask2D m = square_mask(3, 0.5);
  m.cells[4] = 0;
  DomainSpec coarse = make_mask(m);
  Mask2D f = refine(m);
  CHECK(f.width == 6);
  CHECK(f.height == 6);
  CHECK(f.h == doctest::Approx(0.25));
  CHECK(f.occupied_count() == 4 * m.occupied_count());
  DomainSpec fine = make_mask(f);
  CHECK(volume(fine) == doctest::Approx(volume(coarse)).epsilon(1e-15));
  // Each refined cell sits inside its parent.
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x)
      CHECK(f.occupied(x, y) == m.occupied(x / 2, y / 2));
  // Refinement drives the midpoint inertia toward the continuum value.
  double full = moment_of_inertia(coarse);
  double fined = moment_of_inertia(fine);
  CHECK(std::abs(fined - full) < 0.1 * full);
}

TEST_CASE("mask construction validates shape") {
  Mask2D bad;
  bad.h = 0.5;
  bad.width = 2;
  bad.height = 2;
  bad.cells = {1, 1, 1};
  CHECK_THROWS_AS(make_mask(bad), std::invalid_argument);
  bad.cells = {0, 0, 0, 0};
  CHECK_THROWS_AS(make_mask(bad), std::invalid_argument);
}
