#include <doctest.h>

#include <stdexcept>

#include "ctseg/grow.hpp"
#include "oracles.hpp"

using namespace ctseg;

TEST_SUITE_BEGIN("grow");

namespace {

BinarySlice bin(const Raster& img) { return BinarySlice{img, 0}; }

// Hollow rectangular 255-ring.
Raster ring_raster(int w, int h, int top, int left, int bottom, int right) {
  Raster img(w, h, 0);
  for (int c = left; c <= right; ++c) {
    img(top, c) = 255;
    img(bottom, c) = 255;
  }
  for (int r = top; r <= bottom; ++r) {
    img(r, left) = 255;
    img(r, right) = 255;
  }
  return img;
}

}  // namespace

TEST_CASE("flood fill matches the labeling oracle on a hollow ring") {
  const Raster img = ring_raster(32, 32, 4, 5, 26, 27);
  const GrownRegion region = grow_floodfill(bin(img), {15, 15});
  CHECK(region.support == oracle::component_of_zeros(img, 15, 15));
  // interior only: (26-4-1) x (27-5-1) pixels
  CHECK(region.area == 21L * 21L);
  CHECK(region.support(15, 15) == 1);
  CHECK(region.support(0, 0) == 0);
}

TEST_CASE("flood fill of an all-zero image covers everything") {
  const GrownRegion region = grow_floodfill(bin(Raster(16, 16, 0)), {3, 12});
  CHECK(region.area == 256);
}

TEST_CASE("an unconnected second cavity stays out") {
  Raster img = ring_raster(40, 20, 2, 2, 17, 20);
  // second hollow box to the right of the ring
  for (int r = 5; r <= 12; ++r)
    for (int c = 25; c <= 35; ++c)
      if (r == 5 || r == 12 || c == 25 || c == 35) img(r, c) = 255;

  const GrownRegion region = grow_floodfill(bin(img), {10, 10});
  CHECK(region.support == oracle::component_of_zeros(img, 10, 10));
  CHECK(region.support(8, 30) == 0);
}

TEST_CASE("growing rejects a seed on the boundary intensity") {
  Raster img(8, 8, 0);
  img(4, 4) = 255;
  const SeedPoint on_wall{4, 4};
  const SeedPoint out_of_bounds{9, 0};
  CHECK_THROWS_AS(static_cast<void>(grow_floodfill(bin(img), on_wall)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(grow_splitquad(bin(img), on_wall)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(grow_floodfill(bin(img), out_of_bounds)),
                  std::invalid_argument);
}

TEST_CASE("split-and-grow equals flood fill on a convex elliptical ring") {
  Raster img(48, 40, 0);
  for (int r = 0; r < 40; ++r) {
    for (int c = 0; c < 48; ++c) {
      const double dx = (c - 24.0) / 20.0;
      const double dy = (r - 20.0) / 16.0;
      const double e = dx * dx + dy * dy;
      if (e >= 0.72 && e <= 1.0) img(r, c) = 255;
    }
  }
  const GrownRegion fill = grow_floodfill(bin(img), {20, 24});
  const GrownRegion split = grow_splitquad(bin(img), {20, 24});
  CHECK(split.support == fill.support);
  CHECK(split.area == fill.area);
}

TEST_CASE("split-and-grow equals flood fill on a concave interior") {
  // C-shaped cavity: an intrusion from the right forces the growth to bend
  // around it, which a single row-then-column pass cannot do
  const Raster img = oracle::from_lines({
      "################",
      "#..............#",
      "#..............#",
      "#..............#",
      "#....###########",
      "#....###########",
      "#....###########",
      "#..............#",
      "#..............#",
      "#..............#",
      "################",
  });
  const SeedPoint seed{2, 8};  // upper arm, right of the intrusion root
  REQUIRE(img(seed.row, seed.col) == 0);
  const GrownRegion fill = grow_floodfill(bin(img), seed);
  const GrownRegion split = grow_splitquad(bin(img), seed);
  CHECK(split.support == fill.support);
  CHECK(split.support(8, 8) == 1);  // the lower arm is reached around the bend
}

TEST_CASE("split-and-grow equals flood fill on a spiral corridor") {
  // spiral: repeatedly forces direction changes, the worst case for scanline passes
  const Raster img = oracle::from_lines({
      "................",
      ".##############.",
      ".#............#.",
      ".#.##########.#.",
      ".#.#........#.#.",
      ".#.#.######.#.#.",
      ".#.#.#....#.#.#.",
      ".#.#.#.##.#.#.#.",
      ".#.#.#....#.#.#.",
      ".#.#.######.#.#.",
      ".#.#........#.#.",
      ".#.##########.#.",
      ".#............#.",
      ".##############.",
      "................",
      "................",
  });
  const SeedPoint seed{6, 6};
  REQUIRE(img(6, 6) == 0);
  const GrownRegion fill = grow_floodfill(bin(img), seed);
  const GrownRegion split = grow_splitquad(bin(img), seed);
  CHECK(split.support == fill.support);
}

TEST_CASE("degenerate all-zero image with a centered seed") {
  const GrownRegion split = grow_splitquad(bin(Raster(17, 17, 0)), {8, 8});
  CHECK(split.area == 17L * 17L);
}

TEST_CASE("split-and-grow equals flood fill on random noise and random seeds") {
  for (int trial = 0; trial < 150; ++trial) {
    const int w = oracle::rand_between(4, 40);
    const int h = oracle::rand_between(4, 40);
    Raster img = oracle::random_binary(w, h, oracle::rand_between(100, 700));
    const int sr = oracle::rand_between(0, h - 1);
    const int sc = oracle::rand_between(0, w - 1);
    img(sr, sc) = 0;

    const GrownRegion fill = grow_floodfill(bin(img), {sr, sc});
    const GrownRegion split = grow_splitquad(bin(img), {sr, sc});
    CHECK(split.support == fill.support);
    CHECK(split.area == fill.area);
  }
}

TEST_CASE("grown regions stay on zero pixels and are deterministic") {
  for (int trial = 0; trial < 30; ++trial) {
    Raster img = oracle::random_binary(24, 24, 300);
    img(12, 12) = 0;
    const GrownRegion a = grow_splitquad(bin(img), {12, 12});
    const GrownRegion b = grow_splitquad(bin(img), {12, 12});
    CHECK(a.support == b.support);
    for (int r = 0; r < 24; ++r)
      for (int c = 0; c < 24; ++c)
        if (a.support(r, c) != 0) CHECK(img(r, c) == 0);
  }
}

TEST_SUITE_END();
