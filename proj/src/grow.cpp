#include "ctseg/grow.hpp"

#include <stdexcept>
#include <vector>

namespace ctseg {

namespace {

void check_seed(const BinarySlice& binary, SeedPoint seed) {
  if (!binary.image.in_bounds(seed.row, seed.col)) {
    throw std::invalid_argument("seed point out of image bounds");
  }
  if (binary.image(seed.row, seed.col) != 0) {
    throw std::invalid_argument("seed point lies on a 255 pixel");
  }
}

// One directional sweep over a quadrant. Rows run from r0 toward r1 and
// columns from c0 toward c1 (both inclusive); row_major picks which index
// drives the outer loop. A 0-valued pixel joins the region as soon as any of
// its eight neighbors is already marked; marks made earlier in the same sweep
// propagate immediately, so a whole run is absorbed in one pass.
bool sweep(const Raster& binary, Raster& mark, int r0, int r1, int c0, int c1,
           bool row_major) {
  const int dr = r1 >= r0 ? 1 : -1;
  const int dc = c1 >= c0 ? 1 : -1;
  const int h = binary.height();
  const int w = binary.width();
  bool changed = false;

  auto visit = [&](int r, int c) {
    if (binary(r, c) != 0 || mark(r, c) != 0) return;
    for (int nr = r - 1; nr <= r + 1; ++nr) {
      for (int nc = c - 1; nc <= c + 1; ++nc) {
        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
        if (mark(nr, nc) != 0) {
          mark(r, c) = 1;
          changed = true;
          return;
        }
      }
    }
  };

  if (row_major) {
    for (int r = r0; r != r1 + dr; r += dr)
      for (int c = c0; c != c1 + dc; c += dc) visit(r, c);
  } else {
    for (int c = c0; c != c1 + dc; c += dc)
      for (int r = r0; r != r1 + dr; r += dr) visit(r, c);
  }
  return changed;
}

}  // namespace

GrownRegion grow_floodfill(const BinarySlice& binary, SeedPoint seed) {
  check_seed(binary, seed);
  const Raster& img = binary.image;
  const int h = img.height();
  const int w = img.width();

  GrownRegion region;
  region.seed = seed;
  region.acq_index = binary.acq_index;
  region.support = Raster(w, h, 0);

  std::vector<int> stack;
  stack.push_back(seed.row * w + seed.col);
  region.support(seed.row, seed.col) = 1;
  region.area = 1;

  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int r = idx / w;
    const int c = idx % w;
    for (int nr = r - 1; nr <= r + 1; ++nr) {
      for (int nc = c - 1; nc <= c + 1; ++nc) {
        if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
        if (img(nr, nc) != 0 || region.support(nr, nc) != 0) continue;
        region.support(nr, nc) = 1;
        ++region.area;
        stack.push_back(nr * w + nc);
      }
    }
  }
  return region;
}

GrownRegion grow_splitquad(const BinarySlice& binary, SeedPoint seed) {
  check_seed(binary, seed);
  const Raster& img = binary.image;
  const int h = img.height();
  const int w = img.width();
  const int sr = seed.row;
  const int sc = seed.col;

  Raster mark(w, h, 0);
  mark(sr, sc) = 1;
  // Local seeds of the other three sub-images: the corner nearest the global
  // seed, which is always one of its direct neighbors across the split axes.
  if (sc + 1 < w && img(sr, sc + 1) == 0) mark(sr, sc + 1) = 1;
  if (sr + 1 < h && img(sr + 1, sc) == 0) mark(sr + 1, sc) = 1;
  if (sr + 1 < h && sc + 1 < w && img(sr + 1, sc + 1) == 0) mark(sr + 1, sc + 1) = 1;

  // Quadrant scan ranges, each ordered from its local seed corner toward the
  // opposite (query end) corner. Empty quadrants occur when the seed touches
  // the image edge.
  struct Quad {
    int r0, r1, c0, c1;
    bool empty;
  };
  const Quad quads[4] = {
      {sr, 0, sc, 0, false},                                  // top-left
      {sr, 0, sc + 1, w - 1, sc + 1 > w - 1},                 // top-right
      {sr + 1, h - 1, sc, 0, sr + 1 > h - 1},                 // bottom-left
      {sr + 1, h - 1, sc + 1, w - 1, sr + 1 > h - 1 || sc + 1 > w - 1},  // bottom-right
  };

  // Alternate row-then-column sweeps per sub-image until a full cycle adds
  // nothing. A single row/column pass handles convex interiors; concave ones
  // need the extra rounds to reach the same fixpoint as the neighbor search.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Quad& q : quads) {
      if (q.empty) continue;
      changed |= sweep(img, mark, q.r0, q.r1, q.c0, q.c1, true);
      changed |= sweep(img, mark, q.r0, q.r1, q.c0, q.c1, false);
    }
  }

  GrownRegion region;
  region.seed = seed;
  region.acq_index = binary.acq_index;
  region.area = mark.count_nonzero();
  region.support = std::move(mark);
  return region;
}

}  // namespace ctseg
