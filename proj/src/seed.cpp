#include "ctseg/seed.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ctseg/errors.hpp"

namespace ctseg {

namespace {

std::uint64_t pow10_u64(int e) {
  std::uint64_t v = 1;
  while (e-- > 0) v *= 10;
  return v;
}

// Moves (row, col) to the nearest nonzero pixel when it sits on background.
SeedPoint settle_on_nonzero(const Raster& img, int row, int col) {
  if (img(row, col) != 0) return {row, col};

  long best_d2 = -1;
  SeedPoint best{0, 0};
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (img(r, c) == 0) continue;
      const long dr = r - row;
      const long dc = c - col;
      const long d2 = dr * dr + dc * dc;
      if (best_d2 < 0 || d2 < best_d2 ||
          (d2 == best_d2 && (r < best.row || (r == best.row && c < best.col)))) {
        best_d2 = d2;
        best = {r, c};
      }
    }
  }
  return best;
}

}  // namespace

SeedPoint find_seed(const ThresholdedSlice& slice) {
  const Raster& img = slice.image;
  const IndexArray ia = build_index_array(slice);

  // Row-major scan of the modified index array already yields the sorted
  // nonzero series: the encoding is lexicographic in (row, col).
  std::vector<std::uint64_t> sorted_rowmajor;
  for (const std::uint64_t v : ia.encoded) {
    if (v != 0) sorted_rowmajor.push_back(v);
  }
  if (sorted_rowmajor.empty()) {
    throw PipelineError("cannot place a seed point on an all-zero slice");
  }
  const std::uint64_t row_median_value = sorted_rowmajor[(sorted_rowmajor.size() - 1) / 2];
  const int row = decode_index(row_median_value, ia.scale_exp).first;

  // Column median: same procedure with the dimensions swapped, so the column
  // becomes the high digit field and the sorted order is (col, row).
  const int col_scale_exp = decimal_digits(img.height() + 1);
  const std::uint64_t col_scale = pow10_u64(col_scale_exp);
  std::vector<std::uint64_t> sorted_colmajor;
  sorted_colmajor.reserve(sorted_rowmajor.size());
  for (int c = 0; c < img.width(); ++c) {
    for (int r = 0; r < img.height(); ++r) {
      if (img(r, c) != 0) {
        sorted_colmajor.push_back(static_cast<std::uint64_t>(c + 1) * col_scale +
                                  static_cast<std::uint64_t>(r + 1));
      }
    }
  }
  const std::uint64_t col_median_value = sorted_colmajor[(sorted_colmajor.size() - 1) / 2];
  const int col = decode_index(col_median_value, col_scale_exp).first;

  return settle_on_nonzero(img, row, col);
}

SeedPoint find_seed_by_coordinate_median(const ThresholdedSlice& slice) {
  const Raster& img = slice.image;
  std::vector<int> rows;
  std::vector<int> cols;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (img(r, c) != 0) {
        rows.push_back(r);
        cols.push_back(c);
      }
    }
  }
  if (rows.empty()) {
    throw PipelineError("cannot place a seed point on an all-zero slice");
  }
  std::sort(cols.begin(), cols.end());  // rows are already sorted by the scan order
  const int row = rows[(rows.size() - 1) / 2];
  const int col = cols[(cols.size() - 1) / 2];
  return settle_on_nonzero(img, row, col);
}

}  // namespace ctseg
