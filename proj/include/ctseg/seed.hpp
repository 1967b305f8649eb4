#ifndef CTSEG_SEED_HPP
#define CTSEG_SEED_HPP

#include "ctseg/raster.hpp"

namespace ctseg {

// In-brain pixel from which region growing starts. Always lands on a nonzero
// pixel of the slice it was selected from.
struct SeedPoint {
  int row = 0;
  int col = 0;
  bool operator==(const SeedPoint&) const = default;
};

// Median of the nonzero-pixel row coordinates (lower median for even counts)
// crossed with the median of the column coordinates. When that pixel is zero,
// the nearest nonzero pixel wins (Euclidean distance, ties by smaller row then
// smaller column). Throws PipelineError on an all-zero slice.
//
// This route sorts the modified index array and decodes the median entry, once
// with row-major and once with column-major encoding; the encoding is
// lexicographic in (row, col), so the decoded medians equal the coordinate
// medians. find_seed_by_coordinate_median computes them directly and must
// agree on every input.
SeedPoint find_seed(const ThresholdedSlice& slice);
SeedPoint find_seed_by_coordinate_median(const ThresholdedSlice& slice);

}  // namespace ctseg

#endif
