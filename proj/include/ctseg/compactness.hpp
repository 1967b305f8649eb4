#ifndef CTSEG_COMPACTNESS_HPP
#define CTSEG_COMPACTNESS_HPP

#include <span>
#include <utility>
#include <vector>

#include "ctseg/raster.hpp"

namespace ctseg {

// Per-slice compactness values and the selected reference slice.
struct CompactnessReport {
  std::vector<std::pair<int, double>> per_slice;  // (acq_index, C)
  int chosen = -1;                                // acq_index of the reference slice
};

// Fraction of pixels that are nonzero and have a nonzero in-row neighbor, plus
// the same count column-wise, divided by 2*n*m. Always in [0,1]. The neighbor
// query runs on the index array: difference 1 within a row, 10^scale_exp
// within a column.
double compactness(const IndexArray& ia);
double compactness(const ThresholdedSlice& slice);

// Picks the slice of maximal compactness; ties go to the lowest acq_index.
// Throws PipelineError("empty dataset after thresholding") when every slice
// has C = 0. threads > 1 evaluates slices concurrently.
CompactnessReport select_reference(std::span<const ThresholdedSlice> slices, int threads = 1);

}  // namespace ctseg

#endif
