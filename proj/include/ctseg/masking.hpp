#ifndef CTSEG_MASKING_HPP
#define CTSEG_MASKING_HPP

#include <utility>
#include <vector>

#include "ctseg/grow.hpp"
#include "ctseg/raster.hpp"

namespace ctseg {

enum class MaskKind { Inner, Outer };

// Binary region mask; support holds 1 on masked-in pixels.
struct Mask {
  MaskKind kind = MaskKind::Inner;
  Raster support;
  long area = 0;
  int origin_acq_index = 0;
};

// Extracted brain matter: original intensities on the segmented support,
// 0 everywhere else.
struct SegmentedSlice {
  Raster image;
  int acq_index = 0;
};

enum class Direction { Forward, Backward };

// Progressive inner-mask state for one propagation batch. current_im never
// shrinks below 5% of the reference inner-mask area; an update that would is
// discarded and the previous mask carries over.
struct PropagationState {
  Mask current_im;
  long reference_im_area = 0;
  Direction direction = Direction::Forward;
};

// Inner mask: the grown region with enclosed holes filled.
Mask make_inner_mask(const GrownRegion& region);

// Outer mask: the inner support dilated by a disk of the given radius (pixel
// centers within Euclidean distance `radius`), clipped to the image bounds.
Mask make_outer_mask(const Mask& inner, int dilation_radius);

// Keeps pixels where the mask support is 1, zeroes the rest.
Raster apply_mask(const Raster& pixels, const Mask& mask);

// Adds to `masked` every 8-connected nonzero component of `um_masked_ti`
// that overlaps or is 8-adjacent to the nonzero support of `masked`.
Raster adjacent_include(const Raster& masked, const Raster& um_masked_ti);

// Replaces the inner mask by the nonzero support of the segmented slice,
// unless that support is smaller than 5% of the reference inner-mask area,
// in which case the previous mask is kept for the next slice.
PropagationState update_im(PropagationState state, const Raster& segmented,
                           int source_acq_index);

// Fills every 4-connected zero region fully enclosed by the segmented support
// with the original slice intensities at those coordinates.
SegmentedSlice fill_holes(const Raster& segmented, const GraySlice& original);

// Segments the whole dataset: the reference slice with the reference inner
// mask, then the batch before it (descending) and the batch after it
// (ascending), each batch propagating its own inner mask from the reference.
// Per slice: outer-mask the thresholded image, inner-mask it, pull in
// adjacent left-out parts, restore original intensities, fill holes, then
// update the batch's inner mask. Output is ordered by acq_index.
// im_area_log, when given, receives (acq_index, inner-mask area after the
// slice) pairs in acq order.
std::vector<SegmentedSlice> segment_dataset(
    const CtDataset& dataset, int ref_acq_index, const Mask& im, const Mask& um,
    std::uint8_t thresh = kSkullThreshold,
    std::vector<std::pair<int, long>>* im_area_log = nullptr);

}  // namespace ctseg

#endif
