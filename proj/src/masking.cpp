#include "ctseg/masking.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>
#include <string>

#include "ctseg/errors.hpp"
#include "ctseg/regions.hpp"

namespace ctseg {

Mask make_inner_mask(const GrownRegion& region) {
  if (region.area <= 0) {
    throw std::invalid_argument("cannot build an inner mask from an empty region");
  }
  Mask mask;
  mask.kind = MaskKind::Inner;
  mask.origin_acq_index = region.acq_index;
  mask.support = region.support;

  const Raster exterior = flood_zero_from_border_4(mask.support);
  for (std::size_t i = 0; i < mask.support.size(); ++i) {
    if (mask.support.pixels()[i] == 0 && exterior.pixels()[i] == 0) {
      mask.support.pixels()[i] = 1;  // enclosed hole
    }
  }
  mask.area = mask.support.count_nonzero();
  return mask;
}

Mask make_outer_mask(const Mask& inner, int dilation_radius) {
  if (inner.kind != MaskKind::Inner) {
    throw std::invalid_argument("outer mask must be built from an inner mask");
  }
  if (dilation_radius < 1) {
    throw std::invalid_argument("dilation radius must be at least 1");
  }

  const Raster& in = inner.support;
  const int h = in.height();
  const int w = in.width();

  std::vector<std::pair<int, int>> disk;
  for (int dr = -dilation_radius; dr <= dilation_radius; ++dr) {
    for (int dc = -dilation_radius; dc <= dilation_radius; ++dc) {
      if (dr * dr + dc * dc <= dilation_radius * dilation_radius) {
        disk.emplace_back(dr, dc);
      }
    }
  }

  Mask mask;
  mask.kind = MaskKind::Outer;
  mask.origin_acq_index = inner.origin_acq_index;
  mask.support = in;

  // Stamping disks on boundary pixels only: the nearest support pixel of any
  // outside pixel is always a boundary pixel, so interior stamps add nothing.
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (in(r, c) == 0) continue;
      const bool boundary = (r > 0 && in(r - 1, c) == 0) || (r + 1 < h && in(r + 1, c) == 0) ||
                            (c > 0 && in(r, c - 1) == 0) || (c + 1 < w && in(r, c + 1) == 0);
      if (!boundary) continue;
      for (const auto& [dr, dc] : disk) {
        const int nr = r + dr;
        const int nc = c + dc;
        if (nr >= 0 && nr < h && nc >= 0 && nc < w) {
          mask.support(nr, nc) = 1;
        }
      }
    }
  }
  mask.area = mask.support.count_nonzero();
  return mask;
}

Raster apply_mask(const Raster& pixels, const Mask& mask) {
  if (!pixels.same_shape(mask.support)) {
    throw std::invalid_argument("mask shape does not match the slice shape");
  }
  Raster out = pixels;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (mask.support.pixels()[i] == 0) out.pixels()[i] = 0;
  }
  return out;
}

Raster adjacent_include(const Raster& masked, const Raster& um_masked_ti) {
  if (!masked.same_shape(um_masked_ti)) {
    throw std::invalid_argument("rasters must share one shape");
  }
  const int h = masked.height();
  const int w = masked.width();

  const ComponentLabels comps = label_nonzero_components_8(um_masked_ti);
  std::vector<char> selected(static_cast<std::size_t>(comps.count) + 1, 0);

  // A component is pulled in when any of its pixels sees masked support in
  // its 3x3 neighborhood (overlap included).
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::int32_t label = comps.labels[static_cast<std::size_t>(r) * w + c];
      if (label == 0 || selected[label]) continue;
      for (int nr = std::max(0, r - 1); nr <= std::min(h - 1, r + 1) && !selected[label]; ++nr) {
        for (int nc = std::max(0, c - 1); nc <= std::min(w - 1, c + 1); ++nc) {
          if (masked(nr, nc) != 0) {
            selected[label] = 1;
            break;
          }
        }
      }
    }
  }

  Raster out = masked;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int32_t label = comps.labels[i];
    if (label != 0 && selected[label]) {
      out.pixels()[i] = um_masked_ti.pixels()[i];
    }
  }
  return out;
}

PropagationState update_im(PropagationState state, const Raster& segmented,
                           int source_acq_index) {
  if (!segmented.same_shape(state.current_im.support)) {
    throw std::invalid_argument("segmented raster shape does not match the mask");
  }
  const long candidate_area = segmented.count_nonzero();
  // 5% rule, kept in integers: reject when area/reference < 1/20.
  if (candidate_area * 20 < state.reference_im_area) {
    return state;
  }
  Mask next;
  next.kind = MaskKind::Inner;
  next.origin_acq_index = source_acq_index;
  next.area = candidate_area;
  next.support = Raster(segmented.width(), segmented.height(), 0);
  for (std::size_t i = 0; i < segmented.size(); ++i) {
    if (segmented.pixels()[i] != 0) next.support.pixels()[i] = 1;
  }
  state.current_im = std::move(next);
  return state;
}

SegmentedSlice fill_holes(const Raster& segmented, const GraySlice& original) {
  if (!segmented.same_shape(original.image)) {
    throw std::invalid_argument("segmented raster shape does not match the original slice");
  }
  SegmentedSlice out{segmented, original.acq_index};
  const Raster exterior = flood_zero_from_border_4(segmented);
  for (std::size_t i = 0; i < segmented.size(); ++i) {
    if (segmented.pixels()[i] == 0 && exterior.pixels()[i] == 0) {
      out.image.pixels()[i] = original.image.pixels()[i];
    }
  }
  return out;
}

namespace {

SegmentedSlice segment_one(const GraySlice& slice, const Mask& um,
                           PropagationState& state, std::uint8_t thresh) {
  try {
    const ThresholdedSlice ti = threshold_skull(slice, thresh);
    const Raster um_masked = apply_mask(ti.image, um);
    const Raster im_masked = apply_mask(um_masked, state.current_im);
    const Raster included = adjacent_include(im_masked, um_masked);

    Raster restored(included.width(), included.height(), 0);
    for (std::size_t i = 0; i < included.size(); ++i) {
      if (included.pixels()[i] != 0) {
        restored.pixels()[i] = slice.image.pixels()[i];
      }
    }

    SegmentedSlice seg = fill_holes(restored, slice);
    state = update_im(std::move(state), seg.image, slice.acq_index);
    return seg;
  } catch (const std::exception& e) {
    throw PipelineError("slice acq_index " + std::to_string(slice.acq_index) + ": " + e.what());
  }
}

}  // namespace

std::vector<SegmentedSlice> segment_dataset(const CtDataset& dataset, int ref_acq_index,
                                            const Mask& im, const Mask& um,
                                            std::uint8_t thresh,
                                            std::vector<std::pair<int, long>>* im_area_log) {
  validate_dataset(dataset);
  if (im.kind != MaskKind::Inner || um.kind != MaskKind::Outer) {
    throw std::invalid_argument("segment_dataset needs an inner and an outer mask");
  }

  const std::vector<GraySlice>& slices = dataset.slices;  // acq-ascending per the invariant
  const int n = static_cast<int>(slices.size());
  int ref_pos = -1;
  for (int i = 0; i < n; ++i) {
    if (slices[i].acq_index == ref_acq_index) {
      ref_pos = i;
      break;
    }
  }
  if (ref_pos < 0) {
    throw std::invalid_argument("reference acq_index not present in the dataset");
  }

  std::vector<SegmentedSlice> results(n);
  std::vector<long> im_areas(n, 0);

  PropagationState ref_state{im, im.area, Direction::Forward};
  results[ref_pos] = segment_one(slices[ref_pos], um, ref_state, thresh);
  im_areas[ref_pos] = ref_state.current_im.area;

  auto run_batch = [&](Direction dir) {
    PropagationState state{im, im.area, dir};
    if (dir == Direction::Backward) {
      for (int i = ref_pos - 1; i >= 0; --i) {
        results[i] = segment_one(slices[i], um, state, thresh);
        im_areas[i] = state.current_im.area;
      }
    } else {
      for (int i = ref_pos + 1; i < n; ++i) {
        results[i] = segment_one(slices[i], um, state, thresh);
        im_areas[i] = state.current_im.area;
      }
    }
  };

  // The two batches are independent once the reference mask exists.
  if (ref_pos > 0 && ref_pos + 1 < n) {
    std::future<void> backward = std::async(std::launch::async, run_batch, Direction::Backward);
    run_batch(Direction::Forward);
    backward.get();
  } else {
    run_batch(Direction::Backward);
    run_batch(Direction::Forward);
  }

  if (im_area_log) {
    im_area_log->clear();
    for (int i = 0; i < n; ++i) {
      im_area_log->emplace_back(slices[i].acq_index, im_areas[i]);
    }
  }
  return results;
}

}  // namespace ctseg
