#include "ctseg/compactness.hpp"

#include <cstdint>

#include "ctseg/errors.hpp"
#include "parallel.hpp"

namespace ctseg {

namespace {

std::uint64_t pow10_u64(int e) {
  std::uint64_t v = 1;
  while (e-- > 0) v *= 10;
  return v;
}

}  // namespace

double compactness(const IndexArray& ia) {
  const int h = ia.height;
  const int w = ia.width;
  const std::uint64_t col_step = pow10_u64(ia.scale_exp);

  long count = 0;
  // Row pass: a nonzero pixel counts when either horizontal neighbor encodes
  // an adjacent position (difference of exactly 1).
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::uint64_t v = ia.at(r, c);
      if (v == 0) continue;
      if ((c + 1 < w && ia.at(r, c + 1) == v + 1) ||
          (c > 0 && ia.at(r, c - 1) + 1 == v)) {
        ++count;
      }
    }
  }
  // Column pass: vertical neighbors differ by 10^scale_exp.
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::uint64_t v = ia.at(r, c);
      if (v == 0) continue;
      if ((r + 1 < h && ia.at(r + 1, c) == v + col_step) ||
          (r > 0 && ia.at(r - 1, c) + col_step == v)) {
        ++count;
      }
    }
  }
  return static_cast<double>(count) / (2.0 * w * h);
}

double compactness(const ThresholdedSlice& slice) {
  return compactness(build_index_array(slice));
}

CompactnessReport select_reference(std::span<const ThresholdedSlice> slices, int threads) {
  if (slices.empty()) {
    throw PipelineError("empty dataset after thresholding");
  }

  std::vector<double> values(slices.size());
  detail::parallel_for(static_cast<int>(slices.size()), threads,
                       [&](int i) { values[i] = compactness(slices[i]); });

  CompactnessReport report;
  report.per_slice.reserve(slices.size());
  double best = -1.0;
  for (std::size_t i = 0; i < slices.size(); ++i) {
    report.per_slice.emplace_back(slices[i].acq_index, values[i]);
    if (values[i] > best ||
        (values[i] == best && slices[i].acq_index < report.chosen)) {
      best = values[i];
      report.chosen = slices[i].acq_index;
    }
  }
  if (best == 0.0) {
    throw PipelineError("empty dataset after thresholding");
  }
  return report;
}

}  // namespace ctseg
