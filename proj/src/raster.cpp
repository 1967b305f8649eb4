#include "ctseg/raster.hpp"

#include <algorithm>
#include <stdexcept>

#include "ctseg/errors.hpp"

namespace ctseg {

Raster::Raster(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("raster dimensions must be at least 1x1");
  }
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

long Raster::count_nonzero() const {
  return static_cast<long>(pixels_.size()) -
         std::count(pixels_.begin(), pixels_.end(), std::uint8_t{0});
}

void validate_dataset(const CtDataset& ds) {
  if (ds.slices.empty()) {
    throw DataError("dataset is empty");
  }
  const int w = ds.slices.front().image.width();
  const int h = ds.slices.front().image.height();
  int prev_acq = -1;
  for (const GraySlice& s : ds.slices) {
    if (s.image.width() != w || s.image.height() != h) {
      throw DataError("dataset slices have mixed dimensions");
    }
    if (s.acq_index <= prev_acq) {
      throw DataError("dataset acq_index values are not strictly increasing");
    }
    prev_acq = s.acq_index;
  }
}

int decimal_digits(long v) {
  int d = 0;
  while (v > 0) {
    v /= 10;
    ++d;
  }
  return d;
}

ThresholdedSlice threshold_skull(const GraySlice& slice, std::uint8_t thresh) {
  if (thresh < 1) {
    throw std::invalid_argument("threshold must be in [1,255]");
  }
  ThresholdedSlice out{slice.image, slice.acq_index};
  for (std::uint8_t& p : out.image.pixels()) {
    if (p >= thresh) p = 0;
  }
  return out;
}

BinarySlice binarize(const GraySlice& slice, std::uint8_t thresh) {
  if (thresh < 1) {
    throw std::invalid_argument("threshold must be in [1,255]");
  }
  BinarySlice out{slice.image, slice.acq_index};
  for (std::uint8_t& p : out.image.pixels()) {
    p = p < thresh ? 0 : 255;
  }
  return out;
}

namespace {

std::uint64_t pow10_u64(int e) {
  std::uint64_t v = 1;
  while (e-- > 0) v *= 10;
  return v;
}

}  // namespace

IndexArray build_index_array(const ThresholdedSlice& slice) {
  const Raster& img = slice.image;
  const int col_digits = decimal_digits(img.width() + 1);
  const int row_digits = decimal_digits(img.height() + 1);
  if (col_digits > 9 || row_digits > 9) {
    throw DataError("image dimensions too large for index encoding");
  }

  IndexArray ia;
  ia.width = img.width();
  ia.height = img.height();
  ia.scale_exp = col_digits;
  ia.encoded.assign(img.size(), 0);

  const std::uint64_t scale = pow10_u64(ia.scale_exp);
  std::size_t i = 0;
  for (int r = 0; r < img.height(); ++r) {
    const std::uint64_t row_part = static_cast<std::uint64_t>(r + 1) * scale;
    for (int c = 0; c < img.width(); ++c, ++i) {
      if (img.pixels()[i] != 0) {
        ia.encoded[i] = row_part + static_cast<std::uint64_t>(c + 1);
      }
    }
  }
  return ia;
}

std::pair<int, int> decode_index(std::uint64_t value, int scale_exp) {
  if (value == 0) {
    throw std::invalid_argument("cannot decode the background sentinel 0");
  }
  const std::uint64_t scale = pow10_u64(scale_exp);
  const int row = static_cast<int>(value / scale) - 1;
  const int col = static_cast<int>(value % scale) - 1;
  return {row, col};
}

}  // namespace ctseg
