#ifndef CTSEG_RASTER_HPP
#define CTSEG_RASTER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ctseg {

// Every intensity at or above this value is treated as skull.
inline constexpr std::uint8_t kSkullThreshold = 240;

// Row-major 8-bit grayscale raster.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }
  std::uint8_t operator()(int row, int col) const {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::uint8_t& operator()(int row, int col) {
    return pixels_[static_cast<std::size_t>(row) * width_ + col];
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  long count_nonzero() const;
  bool same_shape(const Raster& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Raster&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// One acquired CT slice. acq_index is the position in acquisition order.
struct GraySlice {
  Raster image;
  int acq_index = 0;
};

// Slice after fixed-threshold skull removal: no pixel at or above the threshold survives.
struct ThresholdedSlice {
  Raster image;
  int acq_index = 0;
};

// Two-level slice: 0 below the threshold, 255 at or above it.
struct BinarySlice {
  Raster image;
  int acq_index = 0;
};

// All slices of one patient sitting, uniform dimensions, acq_index strictly increasing.
struct CtDataset {
  std::vector<GraySlice> slices;
  std::string source_id;
};

// Throws DataError if the dataset invariants do not hold.
void validate_dataset(const CtDataset& ds);

// Positional encoding of nonzero pixels: encoded(r,c) = (r+1)*10^scale_exp + (c+1)
// for nonzero source pixels, 0 elsewhere. scale_exp reserves the decimal digits
// of the column field, derived from width+1 so the two fields never overlap.
struct IndexArray {
  int width = 0;
  int height = 0;
  int scale_exp = 0;
  std::vector<std::uint64_t> encoded;

  std::uint64_t at(int row, int col) const {
    return encoded[static_cast<std::size_t>(row) * width + col];
  }
};

// Number of decimal digits of v (v >= 1).
int decimal_digits(long v);

// Zeroes every pixel at or above thresh, keeps the rest unchanged.
ThresholdedSlice threshold_skull(const GraySlice& slice, std::uint8_t thresh = kSkullThreshold);

// 0 below thresh, 255 at or above.
BinarySlice binarize(const GraySlice& slice, std::uint8_t thresh = kSkullThreshold);

// Throws DataError when a dimension would need more than 9 decimal digits.
IndexArray build_index_array(const ThresholdedSlice& slice);

// Inverse of the encoding; value must be nonzero (0 is the background sentinel).
std::pair<int, int> decode_index(std::uint64_t value, int scale_exp);

}  // namespace ctseg

#endif
