#ifndef CTSEG_REGIONS_HPP
#define CTSEG_REGIONS_HPP

#include <cstdint>
#include <vector>

#include "ctseg/raster.hpp"

namespace ctseg {

// Labels of the 8-connected components formed by the nonzero pixels.
// labels[i] is 0 on background and 1..count on foreground.
struct ComponentLabels {
  std::vector<std::int32_t> labels;
  int count = 0;
};

ComponentLabels label_nonzero_components_8(const Raster& img);

// Marks every 0-valued pixel reachable from the image border through
// 4-connected 0-valued pixels (the exterior of the nonzero support).
// Zero pixels left unmarked are enclosed holes.
Raster flood_zero_from_border_4(const Raster& img);

}  // namespace ctseg

#endif
