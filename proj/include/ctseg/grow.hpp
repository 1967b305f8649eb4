#ifndef CTSEG_GROW_HPP
#define CTSEG_GROW_HPP

#include "ctseg/raster.hpp"
#include "ctseg/seed.hpp"

namespace ctseg {

// Region grown from a seed over the 0-valued pixels of a binary slice.
// support holds 1 inside the region, 0 elsewhere; area is its pixel count.
struct GrownRegion {
  Raster support;
  long area = 0;
  SeedPoint seed;
  int acq_index = 0;
};

// Maximal 8-connected component of 0-valued pixels containing the seed;
// 255 pixels are the stop boundary. Throws std::invalid_argument when the
// seed is out of bounds or sits on a 255 pixel.
GrownRegion grow_floodfill(const BinarySlice& binary, SeedPoint seed);

// Split-and-grow variant: the image is split at the seed's row and column
// into four sub-images, each grown by directional scanline passes from the
// corner nearest the global seed, with the passes repeated to a fixpoint and
// the sub-images merged at the split axes. Produces the identical support to
// grow_floodfill on every input.
GrownRegion grow_splitquad(const BinarySlice& binary, SeedPoint seed);

}  // namespace ctseg

#endif
