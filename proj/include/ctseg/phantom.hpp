#ifndef CTSEG_PHANTOM_HPP
#define CTSEG_PHANTOM_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "ctseg/raster.hpp"

namespace ctseg {

// High-intensity disk inside the brain of one slice; removed by thresholding
// and restored by hole filling.
struct Calcification {
  int slice = 0;        // acq_index of the carrying slice
  int row = -1;         // disk center; negative means centered on the head
  int col = -1;
  int radius = 3;
  std::uint8_t intensity = 250;  // must be in [241,255]
};

struct PhantomSpec {
  int slice_count = 24;
  int width = 512;
  int height = 512;
  std::uint64_t rng_seed = 1;
  std::uint8_t skull_min = 240;
  std::uint8_t skull_max = 255;
  std::uint8_t brain_min = 20;
  std::uint8_t brain_max = 200;
  std::optional<Calcification> calcification;
  bool headrest = false;
  int nasal_slices = 0;            // leading non-empty slices carrying facial structures
  int empty_terminal_slices = 0;   // slices with no intracranial content, split across both ends
};

// Synthetic dataset plus pixel-exact ground truth (255 on brain matter).
struct PhantomDataset {
  CtDataset dataset;
  std::vector<Raster> truth;
  PhantomSpec spec;
};

// Deterministic for a given rng_seed: elliptical skull ring with a textured
// brain interior whose area ramps up to a unique maximum and back down, plus
// the requested distractors. Throws DataError on an inconsistent spec.
PhantomDataset generate(const PhantomSpec& spec);

// Writes slices, ground truth and manifests under dir; returns the path of
// the dataset manifest consumed by the loader.
std::filesystem::path write_phantom(const PhantomDataset& pd, const std::filesystem::path& dir);

}  // namespace ctseg

#endif
