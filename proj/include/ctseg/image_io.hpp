#ifndef CTSEG_IMAGE_IO_HPP
#define CTSEG_IMAGE_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ctseg/raster.hpp"

namespace ctseg {

// One dataset-manifest line: acquisition position, slice filename and an
// optional ground-truth filename, all relative to the dataset directory.
struct ManifestEntry {
  int acq_index = 0;
  std::string filename;
  std::optional<std::string> truth_filename;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;  // unique acq_index, ascending
};

// Parses `acq_index<TAB>filename[<TAB>truth_filename]` lines; blank lines and
// lines starting with '#' are skipped. Entries are sorted by acq_index.
DatasetManifest read_manifest(const std::filesystem::path& path);

// Reads an 8-bit grayscale image, dispatching on the file magic: binary
// portable graymap (P5, maxval 255) or portable network graphics. Throws
// DataError on malformed input or unsupported depth/color.
GraySlice read_image(const std::filesystem::path& path);

// Writes by extension: .pgm/.pnm as binary P5, .png as 8-bit grayscale PNG.
// Round-trips are bit-exact in both formats.
void write_image(const Raster& image, const std::filesystem::path& path);

// write_image to a temporary name in the same directory, then rename.
void write_image_atomic(const Raster& image, const std::filesystem::path& path);

// Dataset plus the original filenames, kept for naming the outputs.
struct LoadedDataset {
  CtDataset dataset;
  std::vector<std::string> filenames;  // aligned with dataset.slices
};

// With a manifest the acquisition order follows it; without one, image files
// are taken in lexicographic filename order with acq_index = rank. All slices
// must be 8-bit grayscale with one common size.
LoadedDataset load_dataset(const std::filesystem::path& dir,
                           const std::optional<std::filesystem::path>& manifest = {});

}  // namespace ctseg

#endif
