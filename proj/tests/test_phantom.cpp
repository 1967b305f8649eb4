#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ctseg/errors.hpp"
#include "ctseg/image_io.hpp"
#include "ctseg/phantom.hpp"
#include "ctseg/raster.hpp"
#include "oracles.hpp"

using namespace ctseg;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("phantom");

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ctseg_test_" + name);
  fs::remove_all(dir);
  return dir;
}

PhantomSpec small_spec() {
  PhantomSpec spec;
  spec.slice_count = 6;
  spec.width = 96;
  spec.height = 96;
  spec.rng_seed = 99;
  return spec;
}

}  // namespace

TEST_CASE("same seed gives bit-identical datasets") {
  PhantomSpec spec = small_spec();
  spec.headrest = true;
  spec.height = 128;
  spec.nasal_slices = 2;
  const PhantomDataset a = generate(spec);
  const PhantomDataset b = generate(spec);
  REQUIRE(a.dataset.slices.size() == b.dataset.slices.size());
  for (std::size_t i = 0; i < a.dataset.slices.size(); ++i) {
    CHECK(a.dataset.slices[i].image == b.dataset.slices[i].image);
    CHECK(a.truth[i] == b.truth[i]);
  }

  spec.rng_seed = 100;
  const PhantomDataset c = generate(spec);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.dataset.slices.size(); ++i) {
    if (!(a.dataset.slices[i].image == c.dataset.slices[i].image)) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("single-slice spec yields one ring-plus-interior slice") {
  PhantomSpec spec = small_spec();
  spec.slice_count = 1;
  const PhantomDataset pd = generate(spec);
  REQUIRE(pd.dataset.slices.size() == 1);
  CHECK(pd.truth[0].count_nonzero() > 0);

  // truth is exactly the sub-skull interior: nonzero, below the threshold
  const GraySlice& slice = pd.dataset.slices[0];
  long skull_pixels = 0;
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      if (pd.truth[0](r, c) != 0) {
        CHECK(slice.image(r, c) > 0);
        CHECK(slice.image(r, c) < 240);
      }
      if (slice.image(r, c) >= 240) ++skull_pixels;
    }
  }
  CHECK(skull_pixels > 0);
}

TEST_CASE("every skull ring encloses the truth region") {
  PhantomSpec spec = small_spec();
  spec.slice_count = 10;
  spec.empty_terminal_slices = 2;
  spec.nasal_slices = 2;
  spec.headrest = true;
  spec.width = 128;
  spec.height = 128;
  const PhantomDataset pd = generate(spec);

  for (std::size_t i = 0; i < pd.dataset.slices.size(); ++i) {
    if (pd.truth[i].count_nonzero() == 0) continue;
    // 8-connected flood over sub-threshold pixels from the border must never
    // touch a truth pixel
    const Raster& img = pd.dataset.slices[i].image;
    const std::vector<int> labels =
        oracle::label_components(img, 8, [](std::uint8_t v) { return v < 240; });
    int max_label = 0;
    for (const int l : labels) max_label = std::max(max_label, l);
    std::vector<char> reaches_border(max_label + 1, 0);
    const int w = img.width();
    const int h = img.height();
    for (int c = 0; c < w; ++c) {
      reaches_border[labels[c]] = 1;
      reaches_border[labels[(h - 1) * w + c]] = 1;
    }
    for (int r = 0; r < h; ++r) {
      reaches_border[labels[r * w]] = 1;
      reaches_border[labels[r * w + w - 1]] = 1;
    }
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (pd.truth[i](r, c) != 0) {
          REQUIRE(labels[r * w + c] != 0);
          CHECK(!reaches_border[labels[r * w + c]]);
        }
      }
    }
  }
}

TEST_CASE("headrest stays disconnected from the skull") {
  PhantomSpec spec = small_spec();
  spec.headrest = true;
  spec.width = 160;
  spec.height = 160;
  const PhantomDataset pd = generate(spec);

  for (const GraySlice& slice : pd.dataset.slices) {
    // components of all nonzero pixels: the head complex (ring + interior +
    // scalp) and the headrest (metal + padding) must be distinct
    const std::vector<int> labels = oracle::label_components(
        slice.image, 8, [](std::uint8_t v) { return v != 0; });
    const int w = slice.image.width();
    int head_label = 0;
    int rest_label = 0;
    for (int r = 0; r < slice.image.height(); ++r) {
      for (int c = 0; c < w; ++c) {
        if (slice.image(r, c) >= 240) {
          if (r > slice.image.height() - 14) {
            rest_label = labels[r * w + c];
          } else {
            head_label = labels[r * w + c];
          }
        }
      }
    }
    REQUIRE(head_label != 0);
    REQUIRE(rest_label != 0);
    CHECK(head_label != rest_label);
  }
}

TEST_CASE("maximum truth area is unique and the ramp rises then falls") {
  PhantomSpec spec = small_spec();
  spec.slice_count = 15;
  const PhantomDataset pd = generate(spec);

  std::vector<long> areas;
  for (const Raster& t : pd.truth) areas.push_back(t.count_nonzero());

  std::size_t peak = 0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    if (areas[i] > areas[peak]) peak = i;
  }
  for (std::size_t i = 0; i < areas.size(); ++i) {
    if (i != peak) CHECK(areas[i] < areas[peak]);
  }
  for (std::size_t i = 1; i <= peak; ++i) CHECK(areas[i] > areas[i - 1]);
  for (std::size_t i = peak + 1; i < areas.size(); ++i) CHECK(areas[i] < areas[i - 1]);
}

TEST_CASE("calcification punches a hole in the thresholded slice") {
  PhantomSpec spec = small_spec();
  spec.calcification = Calcification{3, -1, -1, 4, 250};
  const PhantomDataset pd = generate(spec);

  const GraySlice& slice = pd.dataset.slices[3];
  const ThresholdedSlice ti = threshold_skull(slice);
  long hole_pixels = 0;
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const bool is_calc = slice.image(r, c) == 250 && pd.truth[3](r, c) != 0;
      if (is_calc) {
        ++hole_pixels;
        CHECK(ti.image(r, c) == 0);
      }
    }
  }
  // disk of radius 4 has 49 pixels; brain texture may also hit 250 elsewhere
  CHECK(hole_pixels >= 49);
}

TEST_CASE("inconsistent specs are rejected") {
  PhantomSpec spec = small_spec();
  spec.calcification = Calcification{99, -1, -1, 3, 250};
  CHECK_THROWS_AS(static_cast<void>(generate(spec)), DataError);

  spec = small_spec();
  spec.calcification = Calcification{0, 5, 5, 3, 250};  // near the corner, outside the brain
  CHECK_THROWS_AS(static_cast<void>(generate(spec)), DataError);

  spec = small_spec();
  spec.empty_terminal_slices = spec.slice_count;
  CHECK_THROWS_AS(static_cast<void>(generate(spec)), DataError);

  spec = small_spec();
  spec.brain_max = 250;
  CHECK_THROWS_AS(static_cast<void>(generate(spec)), DataError);

  spec = small_spec();
  spec.nasal_slices = spec.slice_count + 1;
  CHECK_THROWS_AS(static_cast<void>(generate(spec)), DataError);
}

TEST_CASE("write then load round-trips the dataset") {
  const fs::path dir = temp_dir("phantom_roundtrip");
  PhantomSpec spec = small_spec();
  spec.empty_terminal_slices = 1;
  const PhantomDataset pd = generate(spec);
  const fs::path manifest = write_phantom(pd, dir);
  CHECK(fs::exists(manifest));
  CHECK(fs::exists(dir / "phantom.json"));

  const LoadedDataset loaded = load_dataset(dir, manifest);
  REQUIRE(loaded.dataset.slices.size() == pd.dataset.slices.size());
  for (std::size_t i = 0; i < loaded.dataset.slices.size(); ++i) {
    CHECK(loaded.dataset.slices[i].image == pd.dataset.slices[i].image);
    CHECK(loaded.dataset.slices[i].acq_index == pd.dataset.slices[i].acq_index);
  }
  fs::remove_all(dir);
}

TEST_CASE("shuffled filenames with a manifest keep acquisition order") {
  const fs::path dir = temp_dir("phantom_shuffle");
  const PhantomDataset pd = generate(small_spec());
  write_phantom(pd, dir);

  // scramble the names and write a manifest mapping them back
  std::ofstream manifest(dir / "scrambled.txt");
  for (int i = 0; i < 6; ++i) {
    const std::string old_name = "slice_00" + std::to_string(i) + ".pgm";
    const std::string new_name = "z_" + std::to_string((i * 5) % 7) + ".pgm";
    fs::rename(dir / old_name, dir / new_name);
    manifest << i << "\t" << new_name << "\n";
  }
  manifest.close();

  const LoadedDataset loaded = load_dataset(dir, dir / "scrambled.txt");
  REQUIRE(loaded.dataset.slices.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(loaded.dataset.slices[i].image == pd.dataset.slices[i].image);
  }
  fs::remove_all(dir);
}

TEST_CASE("unwritable destination fails with path context") {
  const PhantomDataset pd = generate(small_spec());
  CHECK_THROWS_AS(static_cast<void>(write_phantom(pd, "/proc/ctseg_nowhere")), DataError);
}

TEST_SUITE_END();
