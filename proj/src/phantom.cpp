#include "ctseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "ctseg/errors.hpp"
#include "ctseg/image_io.hpp"

namespace ctseg {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Bounded draws built directly on the engine output so the byte stream is
// identical across standard libraries.
int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double rand_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct HeadGeometry {
  double center_row = 0;
  double center_col = 0;
  double outer_a_max = 0;  // column semi-axis of the largest skull ellipse
  double outer_b_max = 0;  // row semi-axis
  double ring_thickness = 0;
  int headrest_band = 0;
};

int um_margin_for_width(int width) {
  return std::max(1, static_cast<int>(std::lround(10.0 * width / 512.0)));
}

HeadGeometry plan_geometry(const PhantomSpec& spec) {
  HeadGeometry g;
  g.headrest_band = spec.headrest ? std::max(10, spec.height / 14) : 0;
  const int gap = spec.headrest ? um_margin_for_width(spec.width) + 20 : 6;
  const int top_limit = 4;
  const int bottom_limit = spec.height - 1 - g.headrest_band - gap;

  g.center_row = (top_limit + bottom_limit) / 2.0;
  g.center_col = spec.width / 2.0;
  g.outer_b_max = (bottom_limit - top_limit) / 2.0;
  g.outer_a_max = std::min(spec.width / 2.0 - 5.0, g.outer_b_max * 1.3);
  g.ring_thickness = std::clamp(std::min(g.outer_a_max, g.outer_b_max) * 0.045, 3.0, 7.0);

  if (g.outer_a_max < 10.0 || g.outer_b_max < 10.0) {
    throw DataError("phantom spec: image too small for the requested geometry");
  }
  return g;
}

void validate_spec(const PhantomSpec& spec) {
  if (spec.slice_count < 1) throw DataError("phantom spec: slice_count must be at least 1");
  if (spec.width < 48 || spec.height < 48) {
    throw DataError("phantom spec: width and height must be at least 48");
  }
  if (spec.skull_min < 240 || spec.skull_min > spec.skull_max) {
    throw DataError("phantom spec: skull intensity range must lie within [240,255]");
  }
  if (spec.brain_min < 1 || spec.brain_min > spec.brain_max || spec.brain_max >= 240) {
    throw DataError("phantom spec: brain intensity range must lie within [1,239]");
  }
  if (spec.empty_terminal_slices < 0 || spec.empty_terminal_slices >= spec.slice_count) {
    throw DataError("phantom spec: empty_terminal_slices must leave at least one brain slice");
  }
  const int nonempty = spec.slice_count - spec.empty_terminal_slices;
  if (spec.nasal_slices < 0 || spec.nasal_slices > nonempty) {
    throw DataError("phantom spec: nasal_slices exceeds the non-empty slice count");
  }
  if (spec.calcification) {
    const Calcification& calc = *spec.calcification;
    if (calc.slice < 0 || calc.slice >= spec.slice_count) {
      throw DataError("phantom spec: calcification slice index out of range");
    }
    if (calc.radius < 1) throw DataError("phantom spec: calcification radius must be at least 1");
    if (calc.intensity < 241) {
      throw DataError("phantom spec: calcification intensity must be in [241,255]");
    }
  }
}

// Triangular size profile over the non-empty slices, peaking at exactly one
// index so the maximum-area slice is unique.
std::vector<double> ramp_profile(int count) {
  std::vector<double> ramp(count, 1.0);
  if (count == 1) return ramp;
  const int peak = std::clamp(static_cast<int>(count * 11L / 20), 0, count - 1);
  const double lo = 0.42;
  for (int k = 0; k < count; ++k) {
    if (k == peak) continue;
    const double raw = k < peak ? static_cast<double>(1 + k) / (1 + peak)
                                : static_cast<double>(count - k) / (count - peak);
    ramp[k] = lo + (1.0 - lo) * raw;  // strictly below the peak's 1.0
  }
  return ramp;
}

void draw_headrest(Raster& img, const PhantomSpec& spec, const HeadGeometry& g,
                   std::mt19937_64& rng) {
  const int h = spec.height;
  const int w = spec.width;
  const int band_top = h - 1 - g.headrest_band;
  const int col_lo = static_cast<int>(w * 0.12);
  const int col_hi = static_cast<int>(w * 0.88);
  for (int c = col_lo; c <= col_hi; ++c) {
    const double dx = c - w / 2.0;
    const int base = (h - 4) - static_cast<int>(dx * dx / (w * 1.2));
    // metal arc
    for (int r = std::max(base, band_top); r <= std::min(base + 2, h - 2); ++r) {
      img(r, c) = static_cast<std::uint8_t>(rand_int(rng, 243, 251));
    }
    // padding above the metal, the part that survives thresholding
    for (int r = std::max(base - 4, band_top); r <= std::min(base - 1, h - 2); ++r) {
      img(r, c) = static_cast<std::uint8_t>(rand_int(rng, 70, 120));
    }
  }
}

}  // namespace

PhantomDataset generate(const PhantomSpec& spec) {
  validate_spec(spec);
  const HeadGeometry g = plan_geometry(spec);

  const int empty_start = spec.empty_terminal_slices / 2;
  const int empty_end = spec.empty_terminal_slices - empty_start;
  const int nonempty = spec.slice_count - spec.empty_terminal_slices;
  const std::vector<double> ramp = ramp_profile(nonempty);

  if (spec.calcification) {
    const int s = spec.calcification->slice;
    if (s < empty_start || s >= spec.slice_count - empty_end) {
      throw DataError("phantom spec: calcification slice has no intracranial content");
    }
  }

  PhantomDataset pd;
  pd.spec = spec;
  pd.dataset.source_id = "phantom-" + std::to_string(spec.rng_seed);
  pd.dataset.slices.reserve(spec.slice_count);
  pd.truth.reserve(spec.slice_count);

  for (int s = 0; s < spec.slice_count; ++s) {
    std::mt19937_64 rng(mix_seed(spec.rng_seed, static_cast<std::uint64_t>(s)));
    Raster img(spec.width, spec.height, 0);
    Raster truth(spec.width, spec.height, 0);

    const bool empty = s < empty_start || s >= spec.slice_count - empty_end;
    if (!empty) {
      const int k = s - empty_start;
      const double f = ramp[k];
      const double a_out = g.outer_a_max * f;
      const double b_out = g.outer_b_max * f;
      const double a_in = a_out - g.ring_thickness;
      const double b_in = b_out - g.ring_thickness;
      const double min_ab = std::min(a_out, b_out);

      for (int r = 0; r < spec.height; ++r) {
        for (int c = 0; c < spec.width; ++c) {
          const double dx = c - g.center_col;
          const double dy = r - g.center_row;
          const double e_in = (dx * dx) / (a_in * a_in) + (dy * dy) / (b_in * b_in);
          if (e_in < 1.0) {
            img(r, c) = static_cast<std::uint8_t>(rand_int(rng, spec.brain_min, spec.brain_max));
            truth(r, c) = 255;
            continue;
          }
          const double e_out = (dx * dx) / (a_out * a_out) + (dy * dy) / (b_out * b_out);
          if (e_out <= 1.0) {
            img(r, c) = static_cast<std::uint8_t>(rand_int(rng, spec.skull_min, spec.skull_max));
            continue;
          }
          const double a_sc = a_out + 2.0;
          const double b_sc = b_out + 2.0;
          if ((dx * dx) / (a_sc * a_sc) + (dy * dy) / (b_sc * b_sc) <= 1.0) {
            img(r, c) = static_cast<std::uint8_t>(rand_int(rng, 30, 90));
          }
        }
      }

      // dark CSF pockets on the larger slices
      if (f > 0.75) {
        const int pockets = rand_int(rng, 1, 2);
        const std::uint8_t csf_lo = static_cast<std::uint8_t>(std::max(1, spec.brain_min - 10));
        const std::uint8_t csf_hi = static_cast<std::uint8_t>(std::max(1, spec.brain_min - 5));
        for (int p = 0; p < pockets; ++p) {
          const double pr = g.center_row + (rand_unit(rng) - 0.5) * 0.7 * b_in;
          const double pc = g.center_col + (rand_unit(rng) - 0.5) * 0.7 * a_in;
          const double rad = 2.0 + rand_unit(rng) * 3.0;
          for (int r = static_cast<int>(pr - rad); r <= static_cast<int>(pr + rad) + 1; ++r) {
            for (int c = static_cast<int>(pc - rad); c <= static_cast<int>(pc + rad) + 1; ++c) {
              if (!img.in_bounds(r, c) || truth(r, c) == 0) continue;
              const double dr = r - pr;
              const double dc = c - pc;
              if (dr * dr + dc * dc <= rad * rad) {
                img(r, c) = static_cast<std::uint8_t>(rand_int(rng, csf_lo, csf_hi));
              }
            }
          }
        }
      }

      if (spec.calcification && spec.calcification->slice == s) {
        const Calcification& calc = *spec.calcification;
        const int cr = calc.row >= 0 ? calc.row : static_cast<int>(g.center_row);
        const int cc = calc.col >= 0 ? calc.col : static_cast<int>(g.center_col);
        const int reach = calc.radius + 2;  // 2 px clearance from the skull ring
        for (int r = cr - reach; r <= cr + reach; ++r) {
          for (int c = cc - reach; c <= cc + reach; ++c) {
            const double dx = c - g.center_col;
            const double dy = r - g.center_row;
            if (!img.in_bounds(r, c) ||
                (dx * dx) / (a_in * a_in) + (dy * dy) / (b_in * b_in) >= 1.0) {
              throw DataError(
                  "phantom spec: calcification does not fit strictly inside the brain");
            }
          }
        }
        for (int r = cr - calc.radius; r <= cr + calc.radius; ++r) {
          for (int c = cc - calc.radius; c <= cc + calc.radius; ++c) {
            const int dr = r - cr;
            const int dc = c - cc;
            if (dr * dr + dc * dc <= calc.radius * calc.radius) {
              img(r, c) = calc.intensity;
            }
          }
        }
      }

      // facial bone and muscle below the ring on the leading slices
      if (k < spec.nasal_slices) {
        const double bone_reach = 1.0 + 7.0 / min_ab;
        const double muscle_reach = 1.0 + 13.0 / min_ab;
        for (int r = 0; r < spec.height; ++r) {
          for (int c = 0; c < spec.width; ++c) {
            const double dx = c - g.center_col;
            const double dy = r - g.center_row;
            if (dy <= 0) continue;  // facial structures point downward
            const double e = std::sqrt((dx * dx) / (a_out * a_out) + (dy * dy) / (b_out * b_out));
            const double angle_off = std::abs(std::atan2(dy, dx) - 1.5707963267948966);
            if (e > 1.0 && e <= bone_reach && angle_off <= 0.45) {
              img(r, c) = static_cast<std::uint8_t>(rand_int(rng, spec.skull_min, spec.skull_max));
            } else if (e > bone_reach && e <= muscle_reach && angle_off <= 0.35) {
              img(r, c) = static_cast<std::uint8_t>(rand_int(rng, 60, 160));
            }
          }
        }
      }
    }

    if (spec.headrest) {
      draw_headrest(img, spec, g, rng);
    }

    pd.dataset.slices.push_back(GraySlice{std::move(img), s});
    pd.truth.push_back(std::move(truth));
  }

  // The ramp guarantees a unique maximum-area slice; fail loudly if the
  // rasterization ever collapses two areas.
  long best_area = -1;
  int best_count = 0;
  for (const Raster& t : pd.truth) {
    const long area = t.count_nonzero();
    if (area > best_area) {
      best_area = area;
      best_count = 1;
    } else if (area == best_area) {
      ++best_count;
    }
  }
  if (best_area <= 0 || best_count != 1) {
    throw DataError("phantom spec: geometry produced no unique maximum-area slice");
  }

  return pd;
}

std::filesystem::path write_phantom(const PhantomDataset& pd, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir / "truth", ec);
  if (ec) {
    throw DataError("cannot create phantom directory " + dir.string() + ": " + ec.message());
  }

  nlohmann::json meta;
  meta["source_id"] = pd.dataset.source_id;
  meta["spec"] = {
      {"slice_count", pd.spec.slice_count},
      {"width", pd.spec.width},
      {"height", pd.spec.height},
      {"rng_seed", pd.spec.rng_seed},
      {"skull_min", pd.spec.skull_min},
      {"skull_max", pd.spec.skull_max},
      {"brain_min", pd.spec.brain_min},
      {"brain_max", pd.spec.brain_max},
      {"headrest", pd.spec.headrest},
      {"nasal_slices", pd.spec.nasal_slices},
      {"empty_terminal_slices", pd.spec.empty_terminal_slices},
  };
  if (pd.spec.calcification) {
    meta["spec"]["calcification"] = {{"slice", pd.spec.calcification->slice},
                                     {"row", pd.spec.calcification->row},
                                     {"col", pd.spec.calcification->col},
                                     {"radius", pd.spec.calcification->radius},
                                     {"intensity", pd.spec.calcification->intensity}};
  }
  meta["slices"] = nlohmann::json::array();

  std::string manifest_text;
  char name[64];
  for (std::size_t i = 0; i < pd.dataset.slices.size(); ++i) {
    const GraySlice& slice = pd.dataset.slices[i];
    std::snprintf(name, sizeof(name), "slice_%03d.pgm", slice.acq_index);
    const std::string slice_name = name;
    std::snprintf(name, sizeof(name), "truth/truth_%03d.pgm", slice.acq_index);
    const std::string truth_name = name;

    write_image(slice.image, dir / slice_name);
    write_image(pd.truth[i], dir / truth_name);

    manifest_text += std::to_string(slice.acq_index) + "\t" + slice_name + "\t" + truth_name + "\n";
    meta["slices"].push_back({{"acq_index", slice.acq_index},
                              {"file", slice_name},
                              {"truth_file", truth_name},
                              {"truth_area", pd.truth[i].count_nonzero()}});
  }

  const fs::path manifest_path = dir / "manifest.txt";
  {
    std::ofstream out(manifest_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + manifest_path.string());
    out << manifest_text;
  }
  {
    const fs::path meta_path = dir / "phantom.json";
    std::ofstream out(meta_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + meta_path.string());
    out << meta.dump(2) << "\n";
  }
  return manifest_path;
}

}  // namespace ctseg
