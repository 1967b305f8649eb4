#ifndef CTSEG_PIPELINE_HPP
#define CTSEG_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "ctseg/compactness.hpp"
#include "ctseg/evaluation.hpp"
#include "ctseg/masking.hpp"
#include "ctseg/phantom.hpp"
#include "ctseg/raster.hpp"
#include "ctseg/seed.hpp"

namespace ctseg {

struct RunConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;                // empty: <input_dir>/segmented
  std::optional<std::filesystem::path> manifest;   // empty: <input_dir>/manifest.txt when present
  std::uint8_t threshold = kSkullThreshold;
  int um_radius = 0;                               // 0: 10 at width 512, scaled linearly
  long min_area = 0;                               // slice-positivity floor, used by eval
  bool debug = false;
  int threads = 1;
};

// Default outer-mask dilation radius for a given image width.
int default_um_radius(int width);

struct RunResult {
  std::filesystem::path output_dir;
  int slices_written = 0;
  int reference_acq_index = -1;
  SeedPoint seed;
};

// Full batch run: load, threshold, pick the reference slice, place the seed,
// grow, build both masks, segment every slice and write `<stem>_bm.<ext>`
// files. With debug set, both growing algorithms run and must agree, and the
// compactness/seed/mask diagnostics are written next to the outputs.
RunResult run_pipeline(const RunConfig& config);

// In-memory segmentation of an already-loaded dataset; shared by run_pipeline,
// bench and the tests.
struct SegmentationArtifacts {
  CompactnessReport report;
  SeedPoint seed;
  Mask im;
  Mask um;
  std::vector<SegmentedSlice> segmented;
  std::vector<std::pair<int, long>> im_areas;
};
SegmentationArtifacts segment_in_memory(const CtDataset& dataset, const RunConfig& config);

struct BenchReport {
  double threshold_ms = 0;
  double reference_ms = 0;
  double seed_ms = 0;
  double grow_floodfill_ms = 0;  // comparison only, not part of the total
  double grow_splitquad_ms = 0;
  double masks_ms = 0;
  double segment_ms = 0;
  double total_ms = 0;           // production stages end to end
  int slices = 0;
  int width = 0;
  int height = 0;
  int reference_acq_index = -1;
};

// Generates the phantom in memory and times every stage of the segmentation,
// file I/O excluded. Also times both growing algorithms on the reference
// slice for comparison.
BenchReport bench(const RunConfig& config, const PhantomSpec& spec);

void print_bench_csv(const BenchReport& report, std::ostream& out);

// Evaluation entry point behind the `eval` subcommand. `truth` is either a
// directory of ground-truth rasters (lexicographic order, aligned by rank) or
// a manifest file with a truth column. Prints an aligned table to `table_out`
// and, when csv_path is set, writes the same row as CSV.
EvalCounts evaluate_results(const std::filesystem::path& results_dir,
                            const std::filesystem::path& truth, long min_area,
                            std::ostream& table_out,
                            const std::optional<std::filesystem::path>& csv_path);

}  // namespace ctseg

#endif
