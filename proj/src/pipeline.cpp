#include "ctseg/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "ctseg/errors.hpp"
#include "ctseg/grow.hpp"
#include "ctseg/image_io.hpp"
#include "parallel.hpp"

namespace ctseg {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct StageClock {
  BenchReport* report;
  Clock::time_point t0 = Clock::now();

  double lap(double BenchReport::* field) {
    const double ms = ms_since(t0);
    if (report) report->*field = ms;
    t0 = Clock::now();
    return ms;
  }
};

std::vector<ThresholdedSlice> threshold_all(const CtDataset& dataset, std::uint8_t thresh,
                                            int threads) {
  std::vector<ThresholdedSlice> tis(dataset.slices.size());
  detail::parallel_for(static_cast<int>(dataset.slices.size()), threads,
                       [&](int i) { tis[i] = threshold_skull(dataset.slices[i], thresh); });
  return tis;
}

SegmentationArtifacts segment_impl(const CtDataset& dataset, const RunConfig& config,
                                   BenchReport* timings) {
  validate_dataset(dataset);
  SegmentationArtifacts art;
  StageClock clock{timings};
  const Clock::time_point run_start = clock.t0;

  const std::vector<ThresholdedSlice> tis = threshold_all(dataset, config.threshold, config.threads);
  clock.lap(&BenchReport::threshold_ms);

  art.report = select_reference(tis, config.threads);
  clock.lap(&BenchReport::reference_ms);

  std::size_t ref_pos = 0;
  while (ref_pos < dataset.slices.size() &&
         dataset.slices[ref_pos].acq_index != art.report.chosen) {
    ++ref_pos;
  }

  art.seed = find_seed(tis[ref_pos]);
  clock.lap(&BenchReport::seed_ms);

  const BinarySlice b_ref = binarize(dataset.slices[ref_pos], config.threshold);
  std::optional<GrownRegion> fill_region;
  if (config.debug || timings) {
    fill_region = grow_floodfill(b_ref, art.seed);
  }
  clock.lap(&BenchReport::grow_floodfill_ms);

  const GrownRegion region = grow_splitquad(b_ref, art.seed);
  clock.lap(&BenchReport::grow_splitquad_ms);

  if (fill_region && region.support != fill_region->support) {
    throw PipelineError("region-growing mismatch: split-and-grow disagrees with flood fill on "
                        "slice acq_index " + std::to_string(b_ref.acq_index));
  }

  art.im = make_inner_mask(region);
  const int radius = config.um_radius > 0 ? config.um_radius
                                          : default_um_radius(dataset.slices.front().image.width());
  art.um = make_outer_mask(art.im, radius);
  clock.lap(&BenchReport::masks_ms);

  art.segmented = segment_dataset(dataset, art.report.chosen, art.im, art.um, config.threshold,
                                  &art.im_areas);
  clock.lap(&BenchReport::segment_ms);

  if (timings) {
    timings->total_ms = ms_since(run_start) - timings->grow_floodfill_ms;
    timings->slices = static_cast<int>(dataset.slices.size());
    timings->width = dataset.slices.front().image.width();
    timings->height = dataset.slices.front().image.height();
    timings->reference_acq_index = art.report.chosen;
  }
  return art;
}

Raster seed_overlay(const Raster& reference, SeedPoint seed) {
  Raster out = reference;
  const int arm = std::max(3, reference.width() / 64);
  for (int d = -arm; d <= arm; ++d) {
    const int r = seed.row + d;
    const int c = seed.col + d;
    if (out.in_bounds(r, seed.col)) {
      out(r, seed.col) = out(r, seed.col) >= 128 ? 0 : 255;
    }
    if (d != 0 && out.in_bounds(seed.row, c)) {
      out(seed.row, c) = out(seed.row, c) >= 128 ? 0 : 255;
    }
  }
  return out;
}

Raster mask_to_image(const Mask& mask) {
  Raster img = mask.support;
  for (std::uint8_t& p : img.pixels()) {
    if (p != 0) p = 255;
  }
  return img;
}

}  // namespace

int default_um_radius(int width) {
  return std::max(1, static_cast<int>(std::lround(10.0 * width / 512.0)));
}

SegmentationArtifacts segment_in_memory(const CtDataset& dataset, const RunConfig& config) {
  return segment_impl(dataset, config, nullptr);
}

RunResult run_pipeline(const RunConfig& config) {
  std::optional<fs::path> manifest = config.manifest;
  if (!manifest && fs::exists(config.input_dir / "manifest.txt")) {
    manifest = config.input_dir / "manifest.txt";
  }
  const LoadedDataset loaded = load_dataset(config.input_dir, manifest);

  const SegmentationArtifacts art = segment_in_memory(loaded.dataset, config);

  const fs::path out_dir =
      config.output_dir.empty() ? config.input_dir / "segmented" : config.output_dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }

  RunResult result;
  result.output_dir = out_dir;
  result.reference_acq_index = art.report.chosen;
  result.seed = art.seed;

  for (std::size_t i = 0; i < art.segmented.size(); ++i) {
    const fs::path src(loaded.filenames[i]);
    const fs::path name = src.stem().string() + "_bm" + src.extension().string();
    write_image_atomic(art.segmented[i].image, out_dir / name);
    ++result.slices_written;
  }

  if (config.debug) {
    {
      std::ofstream csv(out_dir / "compactness.csv");
      csv << "acq_index,C,chosen\n";
      char line[96];
      for (const auto& [acq, c] : art.report.per_slice) {
        std::snprintf(line, sizeof(line), "%d,%.6f,%d\n", acq, c,
                      acq == art.report.chosen ? 1 : 0);
        csv << line;
      }
    }
    {
      std::ofstream csv(out_dir / "mask_areas.csv");
      csv << "acq_index,im_area\n";
      for (const auto& [acq, area] : art.im_areas) {
        csv << acq << "," << area << "\n";
      }
    }
    std::size_t ref_pos = 0;
    while (ref_pos < loaded.dataset.slices.size() &&
           loaded.dataset.slices[ref_pos].acq_index != art.report.chosen) {
      ++ref_pos;
    }
    const fs::path ref_stem = fs::path(loaded.filenames[ref_pos]).stem();
    write_image_atomic(seed_overlay(loaded.dataset.slices[ref_pos].image, art.seed),
                       out_dir / (ref_stem.string() + "_seed.png"));
    write_image_atomic(mask_to_image(art.im), out_dir / "im.png");
    write_image_atomic(mask_to_image(art.um), out_dir / "um.png");
  }
  return result;
}

BenchReport bench(const RunConfig& config, const PhantomSpec& spec) {
  const PhantomDataset pd = generate(spec);
  BenchReport report;
  segment_impl(pd.dataset, config, &report);
  return report;
}

void print_bench_csv(const BenchReport& report, std::ostream& out) {
  char line[128];
  out << "stage,ms\n";
  std::snprintf(line, sizeof(line), "threshold,%.3f\n", report.threshold_ms);
  out << line;
  std::snprintf(line, sizeof(line), "reference_select,%.3f\n", report.reference_ms);
  out << line;
  std::snprintf(line, sizeof(line), "seed,%.3f\n", report.seed_ms);
  out << line;
  std::snprintf(line, sizeof(line), "grow_floodfill,%.3f\n", report.grow_floodfill_ms);
  out << line;
  std::snprintf(line, sizeof(line), "grow_splitquad,%.3f\n", report.grow_splitquad_ms);
  out << line;
  std::snprintf(line, sizeof(line), "masks,%.3f\n", report.masks_ms);
  out << line;
  std::snprintf(line, sizeof(line), "segment,%.3f\n", report.segment_ms);
  out << line;
  std::snprintf(line, sizeof(line), "total,%.3f\n", report.total_ms);
  out << line;
}

EvalCounts evaluate_results(const fs::path& results_dir, const fs::path& truth, long min_area,
                            std::ostream& table_out,
                            const std::optional<fs::path>& csv_path) {
  std::vector<SegmentedSlice> outputs;
  std::vector<Raster> truth_rasters;

  if (fs::is_regular_file(truth)) {
    // manifest mode: slice and truth filenames resolve against the manifest directory
    const DatasetManifest manifest = read_manifest(truth);
    const fs::path base = truth.parent_path();
    for (const ManifestEntry& e : manifest.entries) {
      if (!e.truth_filename) {
        throw DataError(truth.string() + ": entry for acq_index " + std::to_string(e.acq_index) +
                        " has no truth filename");
      }
      const fs::path src(e.filename);
      const fs::path result_name = src.stem().string() + "_bm" + src.extension().string();
      const fs::path result_path = results_dir / result_name;
      if (!fs::exists(result_path)) {
        throw DataError("missing segmentation output " + result_path.string());
      }
      GraySlice out = read_image(result_path);
      outputs.push_back(SegmentedSlice{std::move(out.image), e.acq_index});
      truth_rasters.push_back(read_image(base / *e.truth_filename).image);
    }
  } else if (fs::is_directory(truth)) {
    const LoadedDataset results = load_dataset(results_dir);
    const LoadedDataset truths = load_dataset(truth);
    if (results.dataset.slices.size() != truths.dataset.slices.size()) {
      throw DataError("results and ground truth differ in slice count (" +
                      std::to_string(results.dataset.slices.size()) + " vs " +
                      std::to_string(truths.dataset.slices.size()) + ")");
    }
    for (std::size_t i = 0; i < results.dataset.slices.size(); ++i) {
      outputs.push_back(SegmentedSlice{results.dataset.slices[i].image,
                                       results.dataset.slices[i].acq_index});
      truth_rasters.push_back(truths.dataset.slices[i].image);
    }
  } else {
    throw DataError(truth.string() + " is neither a truth directory nor a manifest file");
  }

  const EvalCounts counts = classify_slices(outputs, truth_rasters, min_area);
  const EvalReport report = compute_report(counts);

  char line[256];
  std::snprintf(line, sizeof(line), "%5s %5s %6s %5s %5s %5s %12s %12s %8s %8s %8s %10s\n", "TP",
                "FN", "AbsFP", "TN", "n", "CS", "sensitivity", "specificity", "PPV", "NPV",
                "%error", "%accuracy");
  table_out << line;
  std::snprintf(line, sizeof(line), "%5ld %5ld %6ld %5ld %5ld %5ld %12s %12s %8s %8s %8.3f %10.3f\n",
                counts.tp, counts.fn, counts.abs_fp, counts.tn, counts.n(), counts.correct(),
                format_metric(report.sensitivity).c_str(), format_metric(report.specificity).c_str(),
                format_metric(report.ppv).c_str(), format_metric(report.npv).c_str(),
                report.pct_error, report.pct_accuracy);
  table_out << line;

  if (csv_path) {
    std::ofstream csv(*csv_path);
    if (!csv) throw DataError("cannot write " + csv_path->string());
    csv << "tp,fn,abs_fp,tn,n,cs,sensitivity,specificity,ppv,npv,pct_error,pct_accuracy\n";
    std::snprintf(line, sizeof(line), "%ld,%ld,%ld,%ld,%ld,%ld,%s,%s,%s,%s,%.3f,%.3f\n", counts.tp,
                  counts.fn, counts.abs_fp, counts.tn, counts.n(), counts.correct(),
                  format_metric(report.sensitivity).c_str(),
                  format_metric(report.specificity).c_str(), format_metric(report.ppv).c_str(),
                  format_metric(report.npv).c_str(), report.pct_error, report.pct_accuracy);
    csv << line;
  }
  return counts;
}

}  // namespace ctseg
