#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ctseg/errors.hpp"
#include "ctseg/phantom.hpp"
#include "ctseg/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitPipeline = 3;

struct PhantomFlags {
  int slices = 24;
  int width = 512;
  int height = 512;
  std::uint64_t seed = 1;
  int empty_terminal = 0;
  int nasal = 0;
  bool headrest = false;
  int skull_min = 240, skull_max = 255;
  int brain_min = 20, brain_max = 200;
  int calc_slice = -1;
  int calc_row = -1, calc_col = -1;
  int calc_radius = 3;
  int calc_intensity = 250;

  ctseg::PhantomSpec to_spec() const {
    ctseg::PhantomSpec spec;
    spec.slice_count = slices;
    spec.width = width;
    spec.height = height;
    spec.rng_seed = seed;
    spec.empty_terminal_slices = empty_terminal;
    spec.nasal_slices = nasal;
    spec.headrest = headrest;
    spec.skull_min = static_cast<std::uint8_t>(skull_min);
    spec.skull_max = static_cast<std::uint8_t>(skull_max);
    spec.brain_min = static_cast<std::uint8_t>(brain_min);
    spec.brain_max = static_cast<std::uint8_t>(brain_max);
    if (calc_slice >= 0) {
      spec.calcification = ctseg::Calcification{calc_slice, calc_row, calc_col, calc_radius,
                                                static_cast<std::uint8_t>(calc_intensity)};
    }
    return spec;
  }
};

void add_phantom_flags(CLI::App* cmd, PhantomFlags& f) {
  cmd->add_option("--slices", f.slices, "Number of slices")->check(CLI::PositiveNumber);
  cmd->add_option("--width", f.width, "Slice width in pixels");
  cmd->add_option("--height", f.height, "Slice height in pixels");
  cmd->add_option("--seed", f.seed, "RNG seed; same seed, same dataset");
  cmd->add_option("--empty-terminal", f.empty_terminal,
                  "Terminal slices with no intracranial content");
  cmd->add_option("--nasal", f.nasal, "Leading slices with facial bone and muscle");
  cmd->add_flag("--headrest", f.headrest, "Add a scanner headrest arc near the bottom");
  cmd->add_option("--skull-min", f.skull_min, "Skull intensity lower bound")
      ->check(CLI::Range(240, 255));
  cmd->add_option("--skull-max", f.skull_max, "Skull intensity upper bound")
      ->check(CLI::Range(240, 255));
  cmd->add_option("--brain-min", f.brain_min, "Brain intensity lower bound")
      ->check(CLI::Range(1, 239));
  cmd->add_option("--brain-max", f.brain_max, "Brain intensity upper bound")
      ->check(CLI::Range(1, 239));
  cmd->add_option("--calc-slice", f.calc_slice, "Slice carrying a calcification disk");
  cmd->add_option("--calc-row", f.calc_row, "Calcification center row (default: head center)");
  cmd->add_option("--calc-col", f.calc_col, "Calcification center column (default: head center)");
  cmd->add_option("--calc-radius", f.calc_radius, "Calcification radius in pixels");
  cmd->add_option("--calc-intensity", f.calc_intensity, "Calcification intensity")
      ->check(CLI::Range(241, 255));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctseg - automatic brain-matter segmentation for multislice CT"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Segment every slice of a dataset directory");
  std::string run_dir;
  std::string run_out;
  std::string run_manifest;
  int run_threshold = 240;
  int run_um_radius = 0;
  long run_min_area = 0;
  bool run_debug = false;
  int run_threads = 1;
  run_cmd->add_option("dir", run_dir, "Dataset directory")->required();
  run_cmd->add_option("--out", run_out, "Output directory (default: <dir>/segmented)");
  run_cmd->add_option("--threshold", run_threshold, "Skull threshold")->check(CLI::Range(1, 255));
  run_cmd->add_option("--um-radius", run_um_radius,
                      "Outer-mask dilation radius (default: 10 at width 512, scaled)");
  run_cmd->add_option("--min-area", run_min_area, "Slice-positivity floor in pixels");
  run_cmd->add_option("--manifest", run_manifest,
                      "Manifest file (default: <dir>/manifest.txt when present)");
  run_cmd->add_flag("--debug", run_debug,
                    "Cross-check both region-growing algorithms and write diagnostics");
  run_cmd->add_option("--threads", run_threads, "Worker threads for per-slice stages")
      ->check(CLI::PositiveNumber);

  // phantom
  auto* phantom_cmd = app.add_subcommand("phantom", "Generate a synthetic dataset with ground truth");
  std::string phantom_dir;
  PhantomFlags phantom_flags;
  phantom_cmd->add_option("dir", phantom_dir, "Output directory")->required();
  add_phantom_flags(phantom_cmd, phantom_flags);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score segmentation outputs against ground truth");
  std::string eval_results;
  std::string eval_truth;
  long eval_min_area = 0;
  std::string eval_csv;
  eval_cmd->add_option("results", eval_results, "Directory of *_bm outputs")->required();
  eval_cmd->add_option("truth", eval_truth, "Ground-truth directory or manifest file")->required();
  eval_cmd->add_option("--min-area", eval_min_area, "Slice-positivity floor in pixels");
  eval_cmd->add_option("--csv", eval_csv, "CSV output path (default: <results>/eval.csv)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline on an in-memory phantom");
  PhantomFlags bench_flags;
  bench_flags.slices = 34;
  int bench_threads = 1;
  add_phantom_flags(bench_cmd, bench_flags);
  bench_cmd->add_option("--threads", bench_threads, "Worker threads for per-slice stages")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      ctseg::RunConfig config;
      config.input_dir = run_dir;
      if (!run_out.empty()) config.output_dir = run_out;
      if (!run_manifest.empty()) config.manifest = run_manifest;
      config.threshold = static_cast<std::uint8_t>(run_threshold);
      config.um_radius = run_um_radius;
      config.min_area = run_min_area;
      config.debug = run_debug;
      config.threads = run_threads;

      const ctseg::RunResult result = ctseg::run_pipeline(config);
      std::cout << "reference slice: acq_index " << result.reference_acq_index << "\n"
                << "seed point: (" << result.seed.row << ", " << result.seed.col << ")\n"
                << result.slices_written << " slices written to " << result.output_dir.string()
                << "\n";
    } else if (phantom_cmd->parsed()) {
      const ctseg::PhantomDataset pd = ctseg::generate(phantom_flags.to_spec());
      const auto manifest = ctseg::write_phantom(pd, phantom_dir);
      std::cout << pd.dataset.slices.size() << " slices written, manifest at "
                << manifest.string() << "\n";
    } else if (eval_cmd->parsed()) {
      const std::filesystem::path csv = eval_csv.empty()
                                            ? std::filesystem::path(eval_results) / "eval.csv"
                                            : std::filesystem::path(eval_csv);
      ctseg::evaluate_results(eval_results, eval_truth, eval_min_area, std::cout, csv);
      std::cout << "csv written to " << csv.string() << "\n";
    } else if (bench_cmd->parsed()) {
      ctseg::RunConfig config;
      config.threads = bench_threads;
      const ctseg::BenchReport report = ctseg::bench(config, bench_flags.to_spec());
      std::cout << "slices: " << report.slices << " (" << report.width << "x" << report.height
                << "), reference acq_index " << report.reference_acq_index << "\n";
      ctseg::print_bench_csv(report, std::cout);
    }
  } catch (const ctseg::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ctseg::PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return 0;
}
