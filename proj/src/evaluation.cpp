#include "ctseg/evaluation.hpp"

#include <cstdio>
#include <stdexcept>

namespace ctseg {

EvalCounts classify_slices(std::span<const SegmentedSlice> outputs,
                           std::span<const Raster> truth, long min_area) {
  if (outputs.size() != truth.size()) {
    throw std::invalid_argument("output and ground-truth sequences differ in length");
  }
  if (min_area < 0) {
    throw std::invalid_argument("min_area must be nonnegative");
  }

  EvalCounts counts;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (!outputs[i].image.same_shape(truth[i])) {
      throw std::invalid_argument("output and ground-truth shapes differ at slice " +
                                  std::to_string(i));
    }
    const bool truth_present = truth[i].count_nonzero() > 0;
    const bool output_present = outputs[i].image.count_nonzero() > min_area;
    if (truth_present) {
      output_present ? ++counts.tp : ++counts.fn;
    } else {
      output_present ? ++counts.abs_fp : ++counts.tn;
    }
  }
  return counts;
}

EvalReport compute_report(const EvalCounts& counts) {
  const long n = counts.n();
  if (n <= 0) {
    throw std::invalid_argument("cannot evaluate an empty dataset");
  }

  EvalReport report;
  if (counts.tp + counts.fn > 0) {
    report.sensitivity = static_cast<double>(counts.tp) / (counts.tp + counts.fn);
  }
  if (counts.tp + counts.abs_fp > 0) {
    report.ppv = static_cast<double>(counts.tp) / (counts.tp + counts.abs_fp);
  }
  // With no true negatives the negative-class metrics are not computable for
  // the dataset, independent of the absolute-FP count.
  if (counts.tn > 0) {
    report.specificity = static_cast<double>(counts.tn) / (counts.tn + counts.abs_fp);
    report.npv = static_cast<double>(counts.tn) / (counts.tn + counts.fn);
  }
  report.pct_error = 100.0 * (counts.abs_fp + counts.fn) / n;
  report.pct_accuracy = 100.0 * counts.correct() / n;
  return report;
}

std::string format_metric(const std::optional<double>& value, int decimals) {
  if (!value) return "--";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, *value);
  return buf;
}

}  // namespace ctseg
