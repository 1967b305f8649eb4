#ifndef CTSEG_EVALUATION_HPP
#define CTSEG_EVALUATION_HPP

#include <optional>
#include <span>
#include <string>

#include "ctseg/masking.hpp"
#include "ctseg/raster.hpp"

namespace ctseg {

// Slice-level tallies. n = tp + fn + abs_fp + tn, and tp + tn is the count of
// correctly segmented slices.
struct EvalCounts {
  long tp = 0;
  long fn = 0;
  long abs_fp = 0;
  long tn = 0;

  long n() const { return tp + fn + abs_fp + tn; }
  long correct() const { return tp + tn; }
};

// Derived metrics; a metric left empty is not computable for the dataset and
// is rendered as "--". Specificity and NPV are undefined whenever tn = 0.
struct EvalReport {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> ppv;
  std::optional<double> npv;
  double pct_error = 0.0;
  double pct_accuracy = 0.0;
};

// Classifies each slice: with ground truth present, an output support larger
// than min_area is a TP and anything else an FN; with empty truth, output
// above min_area is an absolute FP and anything else a TN.
EvalCounts classify_slices(std::span<const SegmentedSlice> outputs,
                           std::span<const Raster> truth, long min_area = 0);

EvalReport compute_report(const EvalCounts& counts);

// Fixed-point rendering with "--" for undefined metrics.
std::string format_metric(const std::optional<double>& value, int decimals = 3);

}  // namespace ctseg

#endif
