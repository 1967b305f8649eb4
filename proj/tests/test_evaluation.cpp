#include <doctest.h>

#include <stdexcept>

#include "ctseg/evaluation.hpp"
#include "oracles.hpp"

using namespace ctseg;

TEST_SUITE_BEGIN("evaluation");

namespace {

SegmentedSlice seg_with_area(int w, int h, int area, int acq) {
  SegmentedSlice s{Raster(w, h, 0), acq};
  for (int i = 0; i < area; ++i) s.image.pixels()[i] = 99;
  return s;
}

Raster truth_with_area(int w, int h, int area) {
  Raster t(w, h, 0);
  for (int i = 0; i < area; ++i) t.pixels()[i] = 255;
  return t;
}

}  // namespace

TEST_CASE("classify_slices: the four quadrants") {
  std::vector<SegmentedSlice> outputs;
  std::vector<Raster> truth;

  // 22 correct positives, 2 correct negatives
  for (int i = 0; i < 24; ++i) {
    const bool has_bm = i < 22;
    outputs.push_back(seg_with_area(8, 8, has_bm ? 10 : 0, i));
    truth.push_back(truth_with_area(8, 8, has_bm ? 12 : 0));
  }
  const EvalCounts counts = classify_slices(outputs, truth);
  CHECK(counts.tp == 22);
  CHECK(counts.fn == 0);
  CHECK(counts.abs_fp == 0);
  CHECK(counts.tn == 2);
  CHECK(counts.n() == 24);
}

TEST_CASE("classify_slices: all-empty truth with empty outputs") {
  std::vector<SegmentedSlice> outputs;
  std::vector<Raster> truth;
  for (int i = 0; i < 5; ++i) {
    outputs.push_back(seg_with_area(4, 4, 0, i));
    truth.push_back(truth_with_area(4, 4, 0));
  }
  const EvalCounts counts = classify_slices(outputs, truth);
  CHECK(counts.tn == 5);
  CHECK(counts.n() == 5);
}

TEST_CASE("classify_slices: spurious output on an empty-truth slice") {
  std::vector<SegmentedSlice> outputs{seg_with_area(8, 8, 3, 0)};
  std::vector<Raster> truth{truth_with_area(8, 8, 0)};
  CHECK(classify_slices(outputs, truth, 0).abs_fp == 1);
  // a min_area floor of 3 discounts the 3-pixel blob
  CHECK(classify_slices(outputs, truth, 3).tn == 1);

  // the same floor turns a tiny true detection into a miss
  std::vector<Raster> truth_bm{truth_with_area(8, 8, 5)};
  CHECK(classify_slices(outputs, truth_bm, 3).fn == 1);
  CHECK(classify_slices(outputs, truth_bm, 0).tp == 1);
}

TEST_CASE("classify_slices rejects misaligned input") {
  std::vector<SegmentedSlice> outputs{seg_with_area(8, 8, 1, 0)};
  std::vector<Raster> truth{truth_with_area(8, 8, 1), truth_with_area(8, 8, 0)};
  CHECK_THROWS_AS(static_cast<void>(classify_slices(outputs, truth)), std::invalid_argument);

  std::vector<Raster> wrong_shape{truth_with_area(4, 8, 1)};
  CHECK_THROWS_AS(static_cast<void>(classify_slices(outputs, wrong_shape)),
                  std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(classify_slices(outputs, truth, -1)), std::invalid_argument);
}

TEST_CASE("reference row: 28 TP, 1 AbsFP, 5 TN out of 34") {
  const EvalReport r = compute_report(EvalCounts{28, 0, 1, 5});
  CHECK(*r.sensitivity == doctest::Approx(1.0));
  CHECK(*r.specificity == doctest::Approx(0.833).epsilon(0.001));
  CHECK(*r.ppv == doctest::Approx(0.966).epsilon(0.001));
  CHECK(*r.npv == doctest::Approx(1.0));
  CHECK(r.pct_error == doctest::Approx(2.941).epsilon(0.001));
  CHECK(r.pct_accuracy == doctest::Approx(97.059).epsilon(0.001));
}

TEST_CASE("reference row: a mostly misclassified dataset") {
  const EvalReport r = compute_report(EvalCounts{2, 0, 3, 7});
  CHECK(*r.specificity == doctest::Approx(0.7));
  CHECK(r.pct_accuracy == doctest::Approx(75.0));
  CHECK(*r.ppv == doctest::Approx(0.4));
  CHECK(r.pct_error == doctest::Approx(25.0));
}

TEST_CASE("reference row: no negative slices leaves specificity and NPV undefined") {
  const EvalReport r = compute_report(EvalCounts{26, 0, 0, 0});
  CHECK_FALSE(r.specificity.has_value());
  CHECK_FALSE(r.npv.has_value());
  CHECK(*r.sensitivity == doctest::Approx(1.0));
  CHECK(r.pct_accuracy == doctest::Approx(100.0));
  CHECK(format_metric(r.specificity) == "--");
  CHECK(format_metric(r.sensitivity) == "1.000");
}

TEST_CASE("zero true negatives suppress the negative-class metrics even with AbsFP") {
  // matches the reference handling of a dataset whose two no-BM slices both
  // produced output: specificity is listed as not computable, not as 0
  const EvalReport r = compute_report(EvalCounts{24, 0, 2, 0});
  CHECK_FALSE(r.specificity.has_value());
  CHECK_FALSE(r.npv.has_value());
  CHECK(*r.ppv == doctest::Approx(0.923).epsilon(0.001));
  CHECK(r.pct_error == doctest::Approx(7.692).epsilon(0.001));
}

TEST_CASE("error and accuracy always add up to 100") {
  for (int trial = 0; trial < 50; ++trial) {
    EvalCounts counts{oracle::rand_between(0, 30), oracle::rand_between(0, 5),
                      oracle::rand_between(0, 5), oracle::rand_between(0, 10)};
    if (counts.n() == 0) continue;
    const EvalReport r = compute_report(counts);
    CHECK(r.pct_error + r.pct_accuracy == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(counts.n() == counts.abs_fp + counts.fn + counts.correct());
    if (counts.fn == 0 && counts.tp > 0) CHECK(*r.sensitivity == 1.0);
  }
}

TEST_CASE("empty tallies are rejected") {
  CHECK_THROWS_AS(static_cast<void>(compute_report(EvalCounts{})), std::invalid_argument);
}

TEST_SUITE_END();
