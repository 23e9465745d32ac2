#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ecggan/beat.hpp"
#include "ecggan/types.hpp"
#include "ecggan/verifier.hpp"

namespace ecggan {

/// Percent root-mean-square difference of `y` against the reference `x`.
double prd(std::span<const double> x, std::span<const double> y);
double rmse(std::span<const double> x, std::span<const double> y);

enum class SdmMetric { PRD, RMSE };
std::string_view metric_name(SdmMetric m);

struct SdmSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  friend bool operator==(const SdmSummary&, const SdmSummary&) = default;
};

/// For every candidate, min/max/mean of the metric against each reference
/// beat (reference as `x`), both flattened lead-major.
std::vector<SdmSummary> sdm_summary(std::span<const BeatMatrix> candidates, std::span<const BeatMatrix> reference,
                                    SdmMetric metric);

struct HistogramStats {
  std::size_t n = 0;
  double mean = 0.0;
  double q1 = 0.0, q3 = 0.0, iqr = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess
  bool degenerate = false;  // all values equal: skewness and kurtosis undefined, reported as 0
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

/// Linear-interpolation quantile of sorted values (type 7).
double quantile_sorted(std::span<const double> sorted, double p);

/// Needs at least two values; `bins` equal-width bins over [min, max].
HistogramStats histogram_stats(std::span<const double> values, std::size_t bins = 20);

/// Block of `key value` lines; edges and counts comma-separated.
std::string render_histogram(const std::string& label, const HistogramStats& h);

double success_rate(std::size_t plausible, std::size_t verified);

/// Table layout: rows are target categories, columns the four categories
/// followed by Other split by severity.
class ConfusionMatrix {
 public:
  static constexpr std::size_t kColumns = 8;
  static constexpr std::array<std::string_view, kColumns> kColumnNames = {"Normal", "LVH",  "LBBB", "ACUTMI",
                                                                          "ON",     "BO",   "AB",   "DE"};

  void add(Category target, const Diagnosis& predicted);
  void add_count(Category target, std::size_t column, std::size_t count);

  std::size_t at(Category target, std::size_t column) const;
  std::size_t row_sum(Category target) const;
  /// Column of the predicted class (category, or Other by severity).
  static std::size_t column_of(const Diagnosis& d);

  std::string to_csv() const;

 private:
  std::array<std::array<std::size_t, kColumns>, 4> counts_{};
};

ConfusionMatrix tally_confusion(const std::vector<std::pair<Category, Diagnosis>>& results);

struct SdmPairReport {
  std::string label;  // e.g. "synthetic-training"
  SdmMetric metric = SdmMetric::RMSE;
  std::vector<SdmSummary> summaries;
  HistogramStats min, max, mean;
};

struct FeatureReport {
  std::string feature;
  HistogramStats synthetic, training, testing;
};

struct BiasReport {
  std::vector<SdmPairReport> sdm;  // 3 pairs per metric
  std::vector<FeatureReport> features;
  std::size_t compared = 0;  // candidates per pair after equal-count subsampling
};

struct BiasOptions {
  std::size_t bins = 20;
  std::uint64_t seed = 0;
  std::vector<SdmMetric> metrics{SdmMetric::PRD, SdmMetric::RMSE};
  bool features = true;
  DetectorConfig detector{};
};

/// SDM histograms for synthetic-training, synthetic-testing and
/// training-testing, plus per-feature histograms of the six interval and axis
/// measurements. Candidate sides are subsampled (seeded) to the smallest set size.
BiasReport bias_assessment(std::span<const BeatMatrix> synthetic, std::span<const BeatMatrix> training,
                           std::span<const BeatMatrix> testing, const BiasOptions& options = {});

std::string render_bias_report(const BiasReport& report);

}  // namespace ecggan
