#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecggan/beat.hpp"
#include "ecggan/config.hpp"

namespace ecggan {

/// How a beat becomes points for the kernel: one 3200-vector per beat, or the
/// 400 per-sample 8-lead vectors of the beat as an empirical distribution.
enum class FeatureMap { Flattened, LeadVectors };

std::string_view feature_map_name(FeatureMap m);
std::optional<FeatureMap> parse_feature_map(std::string_view s);

struct PlausibilityConfig {
  double mmd_threshold = 0.004;
  double min_amplitude_range_mv = 1.2;
  std::size_t edge_margin_samples = 50;
  std::size_t min_epochs = 10;
  /// Kernel bandwidth; empty means the median heuristic over the testing set.
  std::optional<double> fixed_sigma;
  FeatureMap feature_map = FeatureMap::Flattened;
  std::size_t bandwidth_points = 1000;  // pooled points subsampled for the median
  std::uint64_t bandwidth_seed = 0;

  void validate() const;
  /// Keys: plausibility.{mmd_threshold, min_amplitude_range_mv, edge_margin_samples,
  /// min_epochs, bandwidth (median | sigma), feature_map, bandwidth_points, bandwidth_seed}.
  static PlausibilityConfig from(const ConfigMap& cfg);
  ConfigMap to_config() const;
};

using PointSet = std::vector<std::vector<double>>;

PointSet feature_points(const BeatMatrix& beat, FeatureMap map);

/// Gaussian RBF kernel exp(-|a - b|^2 / (2 sigma^2)).
double rbf_kernel(std::span<const double> a, std::span<const double> b, double sigma);

/// Biased (V-statistic) squared MMD. Throws EmptySet when either set is empty.
double mmd(const PointSet& x, const PointSet& y, double sigma);

/// Median pairwise Euclidean distance over the pooled points, using at most
/// `max_points` of them drawn with `seed`. Falls back to 1 when every
/// distance is zero.
double median_heuristic_sigma(const std::vector<PointSet>& sets, std::size_t max_points, std::uint64_t seed);

/// Testing set prepared once per campaign: bandwidth plus the within-set
/// kernel term of every testing beat.
class MmdReference {
 public:
  MmdReference(std::span<const BeatMatrix> testing, const PlausibilityConfig& config);

  double sigma() const { return sigma_; }
  std::size_t size() const { return points_.size(); }

  /// Mean over testing beats of mmd({candidate}, {testing beat}).
  double mean_mmd(const BeatMatrix& candidate) const;

 private:
  FeatureMap map_;
  double sigma_ = 1.0;
  std::vector<PointSet> points_;
  std::vector<double> self_terms_;
};

double mean_mmd_vs_testing(const BeatMatrix& candidate, std::span<const BeatMatrix> testing,
                           const PlausibilityConfig& config = {});

/// Global maximum minus global minimum over all leads.
double amplitude_range(const BeatMatrix& beat);

struct EdgeCheck {
  bool erratic = false;
  std::size_t argmax_sample = 0;  // earliest sample holding the largest |amplitude|
};

/// Erratic when the largest |amplitude| sits in the first or last `margin` samples.
EdgeCheck erratic_edge(const BeatMatrix& beat, std::size_t margin = 50);

struct PlausibilityVerdict {
  std::size_t epoch = 0;
  double mmd_mean = 0.0;
  bool mmd_pass = false;
  double amplitude_range_mv = 0.0;
  bool amplitude_pass = false;
  std::size_t edge_argmax = 0;
  bool edge_pass = false;
  bool epoch_pass = false;
  bool passed = false;

  friend bool operator==(const PlausibilityVerdict&, const PlausibilityVerdict&) = default;
};

/// `epoch` counts completed epochs of the current training round.
PlausibilityVerdict check(const BeatMatrix& candidate, const MmdReference& reference, std::size_t epoch,
                          const PlausibilityConfig& config);
PlausibilityVerdict check(const BeatMatrix& candidate, std::span<const BeatMatrix> testing, std::size_t epoch,
                          const PlausibilityConfig& config = {});

/// One JSON object per line for the audit log.
std::string audit_line(const PlausibilityVerdict& v);

}  // namespace ecggan
