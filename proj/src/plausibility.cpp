#include "ecggan/plausibility.hpp"

#include <algorithm>
#include <cmath>

#include "ecggan/error.hpp"
#include "ecggan/io.hpp"
#include "ecggan/random.hpp"
#include "json.hpp"

namespace ecggan {

namespace {

// Neumaier compensated summation.
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    d += e * e;
  }
  return d;
}

double mean_kernel(const PointSet& x, const PointSet& y, double sigma) {
  Accumulator acc;
  for (const auto& a : x)
    for (const auto& b : y) acc.add(rbf_kernel(a, b, sigma));
  return acc.value() / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

void require_nonempty(const PointSet& s) {
  if (s.empty()) throw Error(ErrorCode::EmptySet, "MMD needs non-empty sample sets");
}

}  // namespace

std::string_view feature_map_name(FeatureMap m) { return m == FeatureMap::Flattened ? "flattened" : "lead_vectors"; }

std::optional<FeatureMap> parse_feature_map(std::string_view s) {
  if (s == "flattened") return FeatureMap::Flattened;
  if (s == "lead_vectors") return FeatureMap::LeadVectors;
  return std::nullopt;
}

void PlausibilityConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::Config, "plausibility: " + what); };
  if (!(mmd_threshold > 0.0)) fail("mmd_threshold must be positive");
  if (!(min_amplitude_range_mv > 0.0)) fail("min_amplitude_range_mv must be positive");
  if (edge_margin_samples == 0 || edge_margin_samples >= kBeatSamples / 2) fail("edge_margin_samples must be in [1, 200)");
  if (min_epochs == 0) fail("min_epochs must be positive");
  if (fixed_sigma && !(*fixed_sigma > 0.0)) fail("bandwidth must be positive");
  if (bandwidth_points < 2) fail("bandwidth_points must be at least 2");
}

PlausibilityConfig PlausibilityConfig::from(const ConfigMap& cfg) {
  PlausibilityConfig p;
  p.mmd_threshold = cfg.get_double("plausibility.mmd_threshold", p.mmd_threshold);
  p.min_amplitude_range_mv = cfg.get_double("plausibility.min_amplitude_range_mv", p.min_amplitude_range_mv);
  p.edge_margin_samples =
      static_cast<std::size_t>(cfg.get_int("plausibility.edge_margin_samples", static_cast<long long>(p.edge_margin_samples)));
  p.min_epochs = static_cast<std::size_t>(cfg.get_int("plausibility.min_epochs", static_cast<long long>(p.min_epochs)));
  const std::string bw = cfg.get_string("plausibility.bandwidth", "median");
  if (bw != "median") p.fixed_sigma = cfg.get_double("plausibility.bandwidth", 0.0);
  const std::string map = cfg.get_string("plausibility.feature_map", "flattened");
  const auto parsed = parse_feature_map(map);
  if (!parsed) throw Error(ErrorCode::Config, "plausibility.feature_map: unknown value " + map);
  p.feature_map = *parsed;
  p.bandwidth_points =
      static_cast<std::size_t>(cfg.get_int("plausibility.bandwidth_points", static_cast<long long>(p.bandwidth_points)));
  p.bandwidth_seed = static_cast<std::uint64_t>(cfg.get_int("plausibility.bandwidth_seed", 0));
  p.validate();
  return p;
}

ConfigMap PlausibilityConfig::to_config() const {
  ConfigMap m;
  m.set("plausibility.mmd_threshold", format_double(mmd_threshold));
  m.set("plausibility.min_amplitude_range_mv", format_double(min_amplitude_range_mv));
  m.set("plausibility.edge_margin_samples", std::to_string(edge_margin_samples));
  m.set("plausibility.min_epochs", std::to_string(min_epochs));
  m.set("plausibility.bandwidth", fixed_sigma ? format_double(*fixed_sigma) : "median");
  m.set("plausibility.feature_map", std::string(feature_map_name(feature_map)));
  m.set("plausibility.bandwidth_points", std::to_string(bandwidth_points));
  m.set("plausibility.bandwidth_seed", std::to_string(bandwidth_seed));
  return m;
}

PointSet feature_points(const BeatMatrix& beat, FeatureMap map) {
  const auto flat = beat.flat();
  if (map == FeatureMap::Flattened) return {std::vector<double>(flat.begin(), flat.end())};
  PointSet points(kBeatSamples);
  for (std::size_t s = 0; s < kBeatSamples; ++s) points[s].assign(flat.begin() + static_cast<long>(s * 8), flat.begin() + static_cast<long>(s * 8 + 8));
  return points;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double sigma) {
  return std::exp(-squared_distance(a, b) / (2.0 * sigma * sigma));
}

double mmd(const PointSet& x, const PointSet& y, double sigma) {
  require_nonempty(x);
  require_nonempty(y);
  const double v = mean_kernel(x, x, sigma) + mean_kernel(y, y, sigma) - 2.0 * mean_kernel(x, y, sigma);
  return std::max(0.0, v);
}

double median_heuristic_sigma(const std::vector<PointSet>& sets, std::size_t max_points, std::uint64_t seed) {
  std::vector<const std::vector<double>*> pool;
  for (const auto& s : sets)
    for (const auto& p : s) pool.push_back(&p);
  if (pool.size() > max_points) {
    // Canonical order first so the subsample does not depend on set order.
    std::sort(pool.begin(), pool.end(), [](const auto* a, const auto* b) { return *a < *b; });
    Rng rng(seed);
    for (std::size_t i = 0; i < max_points; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    pool.resize(max_points);
  }
  std::vector<double> dist;
  dist.reserve(pool.size() * (pool.size() - (pool.empty() ? 0 : 1)) / 2);
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) dist.push_back(std::sqrt(squared_distance(*pool[i], *pool[j])));
  if (dist.empty()) return 1.0;
  auto mid = dist.begin() + static_cast<long>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  return *mid > 0.0 ? *mid : 1.0;
}

MmdReference::MmdReference(std::span<const BeatMatrix> testing, const PlausibilityConfig& config)
    : map_(config.feature_map) {
  if (testing.empty()) throw Error(ErrorCode::EmptySet, "testing set is empty");
  config.validate();
  points_.reserve(testing.size());
  for (const auto& b : testing) points_.push_back(feature_points(b, map_));
  sigma_ = config.fixed_sigma ? *config.fixed_sigma
                              : median_heuristic_sigma(points_, config.bandwidth_points, config.bandwidth_seed);
  self_terms_.reserve(points_.size());
  for (const auto& p : points_) self_terms_.push_back(mean_kernel(p, p, sigma_));
}

double MmdReference::mean_mmd(const BeatMatrix& candidate) const {
  const PointSet c = feature_points(candidate, map_);
  const double cc = mean_kernel(c, c, sigma_);
  std::vector<double> terms(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    terms[i] = std::max(0.0, cc + self_terms_[i] - 2.0 * mean_kernel(c, points_[i], sigma_));
  // Summing in sorted order keeps the mean independent of testing-set order.
  std::sort(terms.begin(), terms.end());
  Accumulator acc;
  for (double t : terms) acc.add(t);
  return acc.value() / static_cast<double>(terms.size());
}

double mean_mmd_vs_testing(const BeatMatrix& candidate, std::span<const BeatMatrix> testing,
                           const PlausibilityConfig& config) {
  return MmdReference(testing, config).mean_mmd(candidate);
}

double amplitude_range(const BeatMatrix& beat) {
  const auto [lo, hi] = std::minmax_element(beat.flat().begin(), beat.flat().end());
  return *hi - *lo;
}

EdgeCheck erratic_edge(const BeatMatrix& beat, std::size_t margin) {
  if (margin >= kBeatSamples / 2) throw Error(ErrorCode::InvalidArgument, "edge margin must be below 200 samples");
  EdgeCheck e;
  double best = -1.0;
  for (std::size_t s = 0; s < kBeatSamples; ++s)
    for (std::size_t l = 0; l < 8; ++l)
      if (std::abs(beat(s, l)) > best) {
        best = std::abs(beat(s, l));
        e.argmax_sample = s;
      }
  e.erratic = e.argmax_sample < margin || e.argmax_sample >= kBeatSamples - margin;
  return e;
}

PlausibilityVerdict check(const BeatMatrix& candidate, const MmdReference& reference, std::size_t epoch,
                          const PlausibilityConfig& config) {
  PlausibilityVerdict v;
  v.epoch = epoch;
  v.mmd_mean = reference.mean_mmd(candidate);
  v.mmd_pass = v.mmd_mean <= config.mmd_threshold;
  v.amplitude_range_mv = amplitude_range(candidate);
  v.amplitude_pass = v.amplitude_range_mv >= config.min_amplitude_range_mv;
  const EdgeCheck edge = erratic_edge(candidate, config.edge_margin_samples);
  v.edge_argmax = edge.argmax_sample;
  v.edge_pass = !edge.erratic;
  v.epoch_pass = epoch >= config.min_epochs;
  v.passed = v.mmd_pass && v.amplitude_pass && v.edge_pass && v.epoch_pass;
  return v;
}

PlausibilityVerdict check(const BeatMatrix& candidate, std::span<const BeatMatrix> testing, std::size_t epoch,
                          const PlausibilityConfig& config) {
  return check(candidate, MmdReference(testing, config), epoch, config);
}

std::string audit_line(const PlausibilityVerdict& v) {
  nlohmann::ordered_json j;
  j["epoch"] = v.epoch;
  j["mmd_mean"] = v.mmd_mean;
  j["mmd_pass"] = v.mmd_pass;
  j["amp_range_mv"] = v.amplitude_range_mv;
  j["amp_pass"] = v.amplitude_pass;
  j["edge_argmax"] = v.edge_argmax;
  j["edge_pass"] = v.edge_pass;
  j["epoch_pass"] = v.epoch_pass;
  j["passed"] = v.passed;
  return j.dump();
}

}  // namespace ecggan
