#include "ecggan/evalstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ecggan/error.hpp"
#include "ecggan/random.hpp"

namespace ecggan {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.empty()) throw Error(ErrorCode::LengthMismatch, "signals are empty");
}

double squared_error(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return s;
}

std::string join(const auto& values, auto&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + fmt(values[i]);
  return out;
}

// Seeded subsample of `n` items, kept in original order.
std::vector<BeatMatrix> subsample(std::span<const BeatMatrix> items, std::size_t n, std::uint64_t seed) {
  if (n >= items.size()) return {items.begin(), items.end()};
  std::vector<std::size_t> keep(items.size());
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(keep, rng);
  keep.resize(n);
  std::sort(keep.begin(), keep.end());
  std::vector<BeatMatrix> out;
  for (auto i : keep) out.push_back(items[i]);
  return out;
}

HistogramStats stats_or_empty(const std::vector<double>& v, std::size_t bins) {
  if (v.size() >= 2) return histogram_stats(v, bins);
  HistogramStats h;
  h.n = v.size();
  h.degenerate = true;
  if (!v.empty()) h.mean = h.q1 = h.q3 = v[0];
  return h;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double prd(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y);
  double energy = 0.0;
  for (double v : x) energy += v * v;
  if (energy == 0.0) throw Error(ErrorCode::ZeroReference, "reference signal has zero energy");
  return std::sqrt(squared_error(x, y) / energy) * 100.0;
}

double rmse(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y);
  return std::sqrt(squared_error(x, y) / static_cast<double>(x.size()));
}

std::string_view metric_name(SdmMetric m) { return m == SdmMetric::PRD ? "PRD" : "RMSE"; }

std::vector<SdmSummary> sdm_summary(std::span<const BeatMatrix> candidates, std::span<const BeatMatrix> reference,
                                    SdmMetric metric) {
  if (candidates.empty() || reference.empty()) throw Error(ErrorCode::EmptySet, "SDM needs non-empty datasets");
  std::vector<std::vector<double>> ref;
  ref.reserve(reference.size());
  for (const auto& r : reference) ref.push_back(r.lead_major());
  std::vector<SdmSummary> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const std::vector<double> y = c.lead_major();
    SdmSummary s{INFINITY, -INFINITY, 0.0};
    double sum = 0.0;
    for (const auto& x : ref) {
      const double d = metric == SdmMetric::PRD ? prd(x, y) : rmse(x, y);
      s.min = std::min(s.min, d);
      s.max = std::max(s.max, d);
      sum += d;
    }
    s.mean = sum / static_cast<double>(ref.size());
    out.push_back(s);
  }
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptySet, "quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

HistogramStats histogram_stats(std::span<const double> values, std::size_t bins) {
  if (values.size() < 2) throw Error(ErrorCode::InvalidArgument, "histogram needs at least two values");
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  HistogramStats h;
  h.n = values.size();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(h.n);

  double sum = 0.0;
  for (double v : values) sum += v;
  h.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - h.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  h.degenerate = sorted.front() == sorted.back();
  if (!h.degenerate) {
    h.skewness = m3 / std::pow(m2, 1.5);
    h.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  h.q1 = quantile_sorted(sorted, 0.25);
  h.q3 = quantile_sorted(sorted, 0.75);
  h.iqr = h.q3 - h.q1;

  double lo = sorted.front(), hi = sorted.back();
  if (h.degenerate) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(b, bins - 1)]++;
  }
  return h;
}

std::string render_histogram(const std::string& label, const HistogramStats& h) {
  std::string out = "histogram " + label + "\n";
  out += "n " + std::to_string(h.n) + "\n";
  out += "mean " + fmt(h.mean) + "\n";
  out += "iqr " + fmt(h.iqr) + "\n";
  out += "skewness " + fmt(h.skewness) + "\n";
  out += "kurtosis " + fmt(h.kurtosis) + "\n";
  out += std::string("degenerate ") + (h.degenerate ? "1" : "0") + "\n";
  out += "edges " + join(h.edges, fmt) + "\n";
  out += "counts " + join(h.counts, [](std::size_t c) { return std::to_string(c); }) + "\n";
  return out;
}

double success_rate(std::size_t plausible, std::size_t verified) {
  if (plausible == 0) throw Error(ErrorCode::DivisionByZero, "no plausible beats");
  if (verified > plausible) throw Error(ErrorCode::InvalidArgument, "verified exceeds plausible");
  return 100.0 * static_cast<double>(verified) / static_cast<double>(plausible);
}

std::size_t ConfusionMatrix::column_of(const Diagnosis& d) {
  switch (d.category) {
    case Category::Normal: return 0;
    case Category::LVH: return 1;
    case Category::LBBB: return 2;
    case Category::ACUTMI: return 3;
    case Category::Other: break;
  }
  switch (d.severity) {
    case Severity::ON: return 4;
    case Severity::BO: return 5;
    case Severity::AB: return 6;
    case Severity::DE: return 7;
    case Severity::NO: break;
  }
  throw Error(ErrorCode::InvalidArgument, "Other diagnosis with severity NO");
}

void ConfusionMatrix::add(Category target, const Diagnosis& predicted) { add_count(target, column_of(predicted), 1); }

void ConfusionMatrix::add_count(Category target, std::size_t column, std::size_t count) {
  if (target == Category::Other) throw Error(ErrorCode::InvalidArgument, "Other is not a target category");
  if (column >= kColumns) throw Error(ErrorCode::InvalidArgument, "confusion column out of range");
  counts_[static_cast<std::size_t>(target)][column] += count;
}

std::size_t ConfusionMatrix::at(Category target, std::size_t column) const {
  return counts_.at(static_cast<std::size_t>(target)).at(column);
}

std::size_t ConfusionMatrix::row_sum(Category target) const {
  std::size_t s = 0;
  for (auto c : counts_.at(static_cast<std::size_t>(target))) s += c;
  return s;
}

std::string ConfusionMatrix::to_csv() const {
  std::string out = "actual";
  for (auto name : kColumnNames) out += "," + std::string(name);
  out += "\n";
  for (Category c : kTargetCategories) {
    out += std::string(category_name(c));
    for (std::size_t k = 0; k < kColumns; ++k) out += "," + std::to_string(at(c, k));
    out += "\n";
  }
  return out;
}

ConfusionMatrix tally_confusion(const std::vector<std::pair<Category, Diagnosis>>& results) {
  ConfusionMatrix m;
  for (const auto& [target, d] : results) m.add(target, d);
  return m;
}

BiasReport bias_assessment(std::span<const BeatMatrix> synthetic, std::span<const BeatMatrix> training,
                           std::span<const BeatMatrix> testing, const BiasOptions& options) {
  if (synthetic.empty() || training.empty() || testing.empty())
    throw Error(ErrorCode::EmptySet, "bias assessment needs three non-empty datasets");
  BiasReport report;
  report.compared = std::min({synthetic.size(), training.size(), testing.size()});

  struct Pair {
    const char* label;
    std::span<const BeatMatrix> candidates, reference;
  };
  const std::array<Pair, 3> pairs = {Pair{"synthetic-training", synthetic, training},
                                     Pair{"synthetic-testing", synthetic, testing},
                                     Pair{"training-testing", training, testing}};
  for (SdmMetric metric : options.metrics) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto cand = subsample(pairs[p].candidates, report.compared, derive_seed(options.seed, 0xb1a5, p));
      SdmPairReport r;
      r.label = pairs[p].label;
      r.metric = metric;
      r.summaries = sdm_summary(cand, pairs[p].reference, metric);
      std::vector<double> mins, maxs, means;
      for (const auto& s : r.summaries) {
        mins.push_back(s.min);
        maxs.push_back(s.max);
        means.push_back(s.mean);
      }
      r.min = stats_or_empty(mins, options.bins);
      r.max = stats_or_empty(maxs, options.bins);
      r.mean = stats_or_empty(means, options.bins);
      report.sdm.push_back(std::move(r));
    }
  }

  if (options.features) {
    using Getter = double (*)(const BeatFeatures&);
    const std::array<std::pair<const char*, Getter>, 6> fields = {{
        {"pr_ms", [](const BeatFeatures& f) { return f.pr_ms; }},
        {"qrs_dur_ms", [](const BeatFeatures& f) { return f.qrs_dur_ms; }},
        {"qt_ms", [](const BeatFeatures& f) { return f.qt_ms; }},
        {"p_axis_deg", [](const BeatFeatures& f) { return f.p_axis_deg; }},
        {"qrs_axis_deg", [](const BeatFeatures& f) { return f.qrs_axis_deg; }},
        {"t_axis_deg", [](const BeatFeatures& f) { return f.t_axis_deg; }},
    }};
    auto measure = [&](std::span<const BeatMatrix> set) {
      std::vector<BeatFeatures> out;
      for (const auto& b : set) {
        BeatFeatures f = extract_features(derive_limb_leads(b), kRrIntervalMs, options.detector);
        if (!f.undetectable) out.push_back(f);
      }
      return out;
    };
    const auto fs = measure(synthetic), ftr = measure(training), fte = measure(testing);
    for (const auto& [name, get] : fields) {
      auto column = [&](const std::vector<BeatFeatures>& v) {
        std::vector<double> c;
        for (const auto& f : v) c.push_back(get(f));
        return stats_or_empty(c, options.bins);
      };
      report.features.push_back({name, column(fs), column(ftr), column(fte)});
    }
  }
  return report;
}

std::string render_bias_report(const BiasReport& report) {
  std::string out = "compared " + std::to_string(report.compared) + "\n\n";
  for (const auto& r : report.sdm) {
    const std::string base = std::string(metric_name(r.metric)) + " " + r.label;
    out += render_histogram(base + " min", r.min) + "\n";
    out += render_histogram(base + " max", r.max) + "\n";
    out += render_histogram(base + " mean", r.mean) + "\n";
  }
  for (const auto& f : report.features) {
    out += render_histogram("feature " + f.feature + " synthetic", f.synthetic) + "\n";
    out += render_histogram("feature " + f.feature + " training", f.training) + "\n";
    out += render_histogram("feature " + f.feature + " testing", f.testing) + "\n";
  }
  return out;
}

}  // namespace ecggan
