#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ecggan/beatgen.hpp"
#include "ecggan/error.hpp"
#include "ecggan/evalstats.hpp"
#include "ecggan/random.hpp"

using namespace ecggan;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ecggan::Error thrown";
  return ErrorCode::Format;
}

std::vector<double> random_signal(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

std::vector<BeatMatrix> random_beats(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BeatMatrix> out;
  for (std::size_t i = 0; i < n; ++i) {
    BeatMatrix b;
    for (double& v : b.flat()) v = rng.normal(0.0, 0.5);
    out.push_back(b);
  }
  return out;
}

std::vector<BeatMatrix> corpus_beats(Category c, std::size_t n, std::uint64_t seed) {
  std::vector<BeatMatrix> out;
  for (auto& lb : make_corpus(c, n, seed, {.noise_std_mv = 0.01})) out.push_back(lb.beat);
  return out;
}

Diagnosis diag(Category c, Severity s = Severity::NO) {
  Diagnosis d;
  d.category = c;
  d.severity = s;
  return d;
}

}  // namespace

TEST(Metrics, WorkedExamples) {
  const std::vector<double> zero{0.0, 0.0}, a{3.0, 4.0};
  EXPECT_DOUBLE_EQ(prd(a, zero), 100.0);
  EXPECT_DOUBLE_EQ(prd(std::vector<double>{2.0, 0.0}, std::vector<double>{1.0, 0.0}), 50.0);
  EXPECT_DOUBLE_EQ(rmse(std::vector<double>{3.0, 0.0, 0.0, 0.0}, std::vector<double>(4, 0.0)), 1.5);
  EXPECT_DOUBLE_EQ(rmse(a, a), 0.0);
}

TEST(Metrics, Errors) {
  const std::vector<double> zero(3, 0.0), one(3, 1.0), two(2, 1.0);
  EXPECT_EQ(code_of([&] { prd(zero, one); }), ErrorCode::ZeroReference);
  EXPECT_EQ(code_of([&] { prd(one, two); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([&] { rmse(one, two); }), ErrorCode::LengthMismatch);
}

TEST(Metrics, ScalingProperties) {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    auto x = random_signal(rng, 64), y = random_signal(rng, 64);
    const double c = rng.uniform(0.1, 10.0);
    auto cx = x, cy = y;
    for (double& v : cx) v *= c;
    for (double& v : cy) v *= c;
    const double p = prd(x, y), r = rmse(x, y);
    EXPECT_LT(std::abs(prd(cx, cy) - p) / p, 1e-12);
    EXPECT_LT(std::abs(rmse(cx, cy) - c * r) / (c * r), 1e-12);
  }
}

TEST(Sdm, MatchesNestedLoopOracle) {
  const auto cand = random_beats(10, 1), ref = random_beats(20, 2);
  for (SdmMetric m : {SdmMetric::PRD, SdmMetric::RMSE}) {
    const auto got = sdm_summary(cand, ref, m);
    ASSERT_EQ(got.size(), cand.size());
    for (std::size_t i = 0; i < cand.size(); ++i) {
      double lo = INFINITY, hi = -INFINITY, sum = 0.0;
      for (const auto& r : ref) {
        double se = 0.0, energy = 0.0;
        for (std::size_t l = 0; l < 8; ++l)
          for (std::size_t s = 0; s < kBeatSamples; ++s) {
            const double e = r(s, l) - cand[i](s, l);
            se += e * e;
            energy += r(s, l) * r(s, l);
          }
        const double d = m == SdmMetric::PRD ? std::sqrt(se / energy) * 100.0 : std::sqrt(se / 3200.0);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
        sum += d;
      }
      EXPECT_DOUBLE_EQ(got[i].min, lo);
      EXPECT_DOUBLE_EQ(got[i].max, hi);
      EXPECT_DOUBLE_EQ(got[i].mean, sum / 20.0);
    }
  }
}

TEST(Sdm, EmptyInputThrows) {
  const auto ref = random_beats(2, 3);
  EXPECT_EQ(code_of([&] { sdm_summary({}, ref, SdmMetric::RMSE); }), ErrorCode::EmptySet);
}

TEST(Histogram, QuartilesAndIqr) {
  const std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  const auto h = histogram_stats(v, 4);
  EXPECT_DOUBLE_EQ(h.q1, 1.75);
  EXPECT_DOUBLE_EQ(h.q3, 3.25);
  EXPECT_DOUBLE_EQ(h.iqr, 1.5);
  EXPECT_DOUBLE_EQ(h.mean, 2.5);
  EXPECT_EQ(h.edges.size(), 5u);
  std::size_t total = 0;
  for (auto c : h.counts) total += c;
  EXPECT_EQ(total, 4u);
  EXPECT_EQ(h.counts.back(), 1u);  // max lands in the last bin
}

TEST(Histogram, MirroredSampleHasZeroSkew) {
  Rng rng(5);
  std::vector<double> v;
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(0.0, 3.0) * rng.uniform();
    v.push_back(x);
    v.push_back(-x);
  }
  EXPECT_NEAR(histogram_stats(v).skewness, 0.0, 1e-12);
}

TEST(Histogram, NormalExcessKurtosisNearZero) {
  Rng rng(9);
  std::vector<double> v(100000);
  for (double& x : v) x = rng.normal();
  const auto h = histogram_stats(v);
  EXPECT_NEAR(h.kurtosis, 0.0, 0.1);
  EXPECT_NEAR(h.skewness, 0.0, 0.05);
}

TEST(Histogram, DegenerateAndTooSmall) {
  const std::vector<double> same(5, 2.0);
  const auto h = histogram_stats(same);
  EXPECT_TRUE(h.degenerate);
  EXPECT_EQ(h.skewness, 0.0);
  EXPECT_EQ(h.kurtosis, 0.0);
  EXPECT_EQ(h.iqr, 0.0);
  EXPECT_EQ(code_of([] { histogram_stats(std::vector<double>{1.0}); }), ErrorCode::InvalidArgument);
}

TEST(Histogram, RenderLayout) {
  const auto text = render_histogram("demo", histogram_stats(std::vector<double>{0.0, 1.0}, 2));
  EXPECT_EQ(text,
            "histogram demo\nn 2\nmean 0.5\niqr 0.5\nskewness 0\nkurtosis -2\ndegenerate 0\nedges 0,0.5,1\n"
            "counts 1,1\n");
}

TEST(SuccessRate, PublishedCounts) {
  EXPECT_NEAR(success_rate(925, 547), 59.1, 0.05);
  EXPECT_NEAR(success_rate(933, 917), 98.3, 0.05);
  EXPECT_EQ(code_of([] { success_rate(0, 0); }), ErrorCode::DivisionByZero);
  EXPECT_EQ(code_of([] { success_rate(3, 4); }), ErrorCode::InvalidArgument);
}

TEST(Confusion, ColumnMapping) {
  EXPECT_EQ(ConfusionMatrix::column_of(diag(Category::Normal)), 0u);
  EXPECT_EQ(ConfusionMatrix::column_of(diag(Category::ACUTMI, Severity::AB)), 3u);
  EXPECT_EQ(ConfusionMatrix::column_of(diag(Category::Other, Severity::ON)), 4u);
  EXPECT_EQ(ConfusionMatrix::column_of(diag(Category::Other, Severity::DE)), 7u);
  EXPECT_EQ(code_of([] { ConfusionMatrix::column_of(diag(Category::Other)); }), ErrorCode::InvalidArgument);
}

TEST(Confusion, PublishedTableRowsAndCsv) {
  const std::array<std::array<std::size_t, 8>, 4> rows = {{{547, 53, 0, 1, 118, 79, 127, 0},
                                                            {0, 917, 1, 0, 0, 0, 14, 1},
                                                            {0, 15, 865, 14, 0, 0, 33, 0},
                                                            {0, 20, 5, 637, 0, 4, 136, 1}}};
  const std::array<std::size_t, 4> plausible{925, 933, 927, 803};
  ConfusionMatrix m;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 8; ++c) m.add_count(kTargetCategories[r], c, rows[r][c]);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(m.row_sum(kTargetCategories[r]), plausible[r]);
  EXPECT_NEAR(success_rate(m.row_sum(Category::LBBB), m.at(Category::LBBB, 2)), 93.3, 0.05);
  EXPECT_NEAR(success_rate(m.row_sum(Category::ACUTMI), m.at(Category::ACUTMI, 3)), 79.3, 0.05);
  const std::string csv = m.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "actual,Normal,LVH,LBBB,ACUTMI,ON,BO,AB,DE");
  EXPECT_NE(csv.find("\nLVH,0,917,1,0,0,0,14,1\n"), std::string::npos);
}

TEST(Confusion, Tally) {
  std::vector<std::pair<Category, Diagnosis>> results = {{Category::LBBB, diag(Category::LBBB)},
                                                         {Category::LBBB, diag(Category::Other, Severity::AB)},
                                                         {Category::Normal, diag(Category::LVH)}};
  const auto m = tally_confusion(results);
  EXPECT_EQ(m.at(Category::LBBB, 2), 1u);
  EXPECT_EQ(m.at(Category::LBBB, 6), 1u);
  EXPECT_EQ(m.at(Category::Normal, 1), 1u);
  EXPECT_EQ(code_of([] { ConfusionMatrix().add(Category::Other, diag(Category::Normal)); }),
            ErrorCode::InvalidArgument);
}

TEST(Bias, ReportStructureAndSelfMatch) {
  const auto train = corpus_beats(Category::Normal, 12, 1), test = corpus_beats(Category::Normal, 9, 2);
  const auto report = bias_assessment(train, train, test, {.bins = 5, .seed = 3});
  EXPECT_EQ(report.compared, 9u);
  ASSERT_EQ(report.sdm.size(), 6u);
  EXPECT_EQ(report.sdm[0].label, "synthetic-training");
  EXPECT_EQ(report.sdm[0].metric, SdmMetric::PRD);
  EXPECT_EQ(report.sdm[5].label, "training-testing");
  for (const auto& r : report.sdm) EXPECT_EQ(r.summaries.size(), 9u);
  // Synthetic identical to training: every subsampled candidate has an exact twin.
  for (const auto& s : report.sdm[3].summaries) EXPECT_EQ(s.min, 0.0);
  ASSERT_EQ(report.features.size(), 6u);
  EXPECT_EQ(report.features[1].feature, "qrs_dur_ms");
  EXPECT_EQ(report.features[1].training.n, 12u);
  const std::string text = render_bias_report(report);
  EXPECT_NE(text.find("histogram RMSE synthetic-training min"), std::string::npos);
  EXPECT_NE(text.find("histogram feature qt_ms testing"), std::string::npos);
}

TEST(Bias, IidSetsAgreeWithinTwoStandardErrors) {
  const auto a = corpus_beats(Category::LBBB, 40, 10), b = corpus_beats(Category::LBBB, 40, 20),
             c = corpus_beats(Category::LBBB, 40, 30);
  BiasOptions opt;
  opt.metrics = {SdmMetric::RMSE};
  opt.features = false;
  const auto report = bias_assessment(a, b, c, opt);
  auto mins = [](const SdmPairReport& r) {
    std::vector<double> v;
    for (const auto& s : r.summaries) v.push_back(s.min);
    return v;
  };
  auto var = [](const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
  };
  const auto& st = report.sdm[0];
  const auto& tt = report.sdm[2];
  const double se = std::sqrt((var(mins(st), st.min.mean) + var(mins(tt), tt.min.mean)) / 40.0);
  EXPECT_LT(std::abs(st.min.mean - tt.min.mean), 2.0 * se);
}

TEST(Bias, DeterministicSubsampling) {
  const auto a = random_beats(7, 1), b = random_beats(4, 2), c = random_beats(5, 3);
  BiasOptions opt;
  opt.features = false;
  opt.seed = 42;
  const auto r1 = bias_assessment(a, b, c, opt), r2 = bias_assessment(a, b, c, opt);
  EXPECT_EQ(r1.compared, 4u);
  for (std::size_t i = 0; i < r1.sdm.size(); ++i) EXPECT_EQ(r1.sdm[i].summaries, r2.sdm[i].summaries);
  EXPECT_EQ(code_of([&] { bias_assessment({}, b, c, opt); }), ErrorCode::EmptySet);
}
