#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "ecggan/beatgen.hpp"
#include "ecggan/error.hpp"
#include "ecggan/io.hpp"
#include "ecggan/pipeline.hpp"
#include "ecggan/xml.hpp"
#include "json.hpp"

using namespace ecggan;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("ecggan_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return files;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ecggan::Error thrown";
  return ErrorCode::Format;
}

RawBeat raw_beat(double rate, std::uint64_t seed) {
  Rng rng(seed);
  RawBeat r;
  r.leads = 8;
  r.samples.resize(1200 * 8);
  for (double& v : r.samples) v = rng.normal(0.0, 0.2);
  r.q_onset_ms = 560;
  r.qrs_dur_ms = 90;
  r.heart_rate_bpm = rate;
  r.demographics.age_years = 60;
  r.demographics.sex = Sex::Female;
  return r;
}

PipelineConfig small_config(std::size_t epochs) {
  ConfigMap cfg;
  cfg.set("gan.width_divisor", "16");
  cfg.set("gan.batch_size", "8");
  cfg.set("gan.epochs_max", std::to_string(epochs));
  cfg.set("gan.seed", "3");
  cfg.set("plausibility.feature_map", "lead_vectors");
  cfg.set("run.checkpoint_every", "5");
  return PipelineConfig::from(cfg);
}

// Gate every candidate through once the epoch floor is met.
PipelineConfig lenient(PipelineConfig c) {
  c.plausibility.mmd_threshold = 1e9;
  c.plausibility.min_amplitude_range_mv = 1e-12;
  c.plausibility.edge_margin_samples = 1;
  c.plausibility.min_epochs = 2;
  return c;
}

Verification accept_all(const Record10s&, Category target) {
  Verification v;
  v.verified = true;
  v.diagnosis.category = target;
  return v;
}

}  // namespace

TEST(PipelineConfig, DefaultsRoundTrip) {
  const PipelineConfig d;
  const ConfigMap text = d.to_config();
  EXPECT_EQ(PipelineConfig::from(text).to_config().to_text(), text.to_text());
  EXPECT_EQ(d.gan.batch_size, 32u);
  EXPECT_EQ(d.train_fraction, 0.9);
  EXPECT_EQ(d.plausibility.mmd_threshold, 0.004);
}

TEST(PipelineConfig, ShippedFilesLoad) {
  const auto full = PipelineConfig::load(ECGGAN_SOURCE_DIR "/configs/default.conf");
  EXPECT_EQ(full.to_config().to_text(), PipelineConfig{}.to_config().to_text());
  const auto desk = PipelineConfig::load(ECGGAN_SOURCE_DIR "/configs/desk.conf");
  EXPECT_EQ(desk.width_divisor, 16u);
  EXPECT_EQ(desk.gan.epochs_max, 200u);
  EXPECT_EQ(desk.plausibility.feature_map, FeatureMap::LeadVectors);
}

TEST(PipelineConfig, Errors) {
  ConfigMap unknown;
  unknown.set("gan.bogus", "1");
  EXPECT_EQ(code_of([&] { PipelineConfig::from(unknown); }), ErrorCode::Config);
  ConfigMap mode;
  mode.set("gan.mode", "sometimes");
  EXPECT_EQ(code_of([&] { PipelineConfig::from(mode); }), ErrorCode::Config);
  ConfigMap frac;
  frac.set("data.train_fraction", "1.5");
  EXPECT_EQ(code_of([&] { PipelineConfig::from(frac); }), ErrorCode::Config);
  ConfigMap sex;
  sex.set("verify.sex", "X");
  EXPECT_EQ(code_of([&] { PipelineConfig::from(sex); }), ErrorCode::Config);
  ConfigMap age;
  age.set("verify.age", "61");
  EXPECT_EQ(PipelineConfig::from(age).demographics.age_years, 61.0);
}

TEST(Preprocess, RejectsFastBeatsAndIsIdempotent) {
  TempDir in("pre_in"), out1("pre_out1"), out2("pre_out2");
  for (int i = 0; i < 6; ++i) {
    const RawBeat r = raw_beat(i == 3 ? 110.0 : 70.0, static_cast<std::uint64_t>(i));
    const std::string id = "rec" + std::to_string(i);
    write_file_atomic(in.path() / (id + ".csv"), raw_beat_to_csv(r));
    write_file_atomic(in.path() / (id + ".meta.csv"), raw_meta_to_csv(r));
  }
  const PipelineConfig c;
  const auto s = preprocess(in.path(), out1.path(), c, Category::Normal);
  EXPECT_EQ(s.inputs, 6u);
  ASSERT_EQ(s.rejects.size(), 1u);
  EXPECT_EQ(s.rejects[0].id, "rec3");
  EXPECT_EQ(s.rejects[0].reason, "RateExcluded");
  EXPECT_EQ(s.train + s.test, 5u);
  EXPECT_EQ(s.train, 4u);  // floor(5 * 0.9)
  const std::string rejects = read_file(out1.path() / "rejects.csv");
  EXPECT_EQ(rejects.substr(0, rejects.find('\n')), "id,reason,detail");
  EXPECT_NE(rejects.find("\nrec3,RateExcluded,"), std::string::npos);

  preprocess(in.path(), out2.path(), c, Category::Normal);
  EXPECT_EQ(snapshot(out1.path()), snapshot(out2.path()));

  const Corpus corpus = read_corpus(out1.path());
  EXPECT_EQ(corpus.category, Category::Normal);
  EXPECT_EQ(corpus.train.size(), 4u);
  EXPECT_EQ(corpus.train[0], extract_centered_window(raw_beat(70.0, std::stoull(corpus.train_ids[0].substr(3)))));
}

TEST(Preprocess, MissingSidecarIsIoError) {
  TempDir in("pre_nometa"), out("pre_nometa_out");
  write_file_atomic(in.path() / "a.csv", raw_beat_to_csv(raw_beat(60, 1)));
  EXPECT_EQ(code_of([&] { preprocess(in.path(), out.path(), PipelineConfig{}); }), ErrorCode::Io);
}

TEST(Beatgen, CorpusAndTruthManifest) {
  TempDir dir("beatgen");
  const Corpus c = beatgen_corpus(dir.path(), {Category::ACUTMI, 20, 4, 0.0}, PipelineConfig{});
  EXPECT_EQ(c.train.size(), 18u);
  EXPECT_EQ(c.test.size(), 2u);
  const Corpus back = read_corpus(dir.path());
  EXPECT_EQ(back.category, Category::ACUTMI);
  EXPECT_EQ(back.train, c.train);
  EXPECT_EQ(back.test_ids, c.test_ids);
  const auto truth = nlohmann::json::parse(read_file(dir.path() / "truth.json"));
  ASSERT_EQ(truth["beats"].size(), 20u);
  const auto expected = make_corpus(Category::ACUTMI, 20, 4);
  EXPECT_EQ(truth["beats"][7]["qrs_dur_ms"].get<double>(), expected[7].truth.qrs_dur_ms);
  EXPECT_EQ(truth["beats"][7]["st_level_uv"][7].get<double>(), expected[7].truth.st_level_uv[7]);
}

TEST(Train, EmitsOneMetricsLinePerEpoch) {
  TempDir corpus("train_corpus"), out("train_out");
  beatgen_corpus(corpus.path(), {Category::LBBB, 16, 1, 0.0}, PipelineConfig{});
  std::vector<std::string> lines;
  const auto s = train(corpus.path(), out.path(), small_config(3), [&](const std::string& l) { lines.push_back(l); });
  ASSERT_EQ(lines.size(), 3u);
  const auto first = nlohmann::json::parse(lines[0]);
  EXPECT_EQ(first["epoch"], 1);
  EXPECT_TRUE(first.contains("g_loss") && first.contains("d_loss") && first.contains("d_acc"));
  EXPECT_EQ(read_file(out.path() / "metrics.jsonl"), lines[0] + "\n" + lines[1] + "\n" + lines[2] + "\n");
  EXPECT_TRUE(fs::exists(out.path() / "checkpoint.bin"));
  EXPECT_EQ(s.epochs.size(), 3u);
}

TEST(Run, ZeroPlausibleManifest) {
  TempDir corpus("run0_corpus"), out("run0_out");
  beatgen_corpus(corpus.path(), {Category::LBBB, 16, 1, 0.0}, PipelineConfig{});
  const auto report = run(corpus.path(), out.path(), small_config(4), Category::LBBB);
  EXPECT_EQ(report.plausible, 0u);
  const auto m = nlohmann::json::parse(read_file(out.path() / "manifest.json"));
  EXPECT_TRUE(m["counts"]["success_rate"].is_null());
  EXPECT_EQ(m["epochs"].size(), 4u);
  EXPECT_TRUE(m["complete"].get<bool>());
  EXPECT_EQ(m["config"]["gan.width_divisor"], "16");
  std::size_t lines = 0;
  for (char ch : read_file(out.path() / "audit.jsonl")) lines += ch == '\n';
  EXPECT_EQ(lines, 4u);
}

TEST(Run, AcceptedBeatsBecomeArtifacts) {
  TempDir corpus("run1_corpus"), out("run1_out");
  beatgen_corpus(corpus.path(), {Category::LBBB, 16, 1, 0.0}, PipelineConfig{});
  PipelineConfig c = lenient(small_config(4));
  c.gan.mode = LearningMode::Relearning;
  RunOptions opt;
  opt.verify = accept_all;
  const auto report = run(corpus.path(), out.path(), c, Category::LBBB, opt);
  EXPECT_EQ(report.plausible, 2u);  // epoch floor 2, counted per round
  EXPECT_EQ(report.verified, 2u);
  const auto m = nlohmann::json::parse(read_file(out.path() / "manifest.json"));
  ASSERT_EQ(m["artifacts"].size(), 2u);
  EXPECT_NE(m["artifacts"][0]["init_seed"], m["artifacts"][1]["init_seed"]);
  for (const auto& a : m["artifacts"]) {
    EXPECT_TRUE(fs::exists(out.path() / a["xml"].get<std::string>()));
    const XmlRecord x = read_xml_file(out.path() / a["xml"].get<std::string>());
    EXPECT_EQ(x.metadata.target, Category::LBBB);
  }
  // The untrained generator's beats do not survive the real verifier.
  for (const auto& v : verify_artifacts(out.path(), c)) EXPECT_FALSE(v.matches_manifest);
  const std::string confusion = read_file(out.path() / "confusion.csv");
  EXPECT_NE(confusion.find("\nLBBB,0,0,2,0,0,0,0,0\n"), std::string::npos);
}

TEST(Run, ResumeReproducesUninterruptedRun) {
  TempDir corpus("resume_corpus"), straight("resume_a"), resumed("resume_b");
  beatgen_corpus(corpus.path(), {Category::LBBB, 16, 1, 0.0}, PipelineConfig{});
  RunOptions opt;
  opt.verify = accept_all;
  const PipelineConfig full = lenient(small_config(12));
  run(corpus.path(), straight.path(), full, Category::LBBB, opt);

  PipelineConfig part = full;
  part.gan.epochs_max = 7;
  run(corpus.path(), resumed.path(), part, Category::LBBB, opt);
  opt.resume = true;
  run(corpus.path(), resumed.path(), full, Category::LBBB, opt);

  auto a = snapshot(straight.path()), b = snapshot(resumed.path());
  a.erase("manifest.json");
  b.erase("manifest.json");
  EXPECT_EQ(a, b);
  auto ma = nlohmann::json::parse(read_file(straight.path() / "manifest.json"));
  auto mb = nlohmann::json::parse(read_file(resumed.path() / "manifest.json"));
  ma["corpus"]["path"] = mb["corpus"]["path"];
  EXPECT_EQ(ma, mb);

  PipelineConfig other = full;
  other.gan.seed = 99;
  EXPECT_EQ(code_of([&] { run(corpus.path(), resumed.path(), other, Category::LBBB, opt); }), ErrorCode::Config);
}

TEST(Run, SameInputsGiveIdenticalFiles) {
  TempDir corpus("det_corpus"), a("det_a"), b("det_b");
  beatgen_corpus(corpus.path(), {Category::LBBB, 16, 1, 0.0}, PipelineConfig{});
  RunOptions opt;
  opt.verify = accept_all;
  run(corpus.path(), a.path(), lenient(small_config(5)), Category::LBBB, opt);
  run(corpus.path(), b.path(), lenient(small_config(5)), Category::LBBB, opt);
  EXPECT_EQ(snapshot(a.path()), snapshot(b.path()));
}

// A run directory holding real beatgen beats as its verified artifacts.
class VerifiedRun : public ::testing::Test {
 protected:
  void SetUp() override {
    beatgen_corpus(corpus.path(), {Category::LBBB, 30, 2, 0.0}, config);
    CampaignReport r;
    r.target = Category::LBBB;
    const auto beats = make_corpus(Category::LBBB, 3, 77);
    for (std::size_t i = 0; i < beats.size(); ++i) {
      AcceptedBeat a;
      a.epoch = 10 + i;
      a.beat = beats[i].beat;
      a.record = stitch_record(derive_limb_leads(a.beat));
      const Verification v = verify_target(quantize_microvolts(a.record), Category::LBBB, config.demographics);
      a.diagnosis = v.diagnosis;
      char stem[32];
      std::snprintf(stem, sizeof stem, "epoch_%05zu", a.epoch);
      fs::create_directories(out.path() / "xml");
      fs::create_directories(out.path() / "beats");
      write_xml_file(out.path() / "xml" / (std::string(stem) + ".xml"), a.record, {config.demographics, Category::LBBB});
      write_beat_csv(out.path() / "beats" / (std::string(stem) + ".csv"), a.beat);
      r.accepted.push_back(a);
      CampaignEpoch e;
      e.epoch = a.epoch;
      e.plausibility.passed = true;
      e.verification_attempted = e.verified = true;
      e.diagnosis = a.diagnosis;
      r.log.push_back(e);
    }
    r.epochs = r.plausible = r.verified = 3;
    write_file_atomic(out.path() / "manifest.json", manifest_json(r, config, corpus.path().string(), read_corpus(corpus.path())));
  }

  PipelineConfig config;
  TempDir corpus{"verified_corpus"}, out{"verified_run"};
};

TEST_F(VerifiedRun, ArtifactsReverify) {
  const auto results = verify_artifacts(out.path(), config);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& v : results) {
    EXPECT_TRUE(v.verified) << v.path;
    EXPECT_TRUE(v.matches_manifest) << v.path;
  }
  const auto single = verify_artifacts(out.path() / "xml" / "epoch_00010.xml", config);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_NE(single[0].report.find("Category LBBB"), std::string::npos);
}

TEST_F(VerifiedRun, EvaluationBundle) {
  const std::string bundle = evaluate(out.path(), corpus.path(), config);
  std::size_t feature_blocks = 0, sdm_blocks = 0, pos = 0;
  while ((pos = bundle.find("histogram ", pos)) != std::string::npos) {
    const std::string label = bundle.substr(pos, bundle.find('\n', pos) - pos);
    (label.starts_with("histogram feature ") ? feature_blocks : sdm_blocks)++;
    ++pos;
  }
  EXPECT_EQ(feature_blocks, 18u);  // six features, three datasets
  EXPECT_EQ(sdm_blocks, 18u);      // three pairs, min/max/mean, two metrics
  EXPECT_EQ(bundle, evaluate(out.path(), corpus.path(), config));
}

TEST_F(VerifiedRun, SummaryTable) {
  const auto s = summarize_runs({out.path()});
  EXPECT_EQ(s.table, "category,mode,epochs,plausible,verified,success_rate\nLBBB,accumulate,3,3,3,100.0\n");
  EXPECT_EQ(s.confusion.at(Category::LBBB, 2), 3u);
}

TEST(Evaluate, NeedsAVerifiedBeat) {
  TempDir corpus("eval_corpus"), out("eval_out");
  beatgen_corpus(corpus.path(), {Category::LBBB, 16, 1, 0.0}, PipelineConfig{});
  run(corpus.path(), out.path(), small_config(2), Category::LBBB);
  EXPECT_EQ(code_of([&] { evaluate(out.path(), corpus.path(), PipelineConfig{}); }), ErrorCode::EmptySet);
}
