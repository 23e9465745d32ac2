#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ecggan/campaign.hpp"
#include "ecggan/config.hpp"
#include "ecggan/evalstats.hpp"
#include "ecggan/gan.hpp"
#include "ecggan/plausibility.hpp"
#include "ecggan/verifier.hpp"

namespace ecggan {

namespace fs = std::filesystem;

/// Process exit codes of the command-line tool.
enum class ExitCode : int { Ok = 0, Failure = 1, ZeroPlausible = 2, Io = 3, Config = 4 };

/// Everything a run depends on besides the corpus. Keys:
///   data.train_fraction, data.split_seed
///   gan.batch_size, gan.epochs_max, gan.seed, gan.mode (relearn | accumulate), gan.width_divisor,
///   gan.generator.{learning_rate, beta1, beta2, epsilon}, gan.discriminator.{...}
///   run.checkpoint_every
///   verify.age (years | unknown), verify.sex
///   eval.bins, eval.seed
/// plus the plausibility.*, detect.* and rule keys of the respective modules.
struct PipelineConfig {
  double train_fraction = 0.9;
  std::uint64_t split_seed = 1;
  std::size_t width_divisor = 1;
  GanConfig gan{};
  std::size_t checkpoint_every = 10;
  PlausibilityConfig plausibility{};
  RulesConfig rules{};
  DetectorConfig detector{};
  Demographics demographics{};
  std::size_t histogram_bins = 20;
  std::uint64_t eval_seed = 0;

  /// Unknown keys are rejected.
  static PipelineConfig from(const ConfigMap& cfg);
  static PipelineConfig load(const fs::path& path);
  ConfigMap to_config() const;
};

/// Beats of one category split into training and testing parts. On disk:
/// corpus.json (category, ids of both parts) and beats/<id>.csv.
struct Corpus {
  std::optional<Category> category;
  std::vector<std::string> train_ids, test_ids;
  std::vector<BeatMatrix> train, test;
};

void write_corpus(const fs::path& dir, const Corpus& corpus);
Corpus read_corpus(const fs::path& dir);

struct Reject {
  std::string id;
  std::string reason;  // error code name
  std::string detail;
};

struct PreprocessSummary {
  std::size_t inputs = 0;
  std::vector<Reject> rejects;
  std::size_t train = 0, test = 0;
};

/// Reads every <id>.csv with its <id>.meta.csv sidecar from `input`, windows
/// the accepted beats and writes a split corpus plus rejects.csv to `out`.
/// Input files are processed in lexicographic id order.
PreprocessSummary preprocess(const fs::path& input, const fs::path& out, const PipelineConfig& config,
                             std::optional<Category> category = std::nullopt);

struct BeatgenOptions {
  Category category = Category::Normal;
  std::size_t count = 256;
  std::uint64_t seed = 1;
  double noise_std_mv = 0.0;
};

/// Synthetic corpus in the preprocessed layout, plus truth.json holding the
/// ground-truth features of every beat.
Corpus beatgen_corpus(const fs::path& out, const BeatgenOptions& options, const PipelineConfig& config);

/// Line-delimited per-epoch training record: epoch, g_loss, d_loss, d_acc.
std::string metrics_line(std::size_t epoch, double g_loss, double d_loss, double d_acc);

struct TrainSummary {
  std::vector<EpochMetrics> epochs;
};

/// Adversarial training only (no gating): writes metrics.jsonl and
/// checkpoint.bin to `out`; each metrics line is also passed to `sink`.
TrainSummary train(const fs::path& corpus_dir, const fs::path& out, const PipelineConfig& config,
                   const std::function<void(const std::string&)>& sink = {});

struct RunOptions {
  bool resume = false;
  std::function<void(const std::string&)> sink;  // receives each metrics line
  /// Replaces the rule verifier; it sees the record exactly as the XML stores it.
  std::function<Verification(const Record10s&, Category)> verify;
};

/// Full generation campaign. Writes into `out`:
///   manifest.json, audit.jsonl, metrics.jsonl, confusion.csv,
///   xml/epoch_<n>.xml and beats/epoch_<n>.csv for every verified beat,
///   checkpoint.bin. With `resume`, an interrupted run continues from the
///   checkpoint and its manifest.
CampaignReport run(const fs::path& corpus_dir, const fs::path& out, const PipelineConfig& config,
                   Category target, const RunOptions& options = {});

/// Manifest JSON text of a finished or partial campaign.
std::string manifest_json(const CampaignReport& report, const PipelineConfig& config, const std::string& corpus,
                          const Corpus& corpus_data);

struct VerifyResult {
  std::string path;
  Category target = Category::Normal;
  bool verified = false;
  bool matches_manifest = true;
  std::string report;  // fixed-layout verifier report
};

/// Re-imports XML and re-verifies it. `path` is a single XML file or a run
/// directory / manifest.json, in which case every listed artifact is checked
/// against its recorded diagnosis.
std::vector<VerifyResult> verify_artifacts(const fs::path& path, const PipelineConfig& config);

/// Six feature and eighteen SDM histograms of the verified beats of a run
/// against the corpus, in the evalstats text format. Needs at least one
/// verified beat.
std::string evaluate(const fs::path& run_dir, const fs::path& corpus_dir, const PipelineConfig& config);

/// Success-rate table over run directories (category, epochs, plausible,
/// verified, rate) followed by the confusion matrix CSV of their plausible beats.
struct CampaignSummaryReport {
  std::string table;
  ConfusionMatrix confusion;
};
CampaignSummaryReport summarize_runs(const std::vector<fs::path>& run_dirs);

}  // namespace ecggan
