#include "ecggan/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>

#include "ecggan/beatgen.hpp"
#include "ecggan/error.hpp"
#include "ecggan/io.hpp"
#include "ecggan/xml.hpp"
#include "json.hpp"

namespace ecggan {

using nlohmann::ordered_json;

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kCheckpointFile = "checkpoint.bin";

template <typename F>
void for_each_adam_key(const char* prefix, nn::AdamHyper& h, F&& f) {
  const std::string p = prefix;
  f(p + ".learning_rate", h.learning_rate);
  f(p + ".beta1", h.beta1);
  f(p + ".beta2", h.beta2);
  f(p + ".epsilon", h.epsilon);
}

std::size_t get_count(const ConfigMap& cfg, const char* key, std::size_t fallback) {
  const long long v = cfg.get_int(key, static_cast<long long>(fallback));
  if (v < 0) throw Error(ErrorCode::Config, std::string(key) + " must not be negative");
  return static_cast<std::size_t>(v);
}

Category require_category(std::string_view name) {
  const auto c = parse_category(name);
  if (!c) throw Error(ErrorCode::Format, "unknown category " + std::string(name));
  return *c;
}

std::string epoch_stem(std::size_t epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%05zu", epoch);
  return buf;
}

ordered_json diagnosis_json(const Diagnosis& d) {
  ordered_json j;
  j["category"] = category_name(d.category);
  j["severity"] = severity_code(d.severity);
  j["statements"] = d.statements;
  j["age_years"] = d.age_years;
  j["sex"] = sex_name(d.sex);
  return j;
}

Diagnosis diagnosis_from_json(const nlohmann::json& j) {
  Diagnosis d;
  d.category = require_category(j.at("category").get<std::string>());
  const auto sev = parse_severity(j.at("severity").get<std::string>());
  if (!sev) throw Error(ErrorCode::Format, "unknown severity in manifest");
  d.severity = *sev;
  d.statements = j.at("statements").get<std::vector<std::string>>();
  d.age_years = j.at("age_years").get<double>();
  const auto sex = parse_sex(j.at("sex").get<std::string>());
  if (!sex) throw Error(ErrorCode::Format, "unknown sex in manifest");
  d.sex = *sex;
  return d;
}

ordered_json verdict_json(const PlausibilityVerdict& v) { return ordered_json::parse(audit_line(v)); }

PlausibilityVerdict verdict_from_json(const nlohmann::json& j) {
  PlausibilityVerdict v;
  v.epoch = j.at("epoch").get<std::size_t>();
  v.mmd_mean = j.at("mmd_mean").get<double>();
  v.mmd_pass = j.at("mmd_pass").get<bool>();
  v.amplitude_range_mv = j.at("amp_range_mv").get<double>();
  v.amplitude_pass = j.at("amp_pass").get<bool>();
  v.edge_argmax = j.at("edge_argmax").get<std::size_t>();
  v.edge_pass = j.at("edge_pass").get<bool>();
  v.epoch_pass = j.at("epoch_pass").get<bool>();
  v.passed = j.at("passed").get<bool>();
  return v;
}

ordered_json epoch_json(const CampaignEpoch& e) {
  ordered_json j;
  j["epoch"] = e.epoch;
  j["round"] = e.round;
  j["g_loss"] = e.generator_loss;
  j["d_loss"] = e.discriminator_loss;
  j["d_acc"] = e.discriminator_accuracy;
  j["plausibility"] = verdict_json(e.plausibility);
  if (e.verification_attempted) {
    ordered_json v;
    v["verified"] = e.verified;
    v["diagnosis"] = diagnosis_json(e.diagnosis);
    j["verification"] = v;
  } else {
    j["verification"] = nullptr;
  }
  return j;
}

CampaignEpoch epoch_from_json(const nlohmann::json& j) {
  CampaignEpoch e;
  e.epoch = j.at("epoch").get<std::size_t>();
  e.round = j.at("round").get<std::size_t>();
  e.generator_loss = j.at("g_loss").get<double>();
  e.discriminator_loss = j.at("d_loss").get<double>();
  e.discriminator_accuracy = j.at("d_acc").get<double>();
  e.plausibility = verdict_from_json(j.at("plausibility"));
  const auto& v = j.at("verification");
  if (!v.is_null()) {
    e.verification_attempted = true;
    e.verified = v.at("verified").get<bool>();
    e.diagnosis = diagnosis_from_json(v.at("diagnosis"));
  }
  return e;
}

std::string audit_jsonl(const CampaignReport& report) {
  std::string out;
  for (const auto& e : report.log) {
    ordered_json j = verdict_json(e.plausibility);
    j["global_epoch"] = e.epoch;
    j["round"] = e.round;
    if (e.verification_attempted) {
      j["verified"] = e.verified;
      j["category"] = category_name(e.diagnosis.category);
      j["severity"] = severity_code(e.diagnosis.severity);
    } else {
      j["verified"] = nullptr;
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::string metrics_jsonl(const CampaignReport& report) {
  std::string out;
  for (const auto& e : report.log)
    out += metrics_line(e.epoch, e.generator_loss, e.discriminator_loss, e.discriminator_accuracy) + "\n";
  return out;
}

ConfusionMatrix confusion_of(const CampaignReport& report) {
  ConfusionMatrix m;
  for (const auto& e : report.log)
    if (e.verification_attempted) m.add(report.target, e.diagnosis);
  return m;
}

nlohmann::json load_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, path.string() + ": " + e.what());
  }
}

fs::path manifest_path(const fs::path& p) { return fs::is_directory(p) ? p / kManifestFile : p; }

/// Report reconstructed from a manifest; accepted beats are reloaded from their CSV files.
CampaignReport report_from_manifest(const nlohmann::json& m, const fs::path& run_dir) {
  CampaignReport r;
  r.target = require_category(m.at("category").get<std::string>());
  const auto mode = parse_mode(m.at("mode").get<std::string>());
  if (!mode) throw Error(ErrorCode::Format, "unknown mode in manifest");
  r.mode = *mode;
  const auto& counts = m.at("counts");
  r.epochs = counts.at("epochs").get<std::size_t>();
  r.plausible = counts.at("plausible").get<std::size_t>();
  r.verified = counts.at("verified").get<std::size_t>();
  for (const auto& e : m.at("epochs")) r.log.push_back(epoch_from_json(e));
  for (const auto& a : m.at("artifacts")) {
    AcceptedBeat b;
    b.epoch = a.at("epoch").get<std::size_t>();
    b.round = a.at("round").get<std::size_t>();
    b.init_seed = a.at("init_seed").get<std::uint64_t>();
    b.beat = read_beat_csv(run_dir / a.at("csv").get<std::string>());
    b.record = stitch_record(derive_limb_leads(b.beat));
    b.diagnosis = diagnosis_from_json(a.at("diagnosis"));
    r.accepted.push_back(std::move(b));
  }
  return r;
}

std::string artifact_xml(std::size_t epoch) { return "xml/" + epoch_stem(epoch) + ".xml"; }
std::string artifact_csv(std::size_t epoch) { return "beats/" + epoch_stem(epoch) + ".csv"; }

Verification verify_quantized(const Record10s& record, Category target, const PipelineConfig& config) {
  return verify_target(quantize_microvolts(record), target, config.demographics, config.rules, config.detector);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

PipelineConfig PipelineConfig::from(const ConfigMap& cfg) {
  cfg.require_known([] {
    std::vector<std::string_view> keys;
    static const ConfigMap defaults = PipelineConfig{}.to_config();
    for (const auto& [k, v] : defaults.entries()) keys.push_back(k);
    return keys;
  }());

  PipelineConfig p;
  p.train_fraction = cfg.get_double("data.train_fraction", p.train_fraction);
  if (!(p.train_fraction > 0.0 && p.train_fraction < 1.0)) {
    throw Error(ErrorCode::Config, "data.train_fraction must lie in (0, 1)");
  }
  p.split_seed = static_cast<std::uint64_t>(cfg.get_int("data.split_seed", static_cast<long long>(p.split_seed)));
  p.width_divisor = get_count(cfg, "gan.width_divisor", p.width_divisor);
  p.gan.widths = ArchitectureWidths::scaled(p.width_divisor);
  p.gan.batch_size = get_count(cfg, "gan.batch_size", p.gan.batch_size);
  p.gan.epochs_max = get_count(cfg, "gan.epochs_max", p.gan.epochs_max);
  p.gan.seed = static_cast<std::uint64_t>(cfg.get_int("gan.seed", static_cast<long long>(p.gan.seed)));
  const std::string mode = cfg.get_string("gan.mode", mode_name(p.gan.mode));
  const auto parsed = parse_mode(mode);
  if (!parsed) throw Error(ErrorCode::Config, "gan.mode must be relearn or accumulate, got " + mode);
  p.gan.mode = *parsed;
  for_each_adam_key("gan.generator", p.gan.generator_optimizer,
                    [&](const std::string& k, double& v) { v = cfg.get_double(k, v); });
  for_each_adam_key("gan.discriminator", p.gan.discriminator_optimizer,
                    [&](const std::string& k, double& v) { v = cfg.get_double(k, v); });
  p.gan.validate();
  p.checkpoint_every = get_count(cfg, "run.checkpoint_every", p.checkpoint_every);
  if (p.checkpoint_every == 0) throw Error(ErrorCode::Config, "run.checkpoint_every must be positive");

  p.plausibility = PlausibilityConfig::from(cfg);
  p.rules = RulesConfig::from(cfg);
  p.detector = DetectorConfig::from(cfg);

  const std::string age = cfg.get_string("verify.age", "unknown");
  if (age != "unknown") p.demographics.age_years = cfg.get_double("verify.age", 0.0);
  const std::string sex = cfg.get_string("verify.sex", "Unidentified");
  const auto s = parse_sex(sex);
  if (!s) throw Error(ErrorCode::Config, "verify.sex: unknown value " + sex);
  p.demographics.sex = *s;

  p.histogram_bins = get_count(cfg, "eval.bins", p.histogram_bins);
  if (p.histogram_bins == 0) throw Error(ErrorCode::Config, "eval.bins must be positive");
  p.eval_seed = static_cast<std::uint64_t>(cfg.get_int("eval.seed", static_cast<long long>(p.eval_seed)));
  return p;
}

PipelineConfig PipelineConfig::load(const fs::path& path) { return from(ConfigMap::load(path)); }

ConfigMap PipelineConfig::to_config() const {
  ConfigMap m;
  m.set("data.train_fraction", format_double(train_fraction));
  m.set("data.split_seed", std::to_string(split_seed));
  m.set("gan.width_divisor", std::to_string(width_divisor));
  m.set("gan.batch_size", std::to_string(gan.batch_size));
  m.set("gan.epochs_max", std::to_string(gan.epochs_max));
  m.set("gan.seed", std::to_string(gan.seed));
  m.set("gan.mode", std::string(mode_name(gan.mode)));
  auto g = gan.generator_optimizer, d = gan.discriminator_optimizer;
  for_each_adam_key("gan.generator", g, [&](const std::string& k, double& v) { m.set(k, format_double(v)); });
  for_each_adam_key("gan.discriminator", d, [&](const std::string& k, double& v) { m.set(k, format_double(v)); });
  m.set("run.checkpoint_every", std::to_string(checkpoint_every));
  m.merge(plausibility.to_config());
  m.merge(rules.to_config());
  m.merge(detector.to_config());
  m.set("verify.age", demographics.age_years ? format_double(*demographics.age_years) : "unknown");
  m.set("verify.sex", std::string(sex_name(demographics.sex)));
  m.set("eval.bins", std::to_string(histogram_bins));
  m.set("eval.seed", std::to_string(eval_seed));
  return m;
}

// ---------------------------------------------------------------------------
// Corpora

void write_corpus(const fs::path& dir, const Corpus& corpus) {
  if (corpus.train.size() != corpus.train_ids.size() || corpus.test.size() != corpus.test_ids.size()) {
    throw Error(ErrorCode::InvalidArgument, "corpus ids and beats differ in count");
  }
  fs::create_directories(dir / "beats");
  for (std::size_t i = 0; i < corpus.train.size(); ++i)
    write_beat_csv(dir / "beats" / (corpus.train_ids[i] + ".csv"), corpus.train[i]);
  for (std::size_t i = 0; i < corpus.test.size(); ++i)
    write_beat_csv(dir / "beats" / (corpus.test_ids[i] + ".csv"), corpus.test[i]);
  ordered_json j;
  j["category"] = corpus.category ? ordered_json(category_name(*corpus.category)) : ordered_json(nullptr);
  j["train"] = corpus.train_ids;
  j["test"] = corpus.test_ids;
  write_file_atomic(dir / "corpus.json", j.dump(2) + "\n");
}

Corpus read_corpus(const fs::path& dir) {
  const auto j = load_json(dir / "corpus.json");
  Corpus c;
  try {
    if (!j.at("category").is_null()) c.category = require_category(j.at("category").get<std::string>());
    c.train_ids = j.at("train").get<std::vector<std::string>>();
    c.test_ids = j.at("test").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, "corpus.json: " + std::string(e.what()));
  }
  for (const auto& id : c.train_ids) c.train.push_back(read_beat_csv(dir / "beats" / (id + ".csv")));
  for (const auto& id : c.test_ids) c.test.push_back(read_beat_csv(dir / "beats" / (id + ".csv")));
  return c;
}

PreprocessSummary preprocess(const fs::path& input, const fs::path& out, const PipelineConfig& config,
                             std::optional<Category> category) {
  if (!fs::is_directory(input)) throw Error(ErrorCode::Io, "input directory " + input.string() + " not found");
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(input)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    if (name.size() > 9 && name.ends_with(".meta.csv")) continue;
    ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());

  PreprocessSummary summary;
  summary.inputs = ids.size();
  std::vector<std::string> kept_ids;
  std::vector<BeatMatrix> kept;
  for (const auto& id : ids) {
    const fs::path meta = input / (id + ".meta.csv");
    if (!fs::exists(meta)) throw Error(ErrorCode::Io, "missing metadata sidecar " + meta.string());
    try {
      const RawBeat raw = raw_beat_from_csv(read_file(input / (id + ".csv")), read_file(meta));
      kept.push_back(extract_centered_window(raw));
      kept_ids.push_back(id);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw;
      std::string what = e.what();
      const std::string prefix = std::string(to_string(e.code())) + ": ";
      if (what.starts_with(prefix)) what = what.substr(prefix.size());
      summary.rejects.push_back({id, std::string(to_string(e.code())), what});
      spdlog::info("rejected {}: {}", id, e.what());
    }
  }

  const auto [train_idx, test_idx] = split_indices(kept.size(), config.train_fraction, config.split_seed);
  Corpus corpus;
  corpus.category = category;
  for (auto i : train_idx) {
    corpus.train_ids.push_back(kept_ids[i]);
    corpus.train.push_back(kept[i]);
  }
  for (auto i : test_idx) {
    corpus.test_ids.push_back(kept_ids[i]);
    corpus.test.push_back(kept[i]);
  }
  write_corpus(out, corpus);

  std::string rejects = "id,reason,detail\n";
  for (const auto& r : summary.rejects) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    rejects += r.id + "," + r.reason + "," + detail + "\n";
  }
  write_file_atomic(out / "rejects.csv", rejects);
  summary.train = corpus.train.size();
  summary.test = corpus.test.size();
  return summary;
}

Corpus beatgen_corpus(const fs::path& out, const BeatgenOptions& options, const PipelineConfig& config) {
  const auto beats = make_corpus(options.category, options.count, options.seed, {.noise_std_mv = options.noise_std_mv});
  const auto [train_idx, test_idx] = split_indices(beats.size(), config.train_fraction, config.split_seed);
  auto id_of = [](std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "beat_%05zu", i);
    return std::string(buf);
  };
  Corpus corpus;
  corpus.category = options.category;
  for (auto i : train_idx) {
    corpus.train_ids.push_back(id_of(i));
    corpus.train.push_back(beats[i].beat);
  }
  for (auto i : test_idx) {
    corpus.test_ids.push_back(id_of(i));
    corpus.test.push_back(beats[i].beat);
  }
  write_corpus(out, corpus);

  ordered_json truth = ordered_json::array();
  for (std::size_t i = 0; i < beats.size(); ++i) {
    const BeatFeatures& f = beats[i].truth;
    ordered_json t;
    t["id"] = id_of(i);
    t["pr_ms"] = f.pr_ms;
    t["qrs_dur_ms"] = f.qrs_dur_ms;
    t["qt_ms"] = f.qt_ms;
    t["qtc_ms"] = f.qtc_ms;
    t["p_axis_deg"] = f.p_axis_deg;
    t["qrs_axis_deg"] = f.qrs_axis_deg;
    t["t_axis_deg"] = f.t_axis_deg;
    t["st_level_uv"] = f.st_level_uv;
    t["r_amplitude_mv"] = f.r_amplitude_mv;
    t["s_amplitude_mv"] = f.s_amplitude_mv;
    t["r_notched"] = f.r_notched;
    truth.push_back(t);
  }
  ordered_json manifest;
  manifest["category"] = category_name(options.category);
  manifest["count"] = options.count;
  manifest["seed"] = options.seed;
  manifest["noise_std_mv"] = options.noise_std_mv;
  manifest["lead_order"] = {"I", "II", "V1", "V2", "V3", "V4", "V5", "V6"};
  manifest["beats"] = truth;
  write_file_atomic(out / "truth.json", manifest.dump(2) + "\n");
  return corpus;
}

// ---------------------------------------------------------------------------
// Training and campaigns

std::string metrics_line(std::size_t epoch, double g_loss, double d_loss, double d_acc) {
  ordered_json j;
  j["epoch"] = epoch;
  j["g_loss"] = g_loss;
  j["d_loss"] = d_loss;
  j["d_acc"] = d_acc;
  return j.dump();
}

TrainSummary train(const fs::path& corpus_dir, const fs::path& out, const PipelineConfig& config,
                   const std::function<void(const std::string&)>& sink) {
  const Corpus corpus = read_corpus(corpus_dir);
  fs::create_directories(out);
  GanState state = make_state(config.gan);
  TrainSummary summary;
  std::string lines;
  for (std::size_t e = 0; e < config.gan.epochs_max; ++e) {
    EpochMetrics m = train_epoch(state, corpus.train, config.gan);
    m.batch_discriminator_loss.clear();
    const std::string line = metrics_line(m.epoch, m.generator_loss, m.discriminator_loss, m.discriminator_accuracy);
    lines += line + "\n";
    if (sink) sink(line);
    summary.epochs.push_back(std::move(m));
  }
  write_file_atomic(out / "metrics.jsonl", lines);
  write_file_atomic(out / kCheckpointFile, save_checkpoint(state));
  return summary;
}

std::string manifest_json(const CampaignReport& report, const PipelineConfig& config, const std::string& corpus,
                          const Corpus& corpus_data) {
  ordered_json m;
  m["campaign_id"] = std::string(category_name(report.target)) + "-" + std::string(mode_name(report.mode)) + "-seed" +
                     std::to_string(config.gan.seed);
  m["category"] = category_name(report.target);
  m["mode"] = mode_name(report.mode);
  m["seed"] = config.gan.seed;
  m["corpus"] = {{"path", corpus}, {"train", corpus_data.train.size()}, {"test", corpus_data.test.size()}};
  ordered_json snapshot = ordered_json::object();
  const ConfigMap settings = config.to_config();
  for (const auto& [k, v] : settings.entries()) snapshot[k] = v;
  m["config"] = snapshot;
  m["complete"] = report.epochs >= config.gan.epochs_max;
  const auto rate = report.success_rate();
  m["counts"] = {{"epochs", report.epochs},
                 {"plausible", report.plausible},
                 {"verified", report.verified},
                 {"success_rate", rate ? ordered_json(*rate) : ordered_json(nullptr)}};
  ordered_json epochs = ordered_json::array();
  for (const auto& e : report.log) epochs.push_back(epoch_json(e));
  m["epochs"] = epochs;
  ordered_json artifacts = ordered_json::array();
  for (const auto& a : report.accepted) {
    ordered_json j;
    j["epoch"] = a.epoch;
    j["round"] = a.round;
    j["init_seed"] = a.init_seed;
    j["xml"] = artifact_xml(a.epoch);
    j["csv"] = artifact_csv(a.epoch);
    j["diagnosis"] = diagnosis_json(a.diagnosis);
    artifacts.push_back(j);
  }
  m["artifacts"] = artifacts;
  return m.dump(2) + "\n";
}

CampaignReport run(const fs::path& corpus_dir, const fs::path& out, const PipelineConfig& config, Category target,
                   const RunOptions& options) {
  const Corpus corpus = read_corpus(corpus_dir);
  if (corpus.category && *corpus.category != target) {
    spdlog::warn("corpus category {} differs from target {}", category_name(*corpus.category), category_name(target));
  }
  fs::create_directories(out / "xml");
  fs::create_directories(out / "beats");

  CampaignOptions copt;
  copt.plausibility = config.plausibility;
  copt.rules = config.rules;
  copt.detector = config.detector;
  copt.demographics = config.demographics;
  copt.verify = [&](const Record10s& r, Category t) {
    return options.verify ? options.verify(quantize_microvolts(r), t) : verify_quantized(r, t, config);
  };
  copt.on_epoch = [&](const CampaignEpoch& e) {
    if (options.sink) {
      options.sink(metrics_line(e.epoch, e.generator_loss, e.discriminator_loss, e.discriminator_accuracy));
    }
    spdlog::debug("epoch {} mmd {} plausible {} verified {}", e.epoch, e.plausibility.mmd_mean, e.plausibility.passed,
                  e.verified);
  };
  Campaign campaign(config.gan, corpus.train, corpus.test, target, copt);

  const std::string corpus_label = corpus_dir.string();
  if (options.resume && fs::exists(out / kManifestFile) && fs::exists(out / kCheckpointFile)) {
    const auto m = load_json(out / kManifestFile);
    ConfigMap previous;
    for (const auto& [k, v] : m.at("config").items()) previous.set(k, v.get<std::string>());
    ConfigMap current = config.to_config();
    previous.set("gan.epochs_max", "");
    current.set("gan.epochs_max", "");
    if (previous.to_text() != current.to_text()) {
      throw Error(ErrorCode::Config, "resume: configuration differs from the one recorded in the manifest");
    }
    GanState state = make_state(config.gan);
    load_checkpoint(read_file(out / kCheckpointFile), state);
    CampaignReport report = report_from_manifest(m, out);
    // Epochs after the last checkpoint are replayed.
    while (report.epochs > state.total_epochs) {
      const CampaignEpoch& dropped = report.log.back();
      if (dropped.verification_attempted) --report.plausible;
      if (dropped.verified) {
        --report.verified;
        report.accepted.pop_back();
      }
      report.log.pop_back();
      --report.epochs;
    }
    campaign.resume(std::move(state), std::move(report));
    spdlog::info("resuming {} after epoch {}", out.string(), campaign.report().epochs);
  }

  auto persist = [&] {
    const CampaignReport& r = campaign.report();
    write_file_atomic(out / "audit.jsonl", audit_jsonl(r));
    write_file_atomic(out / "metrics.jsonl", metrics_jsonl(r));
    write_file_atomic(out / "confusion.csv", confusion_of(r).to_csv());
    write_file_atomic(out / kManifestFile, manifest_json(r, config, corpus_label, corpus));
    // Written last: a manifest ahead of the checkpoint is trimmed on resume.
    write_file_atomic(out / kCheckpointFile, save_checkpoint(campaign.state()));
  };

  XmlMetadata meta;
  meta.demographics = config.demographics;
  meta.target = target;
  while (!campaign.done()) {
    const std::size_t accepted_before = campaign.report().accepted.size();
    campaign.step();
    const auto& accepted = campaign.report().accepted;
    if (accepted.size() > accepted_before) {
      const AcceptedBeat& a = accepted.back();
      write_xml_file(out / artifact_xml(a.epoch), a.record, meta);
      write_beat_csv(out / artifact_csv(a.epoch), a.beat);
      spdlog::info("epoch {}: verified {} beat", a.epoch, category_name(target));
    }
    if (campaign.report().epochs % config.checkpoint_every == 0 || campaign.done()) persist();
  }
  return campaign.report();
}

// ---------------------------------------------------------------------------
// Verification, evaluation and reporting

std::vector<VerifyResult> verify_artifacts(const fs::path& path, const PipelineConfig& config) {
  std::vector<VerifyResult> results;
  if (path.extension() == ".xml") {
    const XmlRecord x = read_xml_file(path);
    const Verification v = verify_target(x.record, x.metadata.target, x.metadata.demographics, config.rules,
                                         config.detector);
    results.push_back({path.string(), x.metadata.target, v.verified, true, render_report(v.features, v.diagnosis)});
    return results;
  }
  const fs::path mpath = manifest_path(path);
  const fs::path run_dir = mpath.parent_path();
  const auto m = load_json(mpath);
  const Category target = require_category(m.at("category").get<std::string>());
  for (const auto& a : m.at("artifacts")) {
    const std::string rel = a.at("xml").get<std::string>();
    const XmlRecord x = read_xml_file(run_dir / rel);
    const Verification v = verify_target(x.record, x.metadata.target, x.metadata.demographics, config.rules,
                                         config.detector);
    const Diagnosis recorded = diagnosis_from_json(a.at("diagnosis"));
    const bool same = x.metadata.target == target && v.verified && v.diagnosis == recorded;
    results.push_back({rel, x.metadata.target, v.verified, same, render_report(v.features, v.diagnosis)});
  }
  return results;
}

std::string evaluate(const fs::path& run_dir, const fs::path& corpus_dir, const PipelineConfig& config) {
  const fs::path mpath = manifest_path(run_dir);
  const auto m = load_json(mpath);
  std::vector<BeatMatrix> synthetic;
  for (const auto& a : m.at("artifacts"))
    synthetic.push_back(read_beat_csv(mpath.parent_path() / a.at("csv").get<std::string>()));
  if (synthetic.empty()) throw Error(ErrorCode::EmptySet, "run has no verified beats to evaluate");
  const Corpus corpus = read_corpus(corpus_dir);
  BiasOptions opt;
  opt.bins = config.histogram_bins;
  opt.seed = config.eval_seed;
  opt.detector = config.detector;
  return render_bias_report(bias_assessment(synthetic, corpus.train, corpus.test, opt));
}

CampaignSummaryReport summarize_runs(const std::vector<fs::path>& run_dirs) {
  CampaignSummaryReport out;
  out.table = "category,mode,epochs,plausible,verified,success_rate\n";
  for (const auto& dir : run_dirs) {
    const fs::path mpath = manifest_path(dir);
    const auto m = load_json(mpath);
    const CampaignReport r = report_from_manifest(m, mpath.parent_path());
    const auto rate = r.success_rate();
    char pct[32] = "undefined";
    if (rate) std::snprintf(pct, sizeof pct, "%.1f", *rate);
    out.table += std::string(category_name(r.target)) + "," + std::string(mode_name(r.mode)) + "," +
                 std::to_string(r.epochs) + "," + std::to_string(r.plausible) + "," + std::to_string(r.verified) +
                 "," + pct + "\n";
    for (const auto& e : r.log)
      if (e.verification_attempted) out.confusion.add(r.target, e.diagnosis);
  }
  return out;
}

}  // namespace ecggan
