#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "ecggan/error.hpp"
#include "ecggan/io.hpp"
#include "ecggan/pipeline.hpp"

using namespace ecggan;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
};

void setup_logging() {
  auto logger = spdlog::stderr_color_st("ecggan");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("ECGGAN_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

ConfigMap base_config(const Common& common) {
  ConfigMap cfg = common.config_path.empty() ? ConfigMap{} : ConfigMap::load(common.config_path);
  for (const auto& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Config, "--set expects key=value, got " + kv);
    cfg.set(std::string(trim(std::string_view(kv).substr(0, eq))), std::string(trim(std::string_view(kv).substr(eq + 1))));
  }
  return cfg;
}

Category category_arg(const std::string& name) {
  const auto c = parse_category(name);
  if (!c || *c == Category::Other) throw Error(ErrorCode::Config, "category must be Normal, LVH, LBBB or ACUTMI");
  return *c;
}

void print_line(const std::string& line) { std::cout << line << '\n' << std::flush; }

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Io:
    case ErrorCode::Format: return static_cast<int>(ExitCode::Io);
    case ErrorCode::Config: return static_cast<int>(ExitCode::Config);
    default: return static_cast<int>(ExitCode::Failure);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"ECG beat generation, plausibility gating and verification"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "key = value settings file")->check(CLI::ExistingFile);
  app.add_option("--set", common.overrides, "override one setting, key=value");

  std::string category = "Normal", mode, input, out, corpus;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::size_t count = 256;
  double noise = 0.0;
  bool resume = false;
  std::vector<std::string> runs;

  auto* pre = app.add_subcommand("preprocess", "window, filter and split raw representative beats");
  pre->add_option("--input", input, "directory of <id>.csv and <id>.meta.csv")->required();
  pre->add_option("--out", out, "corpus directory")->required();
  pre->add_option("--category", category, "category recorded in the corpus");
  pre->add_option("--seed", seed, "split seed");

  auto* gen = app.add_subcommand("beatgen", "write a synthetic corpus with ground-truth features");
  gen->add_option("--category", category)->required();
  gen->add_option("--count", count, "number of beats")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "beat template seed");
  gen->add_option("--noise", noise, "white-noise standard deviation in mV")->check(CLI::NonNegativeNumber);
  gen->add_option("--out", out, "corpus directory")->required();

  auto* trn = app.add_subcommand("train", "adversarial training only, emitting per-epoch metrics");
  auto* rn = app.add_subcommand("run", "full generation campaign with gating, verification and XML export");
  for (auto* sub : {trn, rn}) {
    sub->add_option("--category", category)->required();
    sub->add_option("--mode", mode, "relearn or accumulate");
    sub->add_option("--epochs", epochs, "epochs_max")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "campaign seed");
    sub->add_option("--corpus", corpus, "corpus directory")->required();
    sub->add_option("--out", out, "output directory")->required();
  }
  rn->add_flag("--resume", resume, "continue an interrupted run in --out");

  auto* ver = app.add_subcommand("verify", "re-import XML and re-run the verifier");
  ver->add_option("--input", input, "XML file, run directory or manifest.json")->required();

  auto* eval = app.add_subcommand("evaluate", "feature and distance histograms of a run against its corpus");
  eval->add_option("--run", input, "run directory")->required();
  eval->add_option("--corpus", corpus, "corpus directory")->required();
  eval->add_option("--out", out, "output file (stdout when absent)");

  auto* rep = app.add_subcommand("report", "success rates and confusion matrix over runs");
  rep->add_option("--runs", runs, "run directories")->required();
  rep->add_option("--out", out, "directory for success.csv and confusion.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    ConfigMap cfg = base_config(common);
    if (!mode.empty()) cfg.set("gan.mode", mode);
    if (epochs) cfg.set("gan.epochs_max", std::to_string(*epochs));

    if (*pre) {
      if (seed) cfg.set("data.split_seed", std::to_string(*seed));
      const PipelineConfig config = PipelineConfig::from(cfg);
      const auto s = preprocess(input, out, config, parse_category(category));
      std::cout << "inputs " << s.inputs << " rejected " << s.rejects.size() << " train " << s.train << " test "
                << s.test << '\n';
    } else if (*gen) {
      const PipelineConfig config = PipelineConfig::from(cfg);
      BeatgenOptions opt{category_arg(category), count, seed.value_or(1), noise};
      const Corpus c = beatgen_corpus(out, opt, config);
      std::cout << "train " << c.train.size() << " test " << c.test.size() << '\n';
    } else if (*trn) {
      if (seed) cfg.set("gan.seed", std::to_string(*seed));
      const PipelineConfig config = PipelineConfig::from(cfg);
      category_arg(category);
      train(corpus, out, config, print_line);
    } else if (*rn) {
      if (seed) cfg.set("gan.seed", std::to_string(*seed));
      const PipelineConfig config = PipelineConfig::from(cfg);
      const CampaignReport r = run(corpus, out, config, category_arg(category), {resume, print_line});
      const auto rate = r.success_rate();
      std::cerr << "epochs " << r.epochs << " plausible " << r.plausible << " verified " << r.verified
                << " success_rate " << (rate ? format_double(*rate) : std::string("undefined")) << '\n';
      if (r.plausible == 0) return static_cast<int>(ExitCode::ZeroPlausible);
    } else if (*ver) {
      const PipelineConfig config = PipelineConfig::from(cfg);
      const auto results = verify_artifacts(input, config);
      bool ok = true;
      for (const auto& v : results) {
        std::cout << v.path << ": " << (v.verified ? "verified " : "not verified ") << category_name(v.target)
                  << (v.matches_manifest ? "" : " (differs from manifest)") << '\n';
        if (results.size() == 1) std::cout << v.report;
        ok = ok && v.verified && v.matches_manifest;
      }
      if (!ok) return static_cast<int>(ExitCode::Failure);
    } else if (*eval) {
      const PipelineConfig config = PipelineConfig::from(cfg);
      const std::string bundle = evaluate(input, corpus, config);
      if (out.empty()) std::cout << bundle;
      else write_file_atomic(out, bundle);
    } else if (*rep) {
      const auto s = summarize_runs({runs.begin(), runs.end()});
      std::cout << s.table << '\n' << s.confusion.to_csv();
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        write_file_atomic(std::filesystem::path(out) / "success.csv", s.table);
        write_file_atomic(std::filesystem::path(out) / "confusion.csv", s.confusion.to_csv());
      }
    }
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(ExitCode::Io);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return static_cast<int>(ExitCode::Failure);
  }
  return static_cast<int>(ExitCode::Ok);
}
