#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>

#include "guirepair/error.hpp"
#include "guirepair/pipeline.hpp"

namespace {

using namespace guirepair;

struct Args {
  std::string config;
  std::string issue;
  std::string repo;
  std::string mode = "replay";
  std::string variant = "full";
  std::string out = "runs";
  std::string run_id;
  std::string transcript;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--config", a.config, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--issue", a.issue, "Issue record (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--repo", a.repo, "Repository checkout")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--mode", a.mode, "Model access: live, record or replay")
      ->check(CLI::IsMember({"live", "record", "replay"}));
  cmd->add_option("--variant", a.variant, "Pipeline variant")->check(CLI::IsMember({"base", "i2c", "c2i", "full"}));
  cmd->add_option("--out", a.out, "Directory holding run directories");
  cmd->add_option("--run-id", a.run_id, "Run directory name (default: UTC timestamp for run, 'staged' otherwise)");
  cmd->add_option("--transcript", a.transcript, "Transcript file (overrides the config)");
  cmd->add_flag("-v,--verbose", a.verbose, "Debug logging");
}

int run_command(const std::string& name, const Args& a) {
  spdlog::set_level(a.verbose ? spdlog::level::debug : spdlog::level::info);
  auto config = load_config(a.config);
  if (!a.transcript.empty()) config.provider.transcript = fs::absolute(a.transcript);
  auto mode = provider_mode_from_string(a.mode);
  auto variant = variant_from_string(a.variant);

  if (name == "run") {
    RunOptions opts;
    opts.issue_path = a.issue;
    opts.repo_path = a.repo;
    opts.config = config;
    opts.mode = mode;
    opts.variant = variant;
    opts.out_dir = a.out;
    if (!a.run_id.empty()) opts.run_id = a.run_id;
    auto result = run_end_to_end(std::move(opts));
    std::cout << prediction_line(result.prediction) << "\n";
    spdlog::info("run directory: {}", result.run_dir.string());
    return 0;
  }

  auto issue = load_issue_report(a.issue);
  auto snapshot = snapshot_repository(a.repo);
  auto provider = make_provider(config, mode);
  auto run_dir = fs::path(a.out) / issue.instance_id / (a.run_id.empty() ? "staged" : a.run_id);
  Pipeline pipeline(config, variant, *provider, issue, snapshot, run_dir);
  auto knowledge = pipeline.load_knowledge();
  if (name == "mine") {
    auto set = pipeline.mine();
    std::cout << set.docs.size() << " document(s)\n";
  } else if (name == "repro") {
    auto art = pipeline.repro(knowledge);
    std::cout << (art ? "repro written" : "no repro") << "\n";
  } else if (name == "localize") {
    auto loc = pipeline.localize(pipeline.plus(knowledge, pipeline.load_repro_artifact()));
    std::cout << loc.files.key_files.size() << " key file(s), " << loc.hunks.hunks.size() << " hunk(s)\n";
  } else if (name == "gen") {
    auto plus = pipeline.plus(knowledge, pipeline.load_repro_artifact());
    auto gen = pipeline.generate(plus, pipeline.load_hunks());
    std::cout << gen.candidates.size() << " candidate(s) from " << gen.completions << " completion(s)\n";
  } else if (name == "validate") {
    auto plus = pipeline.plus(knowledge, pipeline.load_repro_artifact());
    auto candidates = pipeline.load_candidates();
    std::optional<ValidationVerdict> verdict;
    if (pipeline.pipeline_config().enable_code2image && !candidates.empty()) {
      verdict = pipeline.validate(plus, candidates);
    }
    auto rec = pipeline.finish(candidates, verdict, candidates.empty() ? "no_valid_candidates" : "ok");
    std::cout << prediction_line(rec) << "\n";
  }
  pipeline.write_ledger();
  provider->flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("guirepair"));
  CLI::App app{"Multimodal repair pipeline for visual front-end issues"};
  app.require_subcommand(1);
  Args args;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "Run every stage and write a prediction"},
      {"mine", "Select documentation relevant to the issue"},
      {"repro", "Generate reproduction code"},
      {"localize", "Localize suspicious files and hunks"},
      {"gen", "Generate candidate patches"},
      {"validate", "Render, judge and select a patch; write the prediction"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), args);
  CLI11_PARSE(app, argc, argv);
  try {
    return run_command(app.get_subcommands().front()->get_name(), args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
