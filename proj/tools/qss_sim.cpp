#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qss/experiment.hpp"
#include "qss/protocol.hpp"

// exit codes: 0 success, 1 correctness failure, 2 usage or config error

namespace {

int do_run(const std::string& spec_path, std::optional<std::uint64_t> seed,
           std::optional<int> runs, int jobs, const std::string& format,
           const std::string& report_flag, const std::string& transcript_flag) {
  qss::ExperimentSpec spec = qss::load_spec(spec_path);
  if (seed) spec.seed_base = *seed;
  if (runs) spec.num_runs = *runs;
  if (!report_flag.empty()) spec.report_path = report_flag;
  if (!transcript_flag.empty()) spec.transcript_dir = transcript_flag;

  const qss::ExperimentReport report = qss::run_experiment(spec, jobs);
  const std::string text =
      qss::emit_report(report, qss::parse_report_format(format));
  const std::string dest = qss::report_output_path(spec);
  if (dest.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(dest, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + dest);
    out << text;
    std::cout << "report written: " << dest << "\n";
  }

  for (const auto& cr : report.configs)
    if (!cr.key_agreement_all || cr.failures > 0) {
      std::cerr << "correctness failure in config " << cr.config_index
                << (cr.failures ? ": runs failed" : ": key disagreement")
                << "\n";
      return 1;
    }
  return 0;
}

int do_validate(const std::string& spec_path) {
  const qss::ExperimentSpec spec = qss::load_spec(spec_path);
  const auto prepared = qss::expand_sweep(spec);
  for (std::size_t i = 0; i < prepared.size(); ++i)
    std::cout << "config " << i << " " << prepared[i].overrides.dump()
              << " predicted_key_length="
              << qss::predicted_key_length(prepared[i].config) << "\n";
  std::cout << "ok: " << prepared.size() << " config(s), " << spec.num_runs
            << " run(s) each\n";
  return 0;
}

int do_replay(const std::string& transcript_path) {
  std::ifstream in(transcript_path, std::ios::binary);
  if (!in)
    throw std::invalid_argument("cannot open transcript: " + transcript_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const qss::ReplayResult result = qss::replay_transcript(buffer.str());
  if (result.identical) {
    std::cout << "replay identical: " << result.logged_lines << " lines\n";
    return 0;
  }
  std::cout << "replay diverged at line " << (*result.first_divergence + 1)
            << " (logged " << result.logged_lines << " lines, replayed "
            << result.replayed_lines << ")\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator for multiparty-to-multiparty quantum secret sharing"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string transcript_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  int jobs = 1;
  std::string format = "json";
  std::string report_flag;
  std::string transcript_flag;

  auto* run_cmd =
      app.add_subcommand("run", "execute the configured runs and report");
  run_cmd->add_option("spec", spec_path, "experiment spec (JSON)")->required();
  run_cmd->add_option("--seed", seed, "override the spec's base seed");
  run_cmd->add_option("--runs", runs, "override the runs per config");
  run_cmd->add_option("--jobs", jobs,
                      "worker threads; 0 picks the hardware concurrency");
  run_cmd->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "table"}));
  run_cmd->add_option("--report", report_flag,
                      "report destination (empty: stdout; the "
                      "QSS_SIM_REPORT_PATH variable overrides both)");
  run_cmd->add_option("--transcript-dir", transcript_flag,
                      "write one transcript per run into this directory");

  auto* validate_cmd =
      app.add_subcommand("validate", "check a spec without running anything");
  validate_cmd->add_option("spec", spec_path, "experiment spec (JSON)")
      ->required();

  auto* replay_cmd = app.add_subcommand(
      "replay", "re-execute a transcript and compare byte for byte");
  replay_cmd->add_option("transcript", transcript_path, "transcript (JSONL)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed())
      return do_run(spec_path, seed, runs, jobs, format, report_flag,
                    transcript_flag);
    if (validate_cmd->parsed()) return do_validate(spec_path);
    return do_replay(transcript_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
