#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qss/protocol.hpp"
#include "qss/secrecy.hpp"

namespace qss {

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
  bool operator==(const WilsonInterval&) const = default;
};

// 95% score interval; degenerate [0, 1] when trials == 0
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

// One swept field: the cartesian product over all axes produces the config
// list, first axis slowest. Values go through the same JSON loader as the
// base config, so a sweep can retarget any config field except the seed.
struct SweepAxis {
  std::string field;
  std::vector<nlohmann::json> values;
  bool operator==(const SweepAxis&) const = default;
};

struct SecrecyAnalysisSpec {
  bool enabled = false;
  // empty means every coalition of the configured group sizes
  std::vector<KnowledgeSubset> subsets;
  bool operator==(const SecrecyAnalysisSpec&) const = default;
};

struct ExperimentSpec {
  ProtocolConfig base;
  int num_runs = 1;
  std::uint64_t seed_base = 0;
  std::vector<SweepAxis> sweep;
  std::string report_path;     // empty: stdout only
  std::string transcript_dir;  // empty: transcripts are not written
  SecrecyAnalysisSpec secrecy;
  bool operator==(const ExperimentSpec&) const = default;
};

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec load_spec(const std::string& path);

// one materialized point of the sweep grid
struct PreparedConfig {
  nlohmann::ordered_json overrides;  // field -> value this point received
  ProtocolConfig config;
  bool operator==(const PreparedConfig&) const = default;
};

// Materializes and validates the full config list; throws on any invalid
// combination so a spec can be rejected before anything runs.
std::vector<PreparedConfig> expand_sweep(const ExperimentSpec& spec);

// QSS_SIM_REPORT_PATH overrides the spec's report path when set
std::string report_output_path(const ExperimentSpec& spec);

struct RunResult {
  int run_index = 0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::Accept;
  std::optional<PartyId> abort_party;
  std::string abort_reason;
  std::vector<CheckResult> checks;
  std::size_t key_length = 0;
  bool key_agreement = false;
  bool failed = false;  // the run threw instead of finishing
  std::string failure;
  bool operator==(const RunResult&) const = default;
};

// pooled totals for one checkpoint across every run of a config
struct CheckSummary {
  PartyId party;
  CheckStage stage = CheckStage::Receive;
  std::uint64_t samples = 0;
  std::uint64_t usable = 0;
  std::uint64_t errors = 0;
  double error_rate = 0.0;
  bool operator==(const CheckSummary&) const = default;
};

struct SecrecySummary {
  KnowledgeSubset subset;
  std::uint64_t runs_analyzed = 0;
  // worst-position min-entropy, extremes over the accepted runs
  double min_entropy = 0.0;
  double max_entropy = 0.0;
  bool operator==(const SecrecySummary&) const = default;
};

struct ConfigReport {
  std::size_t config_index = 0;
  nlohmann::ordered_json overrides;  // sweep values this config received
  ProtocolConfig config;
  std::vector<RunResult> runs;
  std::uint64_t accepted = 0;
  std::uint64_t aborted_at_hop = 0;
  std::uint64_t aborted_final = 0;
  std::uint64_t failures = 0;
  bool key_agreement_all = true;  // over accepted runs
  double mean_key_length = 0.0;   // over accepted runs
  double abort_rate = 0.0;        // over completed runs
  WilsonInterval abort_ci;
  std::vector<CheckSummary> check_totals;
  std::vector<SecrecySummary> secrecy;
  bool operator==(const ConfigReport&) const = default;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<ConfigReport> configs;
  bool operator==(const ExperimentReport&) const = default;
};

// Runs every (config, run) pair; run seeds derive from (seed_base,
// config_index, run_index), so the report content does not depend on jobs.
// jobs <= 0 picks the hardware concurrency.
ExperimentReport run_experiment(const ExperimentSpec& spec, int jobs = 1);

enum class ReportFormat : std::uint8_t { Json = 0, Table };
ReportFormat parse_report_format(std::string_view name);

// stable output: no timestamps, fixed field order
std::string emit_report(const ExperimentReport& report, ReportFormat format);
// inverse of emit_report for the JSON format
ExperimentReport parse_report(const std::string& text);

}  // namespace qss
