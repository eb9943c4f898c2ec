#include "qss/experiment.hpp"

#include "qss/json_util.hpp"
#include "qss/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qss {

using nlohmann::ordered_json;

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return WilsonInterval{0.0, 1.0};
  if (successes > trials)
    throw std::invalid_argument("successes cannot exceed trials");
  constexpr double z = 1.959963984540054;  // two-sided 95% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  WilsonInterval w;
  w.low = std::max(0.0, (center - spread) / denom);
  w.high = std::min(1.0, (center + spread) / denom);
  return w;
}

namespace {

ordered_json subset_to_json(const KnowledgeSubset& subset) {
  ordered_json j;
  j["alices"] = subset.alice_indices;
  j["bobs"] = subset.bob_indices;
  j["outcomes"] = subset.bob_n_outcomes;
  return j;
}

KnowledgeSubset subset_from_json(const nlohmann::json& j) {
  detail::require_known_fields(j, {"alices", "bobs", "outcomes"},
                               "knowledge subset");
  KnowledgeSubset subset;
  subset.alice_indices = detail::field_or(j, "alices", subset.alice_indices,
                                          "knowledge subset");
  subset.bob_indices =
      detail::field_or(j, "bobs", subset.bob_indices, "knowledge subset");
  subset.bob_n_outcomes = detail::field_or(j, "outcomes", false,
                                           "knowledge subset");
  return subset;
}

Verdict parse_verdict(const std::string& name) {
  if (name == "accept") return Verdict::Accept;
  if (name == "abort_at_hop") return Verdict::AbortAtHop;
  if (name == "abort_final_check") return Verdict::AbortFinalCheck;
  throw std::invalid_argument("unknown verdict: " + name);
}

CheckStage parse_stage(const std::string& name) {
  if (name == "receive") return CheckStage::Receive;
  if (name == "final_sample") return CheckStage::FinalSample;
  if (name == "group") return CheckStage::Group;
  throw std::invalid_argument("unknown check stage: " + name);
}

}  // namespace

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  using detail::field_or;
  using detail::require_known_fields;
  const char* ctx = "spec";
  require_known_fields(j,
                       {"protocol", "runs", "seed", "sweep", "report_path",
                        "transcript_dir", "secrecy"},
                       ctx);
  ExperimentSpec spec;
  if (j.contains("protocol")) spec.base = config_from_json(j.at("protocol"));
  spec.num_runs = field_or(j, "runs", spec.num_runs, ctx);
  spec.seed_base = field_or(j, "seed", spec.seed_base, ctx);
  spec.report_path = field_or<std::string>(j, "report_path", "", ctx);
  spec.transcript_dir = field_or<std::string>(j, "transcript_dir", "", ctx);
  if (spec.num_runs < 1)
    throw std::invalid_argument("spec: runs must be >= 1");

  if (j.contains("sweep")) {
    const auto& sweep = j.at("sweep");
    if (!sweep.is_array())
      throw std::invalid_argument("spec: field 'sweep' must be a list");
    for (const auto& entry : sweep) {
      require_known_fields(entry, {"field", "values"}, "spec.sweep");
      SweepAxis axis;
      axis.field = field_or<std::string>(entry, "field", "", "spec.sweep");
      if (axis.field.empty())
        throw std::invalid_argument("spec.sweep: every axis needs a field name");
      if (axis.field == "seed")
        throw std::invalid_argument(
            "spec.sweep: seeds are derived per run and cannot be swept");
      if (!entry.contains("values") || !entry.at("values").is_array() ||
          entry.at("values").empty())
        throw std::invalid_argument("spec.sweep: axis '" + axis.field +
                                    "' needs a non-empty value list");
      for (const auto& value : entry.at("values"))
        axis.values.push_back(value);
      spec.sweep.push_back(std::move(axis));
    }
  }

  if (j.contains("secrecy")) {
    const auto& secrecy = j.at("secrecy");
    require_known_fields(secrecy, {"enabled", "subsets"}, "spec.secrecy");
    spec.secrecy.enabled = field_or(secrecy, "enabled", false, "spec.secrecy");
    if (secrecy.contains("subsets")) {
      const auto& subsets = secrecy.at("subsets");
      if (!subsets.is_array())
        throw std::invalid_argument("spec.secrecy: 'subsets' must be a list");
      for (const auto& entry : subsets)
        spec.secrecy.subsets.push_back(subset_from_json(entry));
    }
  }
  return spec;
}

nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec) {
  ordered_json j;
  j["protocol"] = config_to_json(spec.base);
  j["runs"] = spec.num_runs;
  j["seed"] = spec.seed_base;
  ordered_json sweep = ordered_json::array();
  for (const auto& axis : spec.sweep) {
    ordered_json values = ordered_json::array();
    for (const auto& value : axis.values) values.push_back(ordered_json(value));
    sweep.push_back({{"field", axis.field}, {"values", values}});
  }
  j["sweep"] = sweep;
  j["report_path"] = spec.report_path;
  j["transcript_dir"] = spec.transcript_dir;
  ordered_json subsets = ordered_json::array();
  for (const auto& subset : spec.secrecy.subsets)
    subsets.push_back(subset_to_json(subset));
  j["secrecy"] = {{"enabled", spec.secrecy.enabled}, {"subsets", subsets}};
  return j;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("spec file " + path + " is not valid JSON: " +
                                e.what());
  }
  return spec_from_json(j);
}

std::string report_output_path(const ExperimentSpec& spec) {
  if (const char* env = std::getenv("QSS_SIM_REPORT_PATH"); env && *env)
    return env;
  return spec.report_path;
}

std::vector<PreparedConfig> expand_sweep(const ExperimentSpec& spec) {
  const ordered_json base = config_to_json(spec.base);
  std::vector<PreparedConfig> out;
  if (spec.sweep.empty()) {
    PreparedConfig pc;
    pc.overrides = ordered_json::object();
    pc.config = config_from_json(base);
    validate_config(pc.config);
    out.push_back(std::move(pc));
    return out;
  }
  for (const auto& axis : spec.sweep) {
    if (axis.values.empty())
      throw std::invalid_argument("spec.sweep: axis '" + axis.field +
                                  "' has no values");
    if (axis.field == "seed")
      throw std::invalid_argument(
          "spec.sweep: seeds are derived per run and cannot be swept");
  }
  std::vector<std::size_t> counter(spec.sweep.size(), 0);
  for (;;) {
    ordered_json j = base;
    ordered_json overrides = ordered_json::object();
    for (std::size_t i = 0; i < spec.sweep.size(); ++i) {
      j[spec.sweep[i].field] = spec.sweep[i].values[counter[i]];
      overrides[spec.sweep[i].field] = spec.sweep[i].values[counter[i]];
    }
    PreparedConfig pc;
    pc.overrides = std::move(overrides);
    pc.config = config_from_json(j);
    validate_config(pc.config);
    out.push_back(std::move(pc));

    std::size_t i = spec.sweep.size();
    while (i > 0 && ++counter[i - 1] == spec.sweep[i - 1].values.size()) {
      counter[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

namespace {

struct RunSlot {
  RunResult result;
  std::string transcript;
  RunRecord record;
  bool has_record = false;
};

int resolved_jobs(int jobs, std::size_t total) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  return static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(total, 1)));
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec, int jobs) {
  if (spec.num_runs < 1)
    throw std::invalid_argument("spec: runs must be >= 1");
  const std::vector<PreparedConfig> prepared = expand_sweep(spec);
  const bool want_transcripts = !spec.transcript_dir.empty();
  const bool want_secrecy = spec.secrecy.enabled;

  const std::size_t runs = static_cast<std::size_t>(spec.num_runs);
  const std::size_t total = prepared.size() * runs;
  std::vector<RunSlot> slots(total);

  const auto work = [&](std::size_t task) {
    const std::size_t ci = task / runs;
    const std::size_t ri = task % runs;
    RunSlot& slot = slots[task];
    ProtocolConfig config = prepared[ci].config;
    config.seed = derive_run_seed(spec.seed_base, ci, ri);
    config.record_transcript = want_transcripts;
    RunResult& rr = slot.result;
    rr.run_index = static_cast<int>(ri);
    rr.seed = config.seed;
    try {
      ProtocolOutcome out = run_protocol(config);
      rr.verdict = out.verdict;
      rr.abort_party = out.abort_party;
      rr.abort_reason = out.abort_reason;
      rr.checks = out.checks;
      rr.key_length = out.key_positions.size();
      rr.key_agreement = out.key_agreement;
      if (want_transcripts) slot.transcript = out.transcript.text();
      if (want_secrecy && out.verdict == Verdict::Accept) {
        slot.record = std::move(out.record);
        slot.has_record = true;
      }
    } catch (const std::exception& e) {
      rr.failed = true;
      rr.failure = e.what();
    }
  };

  const int workers = resolved_jobs(jobs, total);
  if (workers <= 1) {
    for (std::size_t task = 0; task < total; ++task) work(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t task = next.fetch_add(1);
          if (task >= total) return;
          work(task);
        }
      });
    for (auto& t : pool) t.join();
  }

  ExperimentReport report;
  report.spec = spec;
  report.configs.reserve(prepared.size());
  for (std::size_t ci = 0; ci < prepared.size(); ++ci) {
    ConfigReport cr;
    cr.config_index = ci;
    cr.overrides = prepared[ci].overrides;
    cr.config = prepared[ci].config;
    cr.runs.reserve(runs);
    double key_sum = 0.0;
    for (std::size_t ri = 0; ri < runs; ++ri) {
      const RunSlot& slot = slots[ci * runs + ri];
      const RunResult& rr = slot.result;
      if (rr.failed) {
        ++cr.failures;
      } else {
        switch (rr.verdict) {
          case Verdict::Accept:
            ++cr.accepted;
            key_sum += static_cast<double>(rr.key_length);
            if (!rr.key_agreement) cr.key_agreement_all = false;
            break;
          case Verdict::AbortAtHop:
            ++cr.aborted_at_hop;
            break;
          case Verdict::AbortFinalCheck:
            ++cr.aborted_final;
            break;
        }
      }
      for (const auto& check : rr.checks) {
        auto it = std::find_if(cr.check_totals.begin(), cr.check_totals.end(),
                               [&](const CheckSummary& cs) {
                                 return cs.party == check.party &&
                                        cs.stage == check.stage;
                               });
        if (it == cr.check_totals.end()) {
          CheckSummary cs;
          cs.party = check.party;
          cs.stage = check.stage;
          cr.check_totals.push_back(cs);
          it = std::prev(cr.check_totals.end());
        }
        it->samples += check.sample_count;
        it->usable += check.usable;
        it->errors += check.errors;
      }
      cr.runs.push_back(rr);
    }
    for (auto& cs : cr.check_totals)
      cs.error_rate =
          cs.usable ? static_cast<double>(cs.errors) / static_cast<double>(cs.usable)
                    : 0.0;
    cr.mean_key_length =
        cr.accepted ? key_sum / static_cast<double>(cr.accepted) : 0.0;
    const std::uint64_t completed =
        cr.accepted + cr.aborted_at_hop + cr.aborted_final;
    const std::uint64_t aborts = cr.aborted_at_hop + cr.aborted_final;
    cr.abort_rate =
        completed ? static_cast<double>(aborts) / static_cast<double>(completed)
                  : 0.0;
    cr.abort_ci = wilson_interval(aborts, completed);

    if (want_secrecy) {
      const std::vector<KnowledgeSubset> subsets =
          spec.secrecy.subsets.empty()
              ? all_knowledge_subsets(cr.config.alices, cr.config.bobs)
              : spec.secrecy.subsets;
      for (const auto& subset : subsets) {
        // reject malformed subsets even when every run aborted
        (void)has_full_alice_group(subset, cr.config.alices);
        (void)has_full_bob_group(subset, cr.config.bobs);
        SecrecySummary ss;
        ss.subset = subset;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t ri = 0; ri < runs; ++ri) {
          const RunSlot& slot = slots[ci * runs + ri];
          if (!slot.has_record) continue;
          const SecrecyReport sr = secrecy_check(slot.record, subset);
          lo = std::min(lo, sr.worst_min_entropy);
          hi = std::max(hi, sr.worst_min_entropy);
          ++ss.runs_analyzed;
        }
        if (ss.runs_analyzed) {
          ss.min_entropy = lo;
          ss.max_entropy = hi;
        }
        cr.secrecy.push_back(std::move(ss));
      }
    }
    report.configs.push_back(std::move(cr));
  }

  if (want_transcripts) {
    const std::filesystem::path dir(spec.transcript_dir);
    std::filesystem::create_directories(dir);
    for (std::size_t ci = 0; ci < prepared.size(); ++ci)
      for (std::size_t ri = 0; ri < runs; ++ri) {
        const std::filesystem::path path =
            dir / ("config" + std::to_string(ci) + "_run" + std::to_string(ri) +
                   ".jsonl");
        std::ofstream out(path, std::ios::binary);
        if (!out)
          throw std::runtime_error("cannot write transcript: " + path.string());
        out << slots[ci * runs + ri].transcript;
      }
  }
  return report;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "table") return ReportFormat::Table;
  throw std::invalid_argument("unknown report format: " + std::string(name));
}

namespace {

ordered_json check_to_json(const CheckResult& check) {
  return ordered_json{{"stage", to_string(check.stage)},
                      {"party", to_string(check.party)},
                      {"samples", check.sample_count},
                      {"usable", check.usable},
                      {"errors", check.errors},
                      {"error_rate", check.error_rate},
                      {"multi_photon", check.multi_photon_detected},
                      {"lost", check.lost_signal},
                      {"proceed", check.proceed}};
}

CheckResult check_from_json(const nlohmann::json& j) {
  detail::require_known_fields(j,
                               {"stage", "party", "samples", "usable", "errors",
                                "error_rate", "multi_photon", "lost", "proceed"},
                               "report check");
  CheckResult check;
  check.stage = parse_stage(j.at("stage").get<std::string>());
  check.party = parse_party(j.at("party").get<std::string>());
  check.sample_count = j.at("samples").get<std::size_t>();
  check.usable = j.at("usable").get<std::size_t>();
  check.errors = j.at("errors").get<std::size_t>();
  check.error_rate = j.at("error_rate").get<double>();
  check.multi_photon_detected = j.at("multi_photon").get<bool>();
  check.lost_signal = j.at("lost").get<bool>();
  check.proceed = j.at("proceed").get<bool>();
  return check;
}

ordered_json run_to_json(const RunResult& rr) {
  ordered_json j;
  j["run_index"] = rr.run_index;
  j["seed"] = rr.seed;
  j["verdict"] = to_string(rr.verdict);
  if (rr.abort_party)
    j["abort_party"] = to_string(*rr.abort_party);
  else
    j["abort_party"] = nullptr;
  j["abort_reason"] = rr.abort_reason;
  j["key_length"] = rr.key_length;
  j["key_agreement"] = rr.key_agreement;
  j["failed"] = rr.failed;
  j["failure"] = rr.failure;
  ordered_json checks = ordered_json::array();
  for (const auto& check : rr.checks) checks.push_back(check_to_json(check));
  j["checks"] = checks;
  return j;
}

RunResult run_from_json(const nlohmann::json& j) {
  detail::require_known_fields(
      j,
      {"run_index", "seed", "verdict", "abort_party", "abort_reason",
       "key_length", "key_agreement", "failed", "failure", "checks"},
      "report run");
  RunResult rr;
  rr.run_index = j.at("run_index").get<int>();
  rr.seed = j.at("seed").get<std::uint64_t>();
  rr.verdict = parse_verdict(j.at("verdict").get<std::string>());
  if (!j.at("abort_party").is_null())
    rr.abort_party = parse_party(j.at("abort_party").get<std::string>());
  rr.abort_reason = j.at("abort_reason").get<std::string>();
  rr.key_length = j.at("key_length").get<std::size_t>();
  rr.key_agreement = j.at("key_agreement").get<bool>();
  rr.failed = j.at("failed").get<bool>();
  rr.failure = j.at("failure").get<std::string>();
  for (const auto& check : j.at("checks"))
    rr.checks.push_back(check_from_json(check));
  return rr;
}

ordered_json config_report_to_json(const ConfigReport& cr) {
  ordered_json j;
  j["config_index"] = cr.config_index;
  j["overrides"] = cr.overrides;
  j["config"] = config_to_json(cr.config);
  ordered_json summary;
  summary["accepted"] = cr.accepted;
  summary["abort_at_hop"] = cr.aborted_at_hop;
  summary["abort_final_check"] = cr.aborted_final;
  summary["failures"] = cr.failures;
  summary["key_agreement_all"] = cr.key_agreement_all;
  summary["mean_key_length"] = cr.mean_key_length;
  summary["abort_rate"] = cr.abort_rate;
  summary["abort_ci"] =
      ordered_json{{"low", cr.abort_ci.low}, {"high", cr.abort_ci.high}};
  ordered_json totals = ordered_json::array();
  for (const auto& cs : cr.check_totals)
    totals.push_back(ordered_json{{"party", to_string(cs.party)},
                                  {"stage", to_string(cs.stage)},
                                  {"samples", cs.samples},
                                  {"usable", cs.usable},
                                  {"errors", cs.errors},
                                  {"error_rate", cs.error_rate}});
  summary["check_totals"] = totals;
  ordered_json secrecy = ordered_json::array();
  for (const auto& ss : cr.secrecy)
    secrecy.push_back(ordered_json{{"subset", subset_to_json(ss.subset)},
                                   {"runs_analyzed", ss.runs_analyzed},
                                   {"min_entropy", ss.min_entropy},
                                   {"max_entropy", ss.max_entropy}});
  summary["secrecy"] = secrecy;
  j["summary"] = summary;
  ordered_json runs = ordered_json::array();
  for (const auto& rr : cr.runs) runs.push_back(run_to_json(rr));
  j["runs"] = runs;
  return j;
}

ConfigReport config_report_from_json(const nlohmann::ordered_json& j) {
  detail::require_known_fields(
      j, {"config_index", "overrides", "config", "summary", "runs"},
      "report config");
  ConfigReport cr;
  cr.config_index = j.at("config_index").get<std::size_t>();
  cr.overrides = j.at("overrides");
  cr.config = config_from_json(j.at("config"));
  const auto& summary = j.at("summary");
  detail::require_known_fields(
      summary,
      {"accepted", "abort_at_hop", "abort_final_check", "failures",
       "key_agreement_all", "mean_key_length", "abort_rate", "abort_ci",
       "check_totals", "secrecy"},
      "report summary");
  cr.accepted = summary.at("accepted").get<std::uint64_t>();
  cr.aborted_at_hop = summary.at("abort_at_hop").get<std::uint64_t>();
  cr.aborted_final = summary.at("abort_final_check").get<std::uint64_t>();
  cr.failures = summary.at("failures").get<std::uint64_t>();
  cr.key_agreement_all = summary.at("key_agreement_all").get<bool>();
  cr.mean_key_length = summary.at("mean_key_length").get<double>();
  cr.abort_rate = summary.at("abort_rate").get<double>();
  cr.abort_ci.low = summary.at("abort_ci").at("low").get<double>();
  cr.abort_ci.high = summary.at("abort_ci").at("high").get<double>();
  for (const auto& entry : summary.at("check_totals")) {
    CheckSummary cs;
    cs.party = parse_party(entry.at("party").get<std::string>());
    cs.stage = parse_stage(entry.at("stage").get<std::string>());
    cs.samples = entry.at("samples").get<std::uint64_t>();
    cs.usable = entry.at("usable").get<std::uint64_t>();
    cs.errors = entry.at("errors").get<std::uint64_t>();
    cs.error_rate = entry.at("error_rate").get<double>();
    cr.check_totals.push_back(cs);
  }
  for (const auto& entry : summary.at("secrecy")) {
    SecrecySummary ss;
    ss.subset = subset_from_json(entry.at("subset"));
    ss.runs_analyzed = entry.at("runs_analyzed").get<std::uint64_t>();
    ss.min_entropy = entry.at("min_entropy").get<double>();
    ss.max_entropy = entry.at("max_entropy").get<double>();
    cr.secrecy.push_back(std::move(ss));
  }
  for (const auto& entry : j.at("runs")) cr.runs.push_back(run_from_json(entry));
  return cr;
}

std::string format_double(double v) {
  std::ostringstream oss;
  oss << v;
  return oss.str();
}

std::string subset_label(const KnowledgeSubset& subset) {
  std::ostringstream oss;
  oss << "alices=[";
  for (std::size_t i = 0; i < subset.alice_indices.size(); ++i)
    oss << (i ? "," : "") << subset.alice_indices[i];
  oss << "] bobs=[";
  for (std::size_t i = 0; i < subset.bob_indices.size(); ++i)
    oss << (i ? "," : "") << subset.bob_indices[i];
  oss << "] outcomes=" << (subset.bob_n_outcomes ? "yes" : "no");
  return oss.str();
}

std::string emit_table(const ExperimentReport& report) {
  std::ostringstream oss;
  oss << std::left << std::setw(8) << "config" << std::setw(7) << "runs"
      << std::setw(10) << "accepted" << std::setw(11) << "abort_hop"
      << std::setw(13) << "abort_final" << std::setw(8) << "failed"
      << std::setw(12) << "abort_rate" << std::setw(10) << "ci_low"
      << std::setw(10) << "ci_high" << std::setw(10) << "mean_key"
      << std::setw(11) << "agreement" << "overrides" << "\n";
  for (const auto& cr : report.configs) {
    oss << std::left << std::setw(8) << cr.config_index << std::setw(7)
        << cr.runs.size() << std::setw(10) << cr.accepted << std::setw(11)
        << cr.aborted_at_hop << std::setw(13) << cr.aborted_final
        << std::setw(8) << cr.failures << std::setw(12)
        << format_double(cr.abort_rate) << std::setw(10)
        << format_double(cr.abort_ci.low) << std::setw(10)
        << format_double(cr.abort_ci.high) << std::setw(10)
        << format_double(cr.mean_key_length) << std::setw(11)
        << (cr.accepted ? (cr.key_agreement_all ? "yes" : "NO") : "-")
        << cr.overrides.dump() << "\n";
    for (const auto& ss : cr.secrecy)
      oss << "  secrecy " << subset_label(ss.subset) << " runs="
          << ss.runs_analyzed << " min=" << format_double(ss.min_entropy)
          << " max=" << format_double(ss.max_entropy) << "\n";
  }
  return oss.str();
}

}  // namespace

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::Table) return emit_table(report);
  ordered_json j;
  j["spec"] = spec_to_json(report.spec);
  ordered_json configs = ordered_json::array();
  for (const auto& cr : report.configs)
    configs.push_back(config_report_to_json(cr));
  j["configs"] = configs;
  return j.dump(2) + "\n";
}

ExperimentReport parse_report(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report is not valid JSON: ") +
                                e.what());
  }
  try {
    detail::require_known_fields(j, {"spec", "configs"}, "report");
    ExperimentReport report;
    report.spec = spec_from_json(j.at("spec"));
    for (const auto& entry : j.at("configs"))
      report.configs.push_back(config_report_from_json(entry));
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("report is malformed: ") + e.what());
  }
}

}  // namespace qss
