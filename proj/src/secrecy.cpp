#include "qss/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace qss {

namespace {

std::vector<int> normalized(std::vector<int> indices, int upper,
                            const char* what) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  for (const int i : indices)
    if (i < 1 || i > upper)
      throw std::invalid_argument(std::string(what) +
                                  ": party index outside the group");
  return indices;
}

}  // namespace

bool has_full_alice_group(const KnowledgeSubset& subset, int alices) {
  const auto idx = normalized(subset.alice_indices, alices, "knowledge");
  return static_cast<int>(idx.size()) == alices;
}

bool has_full_bob_group(const KnowledgeSubset& subset, int bobs) {
  if (!subset.bob_n_outcomes) return false;
  const auto idx = normalized(subset.bob_indices, bobs - 1, "knowledge");
  return static_cast<int>(idx.size()) == bobs - 1;
}

SecrecyReport secrecy_check(const RunRecord& record,
                            const KnowledgeSubset& subset) {
  const ProtocolConfig& config = record.config;
  const int m = config.alices;
  const int n = config.bobs;
  const std::size_t encoder_count = static_cast<std::size_t>(m + n - 1);
  if (record.encoders.size() != encoder_count)
    throw std::invalid_argument(
        "record does not carry every encoder secret; the run must have finished");
  if (record.key_positions.empty())
    throw std::invalid_argument("record holds no key positions");

  SecrecyReport report;
  report.subset.alice_indices = normalized(subset.alice_indices, m, "knowledge");
  report.subset.bob_indices = normalized(subset.bob_indices, n - 1, "knowledge");
  report.subset.bob_n_outcomes = subset.bob_n_outcomes;

  std::vector<bool> known(encoder_count, false);
  for (const int i : report.subset.alice_indices)
    known[static_cast<std::size_t>(i - 1)] = true;
  for (const int j : report.subset.bob_indices)
    known[static_cast<std::size_t>(m + j - 1)] = true;

  std::unordered_map<std::size_t, const MeasuredQubit*> outcome_at;
  if (report.subset.bob_n_outcomes) {
    outcome_at.reserve(record.measured.size());
    for (const auto& mq : record.measured) outcome_at[mq.origin] = &mq;
  }

  std::vector<std::size_t> unknown;
  for (std::size_t e = 0; e < encoder_count; ++e)
    if (!known[e]) unknown.push_back(e);

  report.positions.reserve(record.key_positions.size());
  report.worst_min_entropy = std::numeric_limits<double>::infinity();

  std::vector<std::uint8_t> ops(encoder_count, 0);
  std::vector<std::uint8_t> digits(unknown.size(), 0);
  for (const std::size_t pos : record.key_positions) {
    const MeasuredQubit* observed = nullptr;
    if (report.subset.bob_n_outcomes) {
      const auto it = outcome_at.find(pos);
      if (it == outcome_at.end())
        throw std::invalid_argument("no measurement recorded for a key position");
      observed = it->second;
    }

    for (std::size_t e = 0; e < encoder_count; ++e)
      ops[e] = record.encoders[e].op_string[pos];

    std::uint64_t counts[2] = {0, 0};
    std::fill(digits.begin(), digits.end(), std::uint8_t{0});
    while (true) {
      for (std::size_t u = 0; u < unknown.size(); ++u)
        ops[unknown[u]] = digits[u];

      // key bit: the senders' composite value at this position
      StateLabel label{ops[0], record.encoders[0].had_string[pos]};
      for (std::size_t e = 1; e < static_cast<std::size_t>(m); ++e)
        label = label_shift(label, ops[e], record.encoders[e].had_string[pos]);
      const std::uint8_t key_bit = label.value_bit;

      bool consistent = true;
      if (observed) {
        StateLabel full = label;
        for (std::size_t e = static_cast<std::size_t>(m); e < encoder_count; ++e)
          full = label_shift(full, ops[e], record.encoders[e].had_string[pos]);
        consistent = (full.value_bit == static_cast<std::uint8_t>(observed->outcome));
      }
      if (consistent) ++counts[key_bit];

      // mixed-radix increment; the first sender draws from {0,1}
      std::size_t u = 0;
      for (; u < unknown.size(); ++u) {
        const std::uint8_t radix = unknown[u] == 0 ? 2 : 4;
        if (++digits[u] < radix) break;
        digits[u] = 0;
      }
      if (u == unknown.size()) break;
    }

    const double total = static_cast<double>(counts[0] + counts[1]);
    PositionSecrecy ps;
    ps.position = pos;
    ps.p_zero = static_cast<double>(counts[0]) / total;
    ps.p_one = static_cast<double>(counts[1]) / total;
    const double best_guess = std::max(ps.p_zero, ps.p_one);
    ps.min_entropy_bits = best_guess >= 1.0 ? 0.0 : -std::log2(best_guess);
    report.worst_min_entropy =
        std::min(report.worst_min_entropy, ps.min_entropy_bits);
    report.positions.push_back(ps);
  }
  return report;
}

std::vector<KnowledgeSubset> all_knowledge_subsets(int alices, int bobs) {
  if (alices < 2 || bobs < 2)
    throw std::invalid_argument("both groups need at least 2 members");
  std::vector<KnowledgeSubset> out;
  const unsigned alice_masks = 1u << alices;
  const unsigned bob_masks = 1u << (bobs - 1);
  out.reserve(static_cast<std::size_t>(alice_masks) * bob_masks * 2);
  for (unsigned am = 0; am < alice_masks; ++am)
    for (unsigned bm = 0; bm < bob_masks; ++bm)
      for (int outcomes = 0; outcomes < 2; ++outcomes) {
        KnowledgeSubset subset;
        for (int i = 0; i < alices; ++i)
          if (am & (1u << i)) subset.alice_indices.push_back(i + 1);
        for (int j = 0; j < bobs - 1; ++j)
          if (bm & (1u << j)) subset.bob_indices.push_back(j + 1);
        subset.bob_n_outcomes = (outcomes == 1);
        out.push_back(std::move(subset));
      }
  return out;
}

}  // namespace qss
