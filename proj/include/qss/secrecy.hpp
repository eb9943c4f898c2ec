#pragma once

#include <cstddef>
#include <vector>

#include "qss/protocol.hpp"

namespace qss {

// What an adversarial coalition holds after a finished run: some parties'
// private operation strings, and optionally the last receiver's measurement
// record. Basis strings are always treated as public, since the protocol
// announces every one of them before the final measurement.
struct KnowledgeSubset {
  std::vector<int> alice_indices;  // 1-based senders whose secrets are held
  std::vector<int> bob_indices;    // 1-based receivers 1..n-1 whose secrets are held
  bool bob_n_outcomes = false;     // last receiver's outcomes are held
  bool operator==(const KnowledgeSubset&) const = default;
};

// the senders' composite alone determines the key
bool has_full_alice_group(const KnowledgeSubset& subset, int alices);
// all re-encoding receivers plus the final outcomes invert to the key
bool has_full_bob_group(const KnowledgeSubset& subset, int bobs);

struct PositionSecrecy {
  std::size_t position = 0;
  double p_zero = 0.0;
  double p_one = 0.0;
  double min_entropy_bits = 0.0;
  bool operator==(const PositionSecrecy&) const = default;
};

struct SecrecyReport {
  KnowledgeSubset subset;
  std::vector<PositionSecrecy> positions;
  double worst_min_entropy = 0.0;  // minimum over positions
  bool operator==(const SecrecyReport&) const = default;
};

// Exact posterior of each key bit given the coalition's knowledge, by
// exhaustive enumeration of the missing operation symbols (first sender
// draws from {0,1}, everyone else from {0..3}), with the final outcomes
// applied as a consistency filter when held. Positions factorize, so the
// enumeration runs per position.
SecrecyReport secrecy_check(const RunRecord& record,
                            const KnowledgeSubset& subset);

// Every coalition: each sender subset x each re-encoding receiver subset x
// outcomes held or not.
std::vector<KnowledgeSubset> all_knowledge_subsets(int alices, int bobs);

}  // namespace qss
