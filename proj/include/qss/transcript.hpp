#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qss {

// Replayable run log: one serialized event object per line, in execution
// order. Two runs with the same configuration produce byte-identical logs;
// recording is pure observation and never consumes randomness.
class Transcript {
 public:
  void emit(const nlohmann::ordered_json& event) {
    lines_.push_back(event.dump());
  }

  const std::vector<std::string>& lines() const { return lines_; }

  std::string text() const {
    std::string out;
    for (const auto& line : lines_) {
      out += line;
      out += '\n';
    }
    return out;
  }

  bool empty() const { return lines_.empty(); }

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<std::string> lines_;
};

}  // namespace qss
