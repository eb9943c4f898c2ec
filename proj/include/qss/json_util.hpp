#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace qss::detail {

inline void require_known_fields(const nlohmann::json& j,
                                 std::initializer_list<const char*> allowed,
                                 const char* context) {
  if (!j.is_object())
    throw std::invalid_argument(std::string(context) + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (item.key() == name) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument(std::string(context) + ": unknown field '" +
                                  item.key() + "'");
  }
}

template <typename T>
T field_or(const nlohmann::json& j, const char* key, T fallback,
           const char* context) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string(context) + ": field '" + key +
                                "' has the wrong type");
  }
}

}  // namespace qss::detail
