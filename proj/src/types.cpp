#include "mbf/types.hpp"

#include <algorithm>
#include <cctype>

namespace mbf {

std::string to_string(Model model) {
  return model == Model::kCam ? "cam" : "cum";
}

Model parse_model(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "cam") return Model::kCam;
  if (lower == "cum") return Model::kCum;
  throw ConfigError("unknown model '" + text + "' (expected cam or cum)");
}

std::string to_string(ProcessId id) {
  return (id.is_server() ? "s" : "c") + std::to_string(id.index);
}

std::string to_string(const ValueEntry& entry) {
  return "<" + std::to_string(entry.value) + "," + std::to_string(entry.sn) + ">";
}

}  // namespace mbf
