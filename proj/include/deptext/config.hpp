#ifndef DEPTEXT_CONFIG_HPP
#define DEPTEXT_CONFIG_HPP

#include <filesystem>
#include <string_view>

#include <nlohmann/json.hpp>

namespace deptext {

/// Parses the sectioned key/value config format into a JSON object.
///
///   # comment
///   [section]
///   key = "string" | 12 | 0.5 | 1e-4 | true | ["a", "b"]
///
/// Keys before the first section land at the top level. Throws ConfigError
/// with the offending line number.
nlohmann::json parse_kv_config(std::string_view text);

/// Files ending in .json are read as JSON, everything else as key/value.
nlohmann::json load_config_file(const std::filesystem::path& path);

}  // namespace deptext

#endif  // DEPTEXT_CONFIG_HPP
