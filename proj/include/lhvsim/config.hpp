#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace lhvsim::cli {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

// Keys accepted both as `--key` flags and as `key = value` lines.
bool is_known_key(std::string_view key) noexcept;

// Parses `key = value` lines; blank lines and lines starting with `#` are
// skipped. Throws ParseError (with line number) or UnknownKey.
std::map<std::string, ConfigEntry> parse_config(std::string_view text);
std::map<std::string, ConfigEntry> load_config(const std::filesystem::path& path);

}  // namespace lhvsim::cli
