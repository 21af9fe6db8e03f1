#include "lhvsim/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "lhvsim/errors.hpp"

namespace lhvsim::cli {

namespace {

constexpr std::array<std::string_view, 15> kKeys = {
    "seed",      "pairs",      "decoherence", "threshold", "beta-deg",
    "alpha-deg", "alpha-step-deg", "angles-deg", "metric",  "d-steps",
    "t-steps",   "out",        "threads",     "quad-tol",  "quad-max-subdivisions"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

bool is_known_key(std::string_view key) noexcept {
  return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

std::map<std::string, ConfigEntry> parse_config(std::string_view text) {
  std::map<std::string, ConfigEntry> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(line_no, "missing key before '='");
    if (key == "config") throw ParseError(line_no, "config files cannot include other config files");
    if (!is_known_key(key)) throw UnknownKey(line_no, key);
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    if (out.contains(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    out.emplace(key, ConfigEntry{value, line_no});
  }
  return out;
}

std::map<std::string, ConfigEntry> load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace lhvsim::cli
