#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace notrade::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kNotConverged = 2, kCheckFailed = 3 };

inline constexpr const char* kVersion = "0.1.0";

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text. Blank lines and lines starting with '#' or ';'
/// are skipped, as are `[section]` headers. Throws ConfigError naming the
/// source and line for anything else.
std::vector<ConfigEntry> parse_config(std::istream& in, const std::string& source);

/// Entry point shared by the executable and the tests. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace notrade::cli
