#pragma once

#include <stdexcept>
#include <string>

namespace fleetcarbon {

/// Error tied to a location in an input file. `line` is 1-based; 0 means the
/// error concerns the file as a whole.
class LocatedError : public std::runtime_error {
 public:
  LocatedError(std::string file, int line, std::string reason)
      : std::runtime_error(format(file, line, reason)),
        file_(std::move(file)),
        line_(line),
        reason_(std::move(reason)) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  static std::string format(const std::string& file, int line,
                            const std::string& reason) {
    std::string out = file.empty() ? std::string("<input>") : file;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + reason;
  }

  std::string file_;
  int line_;
  std::string reason_;
};

/// Bad fleet or overlay data (CLI exit code 1).
class InputError : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

/// Bad factor table, device catalog, or CLI configuration (CLI exit code 2).
class ConfigError : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

}  // namespace fleetcarbon
