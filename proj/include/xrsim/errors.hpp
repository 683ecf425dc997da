#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace xrsim {

/// Invalid user-supplied configuration. Carries the offending keys when known.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what, std::vector<std::string> keys = {})
      : std::runtime_error(what), keys_(std::move(keys)) {}

  const std::vector<std::string>& keys() const { return keys_; }

private:
  std::vector<std::string> keys_;
};

/// A simulation-internal invariant was broken (a bug, not bad input).
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Emits a warning to stderr once per distinct key for the process lifetime.
void warn_once(const std::string& key, const std::string& message);

}  // namespace xrsim
