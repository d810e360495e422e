#pragma once

#include <functional>
#include <string>
#include <vector>

namespace opml::diag {

using WarningHandler = std::function<void(const std::string&)>;

/// Routes a non-fatal warning to the installed handler (stderr by default).
void warn(const std::string& message);

/// Installs a handler and returns the previous one. Passing an empty
/// function restores the stderr default.
WarningHandler set_warning_handler(WarningHandler handler);

/// RAII capture of warnings, mostly for tests.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace opml::diag
