#include "opml/diag.hpp"

#include <iostream>
#include <mutex>

namespace opml::diag {
namespace {

std::mutex g_mutex;
WarningHandler g_handler;

}  // namespace

void warn(const std::string& message) {
  std::lock_guard lock(g_mutex);
  if (g_handler) {
    g_handler(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_mutex);
  auto previous = std::move(g_handler);
  g_handler = std::move(handler);
  return previous;
}

ScopedWarningCapture::ScopedWarningCapture()
    : previous_(set_warning_handler(
          [this](const std::string& m) { messages_.push_back(m); })) {}

ScopedWarningCapture::~ScopedWarningCapture() {
  set_warning_handler(std::move(previous_));
}

}  // namespace opml::diag
