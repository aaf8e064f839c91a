#include "vowelkit/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

#include "vowelkit/error.hpp"

namespace vowelkit {

namespace {
std::atomic<bool> g_warnings_enabled{true};
std::mutex g_log_mutex;
}  // namespace

void log_warning(std::string_view message) {
  if (!g_warnings_enabled.load(std::memory_order_relaxed)) return;
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings_enabled.store(enabled); }

const char* to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::not_found: return "not found";
    case Errc::malformed: return "malformed input";
    case Errc::unsupported: return "unsupported";
    case Errc::io: return "i/o error";
    case Errc::empty_signal: return "empty signal";
    case Errc::no_voiced_content: return "no voiced content";
    case Errc::silent_frame: return "silent frame";
    case Errc::unstable_model: return "unstable model";
    case Errc::formants_not_found: return "formants not found";
    case Errc::insufficient_data: return "insufficient data";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::numeric: return "numeric failure";
  }
  return "unknown";
}

}  // namespace vowelkit
