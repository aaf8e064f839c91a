#ifndef VOWELKIT_LOG_HPP
#define VOWELKIT_LOG_HPP

#include <string_view>

namespace vowelkit {

// Warnings go to stderr unless silenced (tests silence them).
void log_warning(std::string_view message);
void set_warnings_enabled(bool enabled);

}  // namespace vowelkit

#endif  // VOWELKIT_LOG_HPP
