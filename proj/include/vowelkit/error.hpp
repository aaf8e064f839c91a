#ifndef VOWELKIT_ERROR_HPP
#define VOWELKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vowelkit {

enum class Errc {
  invalid_argument,
  not_found,          // missing file
  malformed,          // bad container / CSV structure
  unsupported,        // valid container, unsupported encoding
  io,                 // read/write failure
  empty_signal,
  no_voiced_content,
  silent_frame,
  unstable_model,
  formants_not_found,
  insufficient_data,
  dimension_mismatch,
  numeric,            // internal numeric failure (non-convergence etc.)
};

const char* to_string(Errc code);

// All library failures are reported through this exception; code() lets
// callers (the CLI in particular) distinguish data errors from bugs.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vowelkit

#endif  // VOWELKIT_ERROR_HPP
