#pragma once

#include <stdexcept>
#include <string>

namespace terrakit {

/// Broad failure category, so callers (and the CLI) can react without parsing messages.
enum class Errc {
  parse,           ///< malformed input text (JSON, ASCII grid, CSV, config)
  invalid_input,   ///< well-formed but violates a precondition
  kind_mismatch,   ///< vector layer geometry differs from the requested layer kind
  degenerate,      ///< geometry/data too degenerate to process (collinear, empty, zero area)
  io,              ///< file could not be opened, read or written
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace terrakit
