#include "terrakit/error.hpp"

namespace terrakit {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::parse: return "parse error";
    case Errc::invalid_input: return "invalid input";
    case Errc::kind_mismatch: return "kind mismatch";
    case Errc::degenerate: return "degenerate input";
    case Errc::io: return "i/o error";
  }
  return "error";
}

}  // namespace terrakit
