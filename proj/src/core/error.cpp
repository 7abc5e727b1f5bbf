#include "core/error.hpp"

namespace uwave {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::Parameter: return "parameter";
    case Errc::Parse: return "parse";
    case Errc::Identity: return "identity";
    case Errc::Domain: return "domain";
    case Errc::Degenerate: return "degenerate";
    case Errc::Anchor: return "anchor";
    case Errc::UnsupportedTail: return "unsupported-tail";
    case Errc::Divergent: return "divergent";
    case Errc::Unsolvable: return "unsolvable";
    case Errc::IllConditioned: return "ill-conditioned";
    case Errc::Io: return "io";
  }
  return "unknown";
}

}  // namespace uwave
