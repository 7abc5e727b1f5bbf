#pragma once

#include <stdexcept>
#include <string>

namespace uwave {

enum class Errc {
  Parameter,
  Parse,
  Identity,
  Domain,
  Degenerate,
  Anchor,
  UnsupportedTail,
  Divergent,
  Unsolvable,
  IllConditioned,
  Io,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the core carries one of the codes above; the C
// layer maps them one-to-one onto uwave_status values.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace uwave
