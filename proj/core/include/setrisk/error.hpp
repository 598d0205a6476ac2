#pragma once

#include <stdexcept>
#include <string>

namespace setrisk {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  parse,
  resolution,
  infeasible,
  refusal,
  unsupported,
  guard_exceeded,
  invariant_breach,
};

const char* errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace setrisk
