#pragma once

#include <stdexcept>
#include <string>

namespace transteg {

/// Broad failure class; the CLI maps each to a distinct exit code.
enum class ErrorKind {
  usage,      // bad flags or config keys
  input,      // unreadable or malformed input files
  format,     // well-formed container, unsupported content
  invariant,  // a pipeline contract was violated at run time
  io,         // write failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace transteg
