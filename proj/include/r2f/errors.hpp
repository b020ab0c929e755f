#pragma once

#include <stdexcept>
#include <string>

namespace r2f {

// One error taxonomy for the whole library. The CLI maps kinds onto its
// documented exit codes; library callers can switch on kind().
enum class ErrorKind {
  argument,
  range,
  precondition,
  configuration,
  format,
  consistency,
  schema,
  reconstruction,
  protocol,
  network,
  empty_response,
  numeric,
  divergence,
  shape,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const { return kind_; }
  // The message without the "<kind> error: " prefix that what() carries.
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

// Exit codes: 2 bad invocation, 3 malformed content, 4 transport, 5 numeric.
int exit_code_for(ErrorKind kind);

}  // namespace r2f
