#include "r2f/errors.hpp"

namespace r2f {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::range: return "range";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::format: return "format";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::schema: return "schema";
    case ErrorKind::reconstruction: return "reconstruction";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::network: return "network";
    case ErrorKind::empty_response: return "empty-response";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::shape: return "shape";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
      kind_(kind),
      message_(message) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument:
    case ErrorKind::range:
    case ErrorKind::precondition:
    case ErrorKind::configuration:
      return 2;
    case ErrorKind::format:
    case ErrorKind::consistency:
    case ErrorKind::schema:
    case ErrorKind::reconstruction:
    case ErrorKind::protocol:
      return 3;
    case ErrorKind::network:
    case ErrorKind::empty_response:
      return 4;
    case ErrorKind::numeric:
    case ErrorKind::divergence:
    case ErrorKind::shape:
      return 5;
  }
  return 1;
}

}  // namespace r2f
