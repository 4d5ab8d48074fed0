#pragma once

#include <stdexcept>
#include <string>

namespace tourpow {

enum class ErrorKind {
  input,       // malformed or out-of-range arguments
  domain,      // mathematical precondition violated
  infeasible,  // strict-mode size preconditions cannot be met (or oracle budget exceeded)
  not_found,   // a constructive search gave up
  internal,    // a postcondition failed: always a bug
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::input: return "input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InputError : Error {
  explicit InputError(const std::string& w) : Error(ErrorKind::input, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct InfeasibleError : Error {
  explicit InfeasibleError(const std::string& w) : Error(ErrorKind::infeasible, w) {}
};
struct NotFoundError : Error {
  explicit NotFoundError(const std::string& w) : Error(ErrorKind::not_found, w) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::internal, w) {}
};

}  // namespace tourpow
