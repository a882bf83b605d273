#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace platelab {

/// Broad failure classes; the CLI maps them to exit codes.
enum class ErrorKind {
  Config,         ///< malformed or inconsistent configuration
  Index,          ///< exponent / index relation violated
  Representation, ///< field in the wrong representation
  Domain,         ///< argument outside an operation's precondition
  Certification,  ///< numerical check failed its threshold
  Convergence,    ///< iteration or subdivision limit reached
  Resource        ///< box, grid or time budget insufficient
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w), messages{w} {}
  /// Every problem found, not just the first.
  explicit ConfigError(const std::vector<std::string>& all) : Error(ErrorKind::Config, join(all)), messages(all) {}
  std::vector<std::string> messages;

private:
  static std::string join(const std::vector<std::string>& all) {
    std::string out;
    for (const auto& m : all) out += (out.empty() ? "" : "; ") + m;
    return out;
  }
};
struct IndexError : Error {
  explicit IndexError(const std::string& w) : Error(ErrorKind::Index, w) {}
};
struct RepresentationError : Error {
  explicit RepresentationError(const std::string& w) : Error(ErrorKind::Representation, w) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};
struct CertificationError : Error {
  explicit CertificationError(const std::string& w) : Error(ErrorKind::Certification, w) {}
};
struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& w) : Error(ErrorKind::Convergence, w) {}
};
struct ResourceError : Error {
  explicit ResourceError(const std::string& w) : Error(ErrorKind::Resource, w) {}
};

} // namespace platelab
