#ifndef KMSLAB_ERRORS_HPP
#define KMSLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kmslab {

// Base for all domain errors; CLI maps these to exit code 1.
struct Error : std::runtime_error {
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Input documents that do not match a published schema; exit code 2.
struct SchemaError : Error {
  explicit SchemaError(const std::string &msg) : Error(msg) {}
};

struct MalformedGroupoid : Error {
  explicit MalformedGroupoid(const std::string &msg) : Error("malformed groupoid: " + msg) {}
};

struct MissingComposite : Error {
  explicit MissingComposite(const std::string &msg) : Error("missing composite: " + msg) {}
};

struct NotAnAction : Error {
  explicit NotAnAction(const std::string &msg) : Error("not a group action: " + msg) {}
};

struct UnknownUnit : Error {
  explicit UnknownUnit(const std::string &msg) : Error("unknown unit: " + msg) {}
};

struct NotACocycle : Error {
  explicit NotACocycle(const std::string &msg) : Error("not a cocycle: " + msg) {}
};

struct GroupoidMismatch : Error {
  explicit GroupoidMismatch(const std::string &msg) : Error("groupoid mismatch: " + msg) {}
};

struct ExactModeUnsupported : Error {
  explicit ExactModeUnsupported(const std::string &msg) : Error("exact mode unsupported: " + msg) {}
};

struct NotHermitian : Error {
  explicit NotHermitian(const std::string &msg) : Error("functional is not hermitian: " + msg) {}
};

struct TraceOnWrongGroup : Error {
  explicit TraceOnWrongGroup(const std::string &msg) : Error("trace on wrong group: " + msg) {}
};

struct MissingTrace : Error {
  explicit MissingTrace(const std::string &msg) : Error("missing trace: " + msg) {}
};

struct InstanceMismatch : Error {
  explicit InstanceMismatch(const std::string &msg) : Error("instance mismatch: " + msg) {}
};

struct CutoffExceeded : Error {
  explicit CutoffExceeded(const std::string &msg) : Error("cutoff exceeded: " + msg) {}
};

struct NotATrace : Error {
  explicit NotATrace(const std::string &msg) : Error("not a trace: " + msg) {}
};

struct NonAbelian : Error {
  explicit NonAbelian(const std::string &msg) : Error("group is not abelian: " + msg) {}
};

struct InvariantViolated : Error {
  explicit InvariantViolated(const std::string &msg) : Error("invariant violated: " + msg) {}
};

struct EmptyClassInTruncation : Error {
  explicit EmptyClassInTruncation(const std::string &msg) : Error("empty ideal class in truncation: " + msg) {}
};

struct VerificationFailed : Error {
  explicit VerificationFailed(const std::string &msg) : Error("verification failed: " + msg) {}
};

} // namespace kmslab

#endif
