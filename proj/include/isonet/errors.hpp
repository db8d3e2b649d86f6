#pragma once

#include <stdexcept>
#include <string>

namespace isonet {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// surface definition / parsing
struct SyntaxError : Error {
  SyntaxError(std::size_t pos, const std::string& msg)
      : Error("syntax error at position " + std::to_string(pos) + ": " + msg),
        position(pos) {}
  std::size_t position;
};
struct UnknownBuiltin : Error {
  explicit UnknownBuiltin(const std::string& name)
      : Error("unknown builtin surface: " + name) {}
};
struct UnboundIdentifier : Error {
  explicit UnboundIdentifier(const std::string& name)
      : Error("unbound identifier: " + name) {}
};
struct DomainError : Error {
  using Error::Error;
};

// evaluation
struct OutOfDomain : Error {
  using Error::Error;
};
struct DegenerateImmersion : Error {
  using Error::Error;
};
struct DegenerateMetric : Error {
  using Error::Error;
};
struct UmbilicPoint : Error {
  using Error::Error;
};
struct HypothesisViolated : Error {
  using Error::Error;
};

// meshing / verification
struct SeedUmbilic : Error {
  using Error::Error;
};
struct SeedOutOfDomain : Error {
  using Error::Error;
};
struct MeshTooSmall : Error {
  using Error::Error;
};
struct NotConformalEnough : Error {
  using Error::Error;
};

}  // namespace isonet
