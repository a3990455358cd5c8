#pragma once

#include <stdexcept>
#include <string>

namespace dyckshift {

// Base of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input data or parameters; exit code 2 in the CLI.
struct ValidationError : Error {
  using Error::Error;
};

// Search budget or enumeration horizon exhausted; exit code 3 in the CLI.
struct ResourceError : Error {
  using Error::Error;
};

// Reconstruction could not complete; exit code 1 in the CLI.
struct ReconstructError : Error {
  using Error::Error;
};

struct NotStronglyConnected : ValidationError {
  NotStronglyConnected() : ValidationError("graph is not strongly connected") {}
};

struct IsACycle : ValidationError {
  IsACycle() : ValidationError("graph is a single directed cycle") {}
};

struct FEdgesCyclic : Error {
  FEdgesCyclic() : Error("tree edge set contains a cycle") {}
};

struct SizeLimitExceeded : ResourceError {
  explicit SizeLimitExceeded(const std::string& what) : ResourceError(what) {}
};

struct ParseError : ValidationError {
  explicit ParseError(const std::string& what) : ValidationError("parse error: " + what) {}
};

struct SchemaError : ValidationError {
  explicit SchemaError(const std::string& what) : ValidationError("schema error: " + what) {}
};

struct UnknownSymbol : ValidationError {
  explicit UnknownSymbol(const std::string& name)
      : ValidationError("unknown symbol: " + name) {}
};

struct BudgetExceeded : ResourceError {
  BudgetExceeded() : ResourceError("search budget exceeded") {}
};

struct NotAPeriodicPoint : ValidationError {
  explicit NotAPeriodicPoint(const std::string& word)
      : ValidationError("word does not generate a periodic point: " + word) {}
};

struct HorizonTooSmall : ResourceError {
  explicit HorizonTooSmall(const std::string& what)
      : ResourceError("enumeration horizon too small: " + what) {}
};

struct UnknownMultiplier : ValidationError {
  explicit UnknownMultiplier(const std::string& what)
      : ValidationError("unknown multiplier: " + what) {}
};

struct DegenerateCycle : ValidationError {
  DegenerateCycle() : ValidationError("parameters describe a bare directed cycle") {}
};

struct InvalidParams : ValidationError {
  explicit InvalidParams(const std::string& what)
      : ValidationError("invalid parameters: " + what) {}
};

struct NotSH2 : ReconstructError {
  explicit NotSH2(const std::string& what) : ReconstructError(what) {}
};

struct NonIntegerSolution : ReconstructError {
  explicit NonIntegerSolution(const std::string& what) : ReconstructError(what) {}
};

struct ReferenceBuildFailed : ReconstructError {
  explicit ReferenceBuildFailed(const std::string& what) : ReconstructError(what) {}
};

struct ExcessNeither2Nor4 : ReconstructError {
  explicit ExcessNeither2Nor4(long long excess)
      : ReconstructError("count excess is " + std::to_string(excess) +
                         ", expected 2 or 4") {}
};

struct RoundTripFailed : ReconstructError {
  explicit RoundTripFailed(const std::string& what) : ReconstructError(what) {}
};

struct NonIntegerEta : ReconstructError {
  explicit NonIntegerEta(const std::string& what) : ReconstructError(what) {}
};

struct CaseFallthrough : ReconstructError {
  explicit CaseFallthrough(const std::string& what) : ReconstructError(what) {}
};

}  // namespace dyckshift
