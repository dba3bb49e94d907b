#ifndef HECKE_ERROR_HPP
#define HECKE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hecke {

enum class ErrorCode {
  FamilyMismatch,
  SingularMatrix,
  MalformedInput,
  OutOfDomain,
  MissingSubgroupGenerators,
  OrbitNotFinite,
  BudgetExceeded,
  NotFiniteFamily,
  NotNormal,
  NotLocallyFinite,
  SubgroupNotFinite,
  NotHomomorphism,
  NotBijectiveOnCosets,
  Disconnected,
  ConfigParseError,
  NotBijectiveGenerator,
};

inline const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::MissingSubgroupGenerators: return "MissingSubgroupGenerators";
    case ErrorCode::OrbitNotFinite: return "OrbitNotFinite";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotFiniteFamily: return "NotFiniteFamily";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotLocallyFinite: return "NotLocallyFinite";
    case ErrorCode::SubgroupNotFinite: return "SubgroupNotFinite";
    case ErrorCode::NotHomomorphism: return "NotHomomorphism";
    case ErrorCode::NotBijectiveOnCosets: return "NotBijectiveOnCosets";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::NotBijectiveGenerator: return "NotBijectiveGenerator";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Record of a breadth-first search that ran out of budget.
struct DivergenceTrace {
  std::size_t visited = 0;
  std::vector<std::size_t> frontier_sizes;
};

class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, DivergenceTrace trace)
      : Error(ErrorCode::BudgetExceeded, what), trace_(std::move(trace)) {}
  const DivergenceTrace& trace() const noexcept { return trace_; }

 private:
  DivergenceTrace trace_;
};

class OrbitNotFiniteError : public Error {
 public:
  OrbitNotFiniteError(const std::string& what, DivergenceTrace trace)
      : Error(ErrorCode::OrbitNotFinite, what), trace_(std::move(trace)) {}
  const DivergenceTrace& trace() const noexcept { return trace_; }

 private:
  DivergenceTrace trace_;
};

class NotLocallyFiniteError : public Error {
 public:
  NotLocallyFiniteError(std::string generator, DivergenceTrace trace)
      : Error(ErrorCode::NotLocallyFinite, "orbit of generator " + generator + " did not close"),
        generator_(std::move(generator)),
        trace_(std::move(trace)) {}
  const std::string& generator() const noexcept { return generator_; }
  const DivergenceTrace& trace() const noexcept { return trace_; }

 private:
  std::string generator_;
  DivergenceTrace trace_;
};

class NotBijectiveOnCosetsError : public Error {
 public:
  explicit NotBijectiveOnCosetsError(std::vector<std::string> failed)
      : Error(ErrorCode::NotBijectiveOnCosets, join(failed)), failed_(std::move(failed)) {}
  /// Names of the violated conditions.
  const std::vector<std::string>& failed_conditions() const noexcept { return failed_; }

 private:
  static std::string join(const std::vector<std::string>& parts) {
    std::string out = "violated:";
    for (const auto& p : parts) out += " [" + p + "]";
    return out;
  }
  std::vector<std::string> failed_;
};

}  // namespace hecke

#endif  // HECKE_ERROR_HPP
