#pragma once

#include <stdexcept>
#include <string>

namespace rsasian {

/// Generator / coefficient conditions a market model can violate.
enum class ModelFault {
  NegativeOffDiagonal,
  RowSumNonZero,
  NonPositiveVolatility,
  NonPositiveRate,
};

inline const char* to_string(ModelFault f) {
  switch (f) {
    case ModelFault::NegativeOffDiagonal: return "NegativeOffDiagonal";
    case ModelFault::RowSumNonZero: return "RowSumNonZero";
    case ModelFault::NonPositiveVolatility: return "NonPositiveVolatility";
    case ModelFault::NonPositiveRate: return "NonPositiveRate";
  }
  return "UnknownFault";
}

class ValidationError : public std::runtime_error {
 public:
  ValidationError(ModelFault fault, const std::string& detail)
      : std::runtime_error(std::string(to_string(fault)) + ": " + detail), fault_(fault) {}
  ModelFault fault() const { return fault_; }

 private:
  ModelFault fault_;
};

/// Option contract inconsistent with what the method supports
/// (e.g. an in-progress fixed-strike call, for which the operator need not contract).
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical self-check failed; the result would be silently wrong.
class AccuracyError : public std::runtime_error {
 public:
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

class MaxIterationsError : public std::runtime_error {
 public:
  explicit MaxIterationsError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed run configuration (CLI layer).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rsasian
