#pragma once

#include <stdexcept>
#include <string>

namespace fermopt {

enum class ErrorCode {
  kMalformedDocument,
  kOddWeight,
  kIndexOutOfRange,
  kDuplicateTerm,
  kRepeatedMajorana,
  kNotIncreasing,
  kInvalidArgument,
  kBudgetExceeded,
  kDiracConditionUnmet,
  kImpossibleOutcome,
  kTargetsNotDisjoint,
  kInconsistentTarget,
  kMatchingFailed,
  kContractViolation,
  kInfeasible,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fermopt
