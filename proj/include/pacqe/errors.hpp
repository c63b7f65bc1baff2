#pragma once

#include <stdexcept>
#include <string>

namespace pacqe {

enum class ErrorCode {
  Parse,                 // syntax or well-formedness error in input text
  MalformedFormula,      // e.g. counting binder with x == y
  IncompleteAssignment,  // evaluation hit an unassigned variable
  UnsupportedQuantified, // evaluate_qf received a quantified formula
  SubstitutionShape,     // scaled substitution hit a non-divisible coefficient
  CaseExplosion,         // |orderings| * m^|Z| exceeded the --max-cases guard
  ThresholdExplosion,    // threshold constant e exceeded --max-threshold-e
  OpenFormula,           // decide() on a formula with free variables
  Resource,              // oracle window cap or similar budget exceeded
  Internal,              // pipeline invariant violation (a bug, not user error)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace pacqe
