/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace fsp {

enum class ErrorCode {
  Parse,
  Schema,
  Validation,
  DomainMismatch,
  Precondition,
  DegreeOverflow,
  Solver,
  Numerical,
  UnstableInput,
  NonMinimumPhase,
  ImproperTransfer,
  NoStablePoint,
  Unsupported,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::Schema: return "schema_error";
    case ErrorCode::Validation: return "validation_failed";
    case ErrorCode::DomainMismatch: return "domain_mismatch";
    case ErrorCode::Precondition: return "precondition_failed";
    case ErrorCode::DegreeOverflow: return "degree_overflow";
    case ErrorCode::Solver: return "solver_failure";
    case ErrorCode::Numerical: return "numerical_limit";
    case ErrorCode::UnstableInput: return "unstable_input";
    case ErrorCode::NonMinimumPhase: return "non_minimum_phase";
    case ErrorCode::ImproperTransfer: return "improper_transfer";
    case ErrorCode::NoStablePoint: return "no_stable_point";
    case ErrorCode::Unsupported: return "unsupported";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fsp
