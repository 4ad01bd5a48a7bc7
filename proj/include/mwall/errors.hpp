#ifndef MWALL_ERRORS_HPP
#define MWALL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mwall {

// Distinct failure codes for the typed exceptions thrown by the library.
// Codes double as stable identifiers in CLI error reports.
enum class ErrorCode {
  DimensionMismatch,
  ModelMismatch,
  ParseError,
  PreconditionViolated,
  SingularLefschetz,
  DegenerateForm,
  SingularDerivative,
  NoConvergence,
  ResultNotAmple,
  NegativeBound,
  RegionNotInP,
  EmptyRegion,
  EnumerationBudgetExceeded,
  NoRationalPointFound,
  BNotAmple,
  VerificationFailed,
  InternalInconsistency,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::SingularLefschetz: return "SingularLefschetz";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::SingularDerivative: return "SingularDerivative";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ResultNotAmple: return "ResultNotAmple";
    case ErrorCode::NegativeBound: return "NegativeBound";
    case ErrorCode::RegionNotInP: return "RegionNotInP";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorCode::NoRationalPointFound: return "NoRationalPointFound";
    case ErrorCode::BNotAmple: return "BNotAmple";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// CLI process exit codes.
//   0 ok, 2 configuration/input error, 3 budget exceeded, 4 internal inconsistency.
inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::EnumerationBudgetExceeded:
    case ErrorCode::NoRationalPointFound:
    case ErrorCode::NoConvergence:
      return 3;
    case ErrorCode::InternalInconsistency:
    case ErrorCode::VerificationFailed:
      return 4;
    default:
      return 2;
  }
}

}  // namespace mwall

#endif  // MWALL_ERRORS_HPP
