#include "stgkit/error.hpp"

namespace stgkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnbalancedBrackets: return "UnbalancedBrackets";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::TerminalWithChildren: return "TerminalWithChildren";
    case ErrorCode::InvalidAddress: return "InvalidAddress";
    case ErrorCode::NotASubstitutionSite: return "NotASubstitutionSite";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::PathRecursion: return "PathRecursion";
    case ErrorCode::InvalidGrammar: return "InvalidGrammar";
    case ErrorCode::UnsupportedLiteral: return "UnsupportedLiteral";
    case ErrorCode::RegexSyntax: return "RegexSyntax";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::NotAnAdjunctionSite: return "NotAnAdjunctionSite";
    case ErrorCode::LengthCeilingExceeded: return "LengthCeilingExceeded";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::FormalismLexicalViolation: return "FormalismLexicalViolation";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace stgkit
