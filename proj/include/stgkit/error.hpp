#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stgkit {

enum class ErrorCode {
  UnbalancedBrackets,
  MalformedTree,
  UnknownToken,
  TerminalWithChildren,
  InvalidAddress,
  NotASubstitutionSite,
  LabelMismatch,
  PathRecursion,
  InvalidGrammar,
  UnsupportedLiteral,
  RegexSyntax,
  AlphabetMismatch,
  NotAnAdjunctionSite,
  LengthCeilingExceeded,
  SyntaxError,
  ValidationFailed,
  FormalismLexicalViolation,
  InvalidTrace,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace stgkit
