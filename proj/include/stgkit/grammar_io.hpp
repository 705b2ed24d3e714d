#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "stgkit/error.hpp"
#include "stgkit/stg.hpp"
#include "stgkit/tag.hpp"
#include "stgkit/tsg.hpp"
#include "stgkit/validation.hpp"

namespace stgkit {

enum class Formalism { Stg, Tsg, Tag };

std::string_view to_string(Formalism formalism);

using Grammar = std::variant<StgGrammar, TsgGrammar, TagGrammar>;

Formalism formalism_of(const Grammar& grammar);
const std::set<std::string>& terminals_of(const Grammar& grammar);

ValidationReport validate_grammar(const Grammar& grammar);

/// Malformed file text, with the 1-based line and column of the first offending byte.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string message);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A sigil or token the declared formalism does not allow, with its position.
class LexicalViolation : public Error {
 public:
  LexicalViolation(std::size_t line, std::size_t column, std::string message);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses without running the validator.
/// Errors: SyntaxError, LexicalViolation (code FormalismLexicalViolation).
Grammar parse_grammar_unchecked(std::string_view text);

/// Parses and validates. Errors: SyntaxError, LexicalViolation, ValidationError.
Grammar parse_grammar(std::string_view text);

/// Canonical text: formalism, start, nonterminals, terminals, the
/// require-adjoining flag (tag only), then trees and auxiliary trees by name.
std::string print_grammar(const Grammar& grammar);

/// Throws std::runtime_error when the file cannot be read; otherwise as parse_grammar.
Grammar load_grammar_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace stgkit
