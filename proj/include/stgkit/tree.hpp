#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stgkit/error.hpp"

namespace stgkit {

/// Reserved token for the empty leaf. Never declared in an alphabet.
inline constexpr std::string_view kEpsilonToken = "<eps>";

enum class SymbolKind { Terminal, Nonterminal, Epsilon };

struct Symbol {
  std::string text;
  SymbolKind kind = SymbolKind::Terminal;

  static Symbol terminal(std::string text) { return {std::move(text), SymbolKind::Terminal}; }
  static Symbol nonterminal(std::string text) { return {std::move(text), SymbolKind::Nonterminal}; }
  static Symbol epsilon() { return {std::string(kEpsilonToken), SymbolKind::Epsilon}; }

  bool is_terminal() const noexcept { return kind == SymbolKind::Terminal; }
  bool is_nonterminal() const noexcept { return kind == SymbolKind::Nonterminal; }
  bool is_epsilon() const noexcept { return kind == SymbolKind::Epsilon; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// True when `text` is usable as a symbol: non-empty, no whitespace, no parentheses.
bool is_valid_token(std::string_view text) noexcept;

/// Declared vocabularies of one grammar. A token declared in both sets
/// resolves as a nonterminal; validators report the overlap.
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::set<std::string> nonterminals, std::set<std::string> terminals);

  std::optional<SymbolKind> kind_of(std::string_view token) const;

  // Throws UnknownToken.
  Symbol symbol(std::string_view token) const;

  const std::set<std::string>& nonterminals() const noexcept { return nonterminals_; }
  const std::set<std::string>& terminals() const noexcept { return terminals_; }

 private:
  std::set<std::string> nonterminals_;
  std::set<std::string> terminals_;
};

struct TreeAddress {
  std::vector<std::size_t> path;

  bool is_root() const noexcept { return path.empty(); }
  std::size_t depth() const noexcept { return path.size(); }
  TreeAddress child(std::size_t index) const;
  TreeAddress parent() const;

  std::string to_string() const;

  friend auto operator<=>(const TreeAddress&, const TreeAddress&) = default;
};

/// Finite ordered labeled tree. Immutable once built; every edit returns a new tree.
/// `null_adjoin` marks nodes that refuse adjoining (only meaningful for TAG).
class SyntaxTree {
 public:
  // Throws TerminalWithChildren for terminal or epsilon labels with children.
  explicit SyntaxTree(Symbol label, std::vector<SyntaxTree> children = {}, bool null_adjoin = false);

  const Symbol& label() const noexcept { return label_; }
  std::span<const SyntaxTree> children() const noexcept { return children_; }
  const SyntaxTree& child(std::size_t index) const { return children_.at(index); }
  std::size_t arity() const noexcept { return children_.size(); }
  bool is_leaf() const noexcept { return children_.empty(); }
  bool null_adjoin() const noexcept { return null_adjoin_; }

  SyntaxTree with_null_adjoin(bool value) const;

  friend bool operator==(const SyntaxTree&, const SyntaxTree&) = default;
  friend std::strong_ordering operator<=>(const SyntaxTree& lhs, const SyntaxTree& rhs);

 private:
  Symbol label_;
  std::vector<SyntaxTree> children_;
  bool null_adjoin_ = false;
};

using Sentence = std::vector<std::string>;

Sentence split_sentence(std::string_view text);
std::string join_sentence(const Sentence& sentence);

// ---------------------------------------------------------------------------
// Bracketed text

/// Untyped parse of the bracketed format; token sigils are left in place.
/// `offset` is the byte offset of the token within the parsed text.
struct RawTree {
  std::string token;
  std::size_t offset = 0;
  bool bracketed = false;
  std::vector<RawTree> children;
};

/// Bracket-level failure with the byte offset of the first offending character.
class BracketError : public Error {
 public:
  BracketError(ErrorCode code, std::string detail, std::size_t offset)
      : Error(code, std::move(detail)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

RawTree parse_raw_tree(std::string_view text);

/// Errors: UnbalancedBrackets, MalformedTree, UnknownToken, TerminalWithChildren.
SyntaxTree parse_tree(std::string_view text, const Alphabet& alphabet);

/// Leaves print as bare tokens; `foot` (if given) is printed with an `@` suffix
/// and null-adjoin nodes with a `!` suffix.
std::string print_tree(const SyntaxTree& tree, const std::optional<TreeAddress>& foot = std::nullopt);

// ---------------------------------------------------------------------------
// Structural queries

/// Left-to-right frontier; epsilon leaves dropped, nonterminal leaves kept.
std::vector<Symbol> yield_of(const SyntaxTree& tree);

/// Frontier tokens as text (same order as yield_of).
Sentence yield_tokens(const SyntaxTree& tree);

std::size_t terminal_count(const SyntaxTree& tree);

bool is_complete(const SyntaxTree& tree);

std::size_t node_count(const SyntaxTree& tree);

bool is_valid_address(const SyntaxTree& tree, const TreeAddress& address);

// Throws InvalidAddress.
const SyntaxTree& subtree_at(const SyntaxTree& tree, const TreeAddress& address);

// Throws InvalidAddress.
SyntaxTree replace_at(const SyntaxTree& tree, const TreeAddress& address, SyntaxTree replacement);

/// Every nonterminal label occurring anywhere in the tree.
std::set<std::string> nonterminal_labels(const SyntaxTree& tree);

/// Nonterminal labels strictly above `address` (root included, node excluded).
std::set<std::string> path_labels(const SyntaxTree& tree, const TreeAddress& address);

/// Addresses of nonterminal leaves in left-to-right order. The root counts only
/// when `include_root` is set.
std::vector<TreeAddress> nonterminal_leaves(const SyntaxTree& tree, bool include_root = false);

/// Addresses in preorder.
std::vector<TreeAddress> all_addresses(const SyntaxTree& tree);

}  // namespace stgkit
