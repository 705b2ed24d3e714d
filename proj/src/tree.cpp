#include "stgkit/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace stgkit {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

bool is_valid_token(std::string_view text) noexcept {
  if (text.empty()) return false;
  return std::none_of(text.begin(), text.end(),
                      [](char c) { return is_space(c) || c == '(' || c == ')'; });
}

// ---------------------------------------------------------------------------

Alphabet::Alphabet(std::set<std::string> nonterminals, std::set<std::string> terminals)
    : nonterminals_(std::move(nonterminals)), terminals_(std::move(terminals)) {}

std::optional<SymbolKind> Alphabet::kind_of(std::string_view token) const {
  if (token == kEpsilonToken) return SymbolKind::Epsilon;
  std::string key(token);
  if (nonterminals_.contains(key)) return SymbolKind::Nonterminal;
  if (terminals_.contains(key)) return SymbolKind::Terminal;
  return std::nullopt;
}

Symbol Alphabet::symbol(std::string_view token) const {
  auto kind = kind_of(token);
  if (!kind) throw Error(ErrorCode::UnknownToken, std::string(token));
  return Symbol{std::string(token), *kind};
}

// ---------------------------------------------------------------------------

TreeAddress TreeAddress::child(std::size_t index) const {
  TreeAddress out = *this;
  out.path.push_back(index);
  return out;
}

TreeAddress TreeAddress::parent() const {
  if (path.empty()) throw Error(ErrorCode::InvalidAddress, "root has no parent");
  TreeAddress out = *this;
  out.path.pop_back();
  return out;
}

std::string TreeAddress::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(path[i]);
  }
  out += ']';
  return out;
}

// ---------------------------------------------------------------------------

SyntaxTree::SyntaxTree(Symbol label, std::vector<SyntaxTree> children, bool null_adjoin)
    : label_(std::move(label)), children_(std::move(children)), null_adjoin_(null_adjoin) {
  if (!label_.is_nonterminal() && !children_.empty()) {
    throw Error(ErrorCode::TerminalWithChildren, label_.text);
  }
}

SyntaxTree SyntaxTree::with_null_adjoin(bool value) const {
  SyntaxTree out = *this;
  out.null_adjoin_ = value;
  return out;
}

std::strong_ordering operator<=>(const SyntaxTree& lhs, const SyntaxTree& rhs) {
  if (auto c = lhs.label_ <=> rhs.label_; c != 0) return c;
  if (auto c = lhs.null_adjoin_ <=> rhs.null_adjoin_; c != 0) return c;
  const std::size_t n = std::min(lhs.children_.size(), rhs.children_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = lhs.children_[i] <=> rhs.children_[i]; c != 0) return c;
  }
  return lhs.children_.size() <=> rhs.children_.size();
}

Sentence split_sentence(std::string_view text) {
  Sentence out;
  std::string current;
  for (char c : text) {
    if (is_space(c)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::string join_sentence(const Sentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (i) out += ' ';
    out += sentence[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bracketed text

namespace {

struct Lexeme {
  enum Kind { Open, Close, Atom, End } kind;
  std::string_view text;
  std::size_t offset;
};

class BracketLexer {
 public:
  explicit BracketLexer(std::string_view text) : text_(text) {}

  Lexeme peek() {
    skip_space();
    if (pos_ >= text_.size()) return {Lexeme::End, {}, text_.size()};
    char c = text_[pos_];
    if (c == '(') return {Lexeme::Open, text_.substr(pos_, 1), pos_};
    if (c == ')') return {Lexeme::Close, text_.substr(pos_, 1), pos_};
    std::size_t end = pos_;
    while (end < text_.size() && !is_space(text_[end]) && text_[end] != '(' && text_[end] != ')') ++end;
    return {Lexeme::Atom, text_.substr(pos_, end - pos_), pos_};
  }

  Lexeme next() {
    Lexeme lx = peek();
    if (lx.kind != Lexeme::End) pos_ = lx.offset + lx.text.size();
    return lx;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

RawTree parse_raw_node(BracketLexer& lexer) {
  Lexeme lx = lexer.next();
  switch (lx.kind) {
    case Lexeme::Atom:
      return RawTree{std::string(lx.text), lx.offset, false, {}};
    case Lexeme::End:
      throw BracketError(ErrorCode::MalformedTree, "expected a tree", lx.offset);
    case Lexeme::Close:
      throw BracketError(ErrorCode::UnbalancedBrackets, "unexpected ')'", lx.offset);
    case Lexeme::Open:
      break;
  }
  Lexeme label = lexer.next();
  if (label.kind == Lexeme::End) {
    throw BracketError(ErrorCode::UnbalancedBrackets, "missing ')'", label.offset);
  }
  if (label.kind != Lexeme::Atom) {
    throw BracketError(ErrorCode::MalformedTree, "expected a label after '('", label.offset);
  }
  RawTree node{std::string(label.text), label.offset, true, {}};
  for (;;) {
    Lexeme ahead = lexer.peek();
    if (ahead.kind == Lexeme::Close) {
      lexer.next();
      return node;
    }
    if (ahead.kind == Lexeme::End) {
      throw BracketError(ErrorCode::UnbalancedBrackets, "missing ')'", ahead.offset);
    }
    node.children.push_back(parse_raw_node(lexer));
  }
}

void print_node(const SyntaxTree& tree, const std::optional<TreeAddress>& foot, TreeAddress& here,
                std::string& out) {
  std::string label = tree.label().text;
  if (foot && *foot == here) label += '@';
  if (tree.null_adjoin()) label += '!';
  if (tree.is_leaf()) {
    out += label;
    return;
  }
  out += '(';
  out += label;
  for (std::size_t i = 0; i < tree.arity(); ++i) {
    out += ' ';
    here.path.push_back(i);
    print_node(tree.child(i), foot, here, out);
    here.path.pop_back();
  }
  out += ')';
}

SyntaxTree build_tree(const RawTree& raw, const Alphabet& alphabet) {
  auto kind = alphabet.kind_of(raw.token);
  if (!kind) throw BracketError(ErrorCode::UnknownToken, raw.token, raw.offset);
  std::vector<SyntaxTree> children;
  children.reserve(raw.children.size());
  for (const RawTree& child : raw.children) children.push_back(build_tree(child, alphabet));
  if (*kind != SymbolKind::Nonterminal && !children.empty()) {
    throw BracketError(ErrorCode::TerminalWithChildren, raw.token, raw.offset);
  }
  return SyntaxTree(Symbol{raw.token, *kind}, std::move(children));
}

}  // namespace

RawTree parse_raw_tree(std::string_view text) {
  BracketLexer lexer(text);
  RawTree tree = parse_raw_node(lexer);
  Lexeme rest = lexer.peek();
  if (rest.kind == Lexeme::Close) {
    throw BracketError(ErrorCode::UnbalancedBrackets, "unexpected ')'", rest.offset);
  }
  if (rest.kind != Lexeme::End) {
    throw BracketError(ErrorCode::MalformedTree, "trailing input after tree", rest.offset);
  }
  return tree;
}

SyntaxTree parse_tree(std::string_view text, const Alphabet& alphabet) {
  return build_tree(parse_raw_tree(text), alphabet);
}

std::string print_tree(const SyntaxTree& tree, const std::optional<TreeAddress>& foot) {
  std::string out;
  TreeAddress here;
  print_node(tree, foot, here, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural queries

std::vector<Symbol> yield_of(const SyntaxTree& tree) {
  std::vector<Symbol> out;
  std::function<void(const SyntaxTree&)> walk = [&](const SyntaxTree& node) {
    if (node.is_leaf()) {
      if (!node.label().is_epsilon()) out.push_back(node.label());
      return;
    }
    for (const SyntaxTree& child : node.children()) walk(child);
  };
  walk(tree);
  return out;
}

Sentence yield_tokens(const SyntaxTree& tree) {
  Sentence out;
  for (Symbol& s : yield_of(tree)) out.push_back(std::move(s.text));
  return out;
}

std::size_t terminal_count(const SyntaxTree& tree) {
  if (tree.is_leaf()) return tree.label().is_terminal() ? 1 : 0;
  std::size_t n = 0;
  for (const SyntaxTree& child : tree.children()) n += terminal_count(child);
  return n;
}

bool is_complete(const SyntaxTree& tree) {
  if (tree.is_leaf()) return !tree.label().is_nonterminal();
  return std::all_of(tree.children().begin(), tree.children().end(),
                     [](const SyntaxTree& child) { return is_complete(child); });
}

std::size_t node_count(const SyntaxTree& tree) {
  std::size_t n = 1;
  for (const SyntaxTree& child : tree.children()) n += node_count(child);
  return n;
}

bool is_valid_address(const SyntaxTree& tree, const TreeAddress& address) {
  const SyntaxTree* node = &tree;
  for (std::size_t index : address.path) {
    if (index >= node->arity()) return false;
    node = &node->child(index);
  }
  return true;
}

const SyntaxTree& subtree_at(const SyntaxTree& tree, const TreeAddress& address) {
  const SyntaxTree* node = &tree;
  for (std::size_t index : address.path) {
    if (index >= node->arity()) throw Error(ErrorCode::InvalidAddress, address.to_string());
    node = &node->child(index);
  }
  return *node;
}

namespace {

SyntaxTree replace_from(const SyntaxTree& node, std::span<const std::size_t> path, SyntaxTree& replacement) {
  if (path.empty()) return std::move(replacement);
  std::vector<SyntaxTree> children(node.children().begin(), node.children().end());
  children[path.front()] = replace_from(node.child(path.front()), path.subspan(1), replacement);
  return SyntaxTree(node.label(), std::move(children), node.null_adjoin());
}

}  // namespace

SyntaxTree replace_at(const SyntaxTree& tree, const TreeAddress& address, SyntaxTree replacement) {
  if (!is_valid_address(tree, address)) throw Error(ErrorCode::InvalidAddress, address.to_string());
  return replace_from(tree, address.path, replacement);
}

std::set<std::string> nonterminal_labels(const SyntaxTree& tree) {
  std::set<std::string> out;
  std::function<void(const SyntaxTree&)> walk = [&](const SyntaxTree& node) {
    if (node.label().is_nonterminal()) out.insert(node.label().text);
    for (const SyntaxTree& child : node.children()) walk(child);
  };
  walk(tree);
  return out;
}

std::set<std::string> path_labels(const SyntaxTree& tree, const TreeAddress& address) {
  if (!is_valid_address(tree, address)) throw Error(ErrorCode::InvalidAddress, address.to_string());
  std::set<std::string> out;
  const SyntaxTree* node = &tree;
  for (std::size_t index : address.path) {
    if (node->label().is_nonterminal()) out.insert(node->label().text);
    node = &node->child(index);
  }
  return out;
}

std::vector<TreeAddress> nonterminal_leaves(const SyntaxTree& tree, bool include_root) {
  std::vector<TreeAddress> out;
  TreeAddress here;
  std::function<void(const SyntaxTree&)> walk = [&](const SyntaxTree& node) {
    if (node.is_leaf()) {
      if (node.label().is_nonterminal() && (include_root || !here.is_root())) out.push_back(here);
      return;
    }
    for (std::size_t i = 0; i < node.arity(); ++i) {
      here.path.push_back(i);
      walk(node.child(i));
      here.path.pop_back();
    }
  };
  walk(tree);
  return out;
}

std::vector<TreeAddress> all_addresses(const SyntaxTree& tree) {
  std::vector<TreeAddress> out;
  TreeAddress here;
  std::function<void(const SyntaxTree&)> walk = [&](const SyntaxTree& node) {
    out.push_back(here);
    for (std::size_t i = 0; i < node.arity(); ++i) {
      here.path.push_back(i);
      walk(node.child(i));
      here.path.pop_back();
    }
  };
  walk(tree);
  return out;
}

}  // namespace stgkit
