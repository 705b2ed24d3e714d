#include "stgkit/grammar_io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace stgkit {

std::string_view to_string(Formalism formalism) {
  switch (formalism) {
    case Formalism::Stg: return "stg";
    case Formalism::Tsg: return "tsg";
    case Formalism::Tag: return "tag";
  }
  return "?";
}

Formalism formalism_of(const Grammar& grammar) {
  return static_cast<Formalism>(grammar.index());
}

const std::set<std::string>& terminals_of(const Grammar& grammar) {
  return std::visit([](const auto& g) -> const std::set<std::string>& { return g.terminals; }, grammar);
}

ValidationReport validate_grammar(const Grammar& grammar) {
  switch (formalism_of(grammar)) {
    case Formalism::Stg: return validate_stg(std::get<StgGrammar>(grammar));
    case Formalism::Tsg: return validate_tsg(std::get<TsgGrammar>(grammar));
    case Formalism::Tag: return validate_tag(std::get<TagGrammar>(grammar));
  }
  return {};
}

namespace {

std::string position(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + " column " + std::to_string(column);
}

}  // namespace

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string message)
    : Error(ErrorCode::SyntaxError, position(line, column) + ": " + message), line_(line), column_(column) {}

LexicalViolation::LexicalViolation(std::size_t line, std::size_t column, std::string message)
    : Error(ErrorCode::FormalismLexicalViolation, position(line, column) + ": " + message),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

struct Word {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Word> split_words(std::string_view line, std::size_t from) {
  std::vector<Word> out;
  std::size_t i = from;
  while (i < line.size()) {
    if (is_blank(line[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < line.size() && !is_blank(line[end])) ++end;
    out.push_back({std::string(line.substr(i, end - i)), i + 1});
    i = end;
  }
  return out;
}

struct TreeEntry {
  bool auxiliary;
  std::string name;
  RawTree raw;
  std::size_t line;
  std::size_t base;  // 0-based column of the tree text within the line
};

struct Declarations {
  std::optional<Formalism> formalism;
  std::optional<std::string> start;
  std::optional<std::set<std::string>> nonterminals;
  std::optional<std::set<std::string>> terminals;
  std::optional<bool> require_adjoining;
  std::size_t require_adjoining_line = 0;
  std::size_t require_adjoining_column = 0;
};

class GrammarParser {
 public:
  explicit GrammarParser(std::string_view text) : text_(text) {}

  Grammar parse() {
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text_.size()) {
      std::size_t end = text_.find('\n', begin);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      parse_line(text_.substr(begin, end - begin), line_no);
      begin = end + 1;
    }
    if (!decl_.formalism) throw SyntaxError(1, 1, "missing formalism declaration");
    if (decl_.require_adjoining && *decl_.formalism != Formalism::Tag) {
      throw LexicalViolation(decl_.require_adjoining_line, decl_.require_adjoining_column,
                             "require-adjoining is only meaningful for tag grammars");
    }
    return build();
  }

 private:
  void parse_line(std::string_view line, std::size_t line_no) {
    std::size_t p = 0;
    while (p < line.size() && is_blank(line[p])) ++p;
    if (p == line.size() || line[p] == '#') return;

    for (std::string_view keyword : {"tree", "aux"}) {
      if (line.substr(p, keyword.size()) == keyword && p + keyword.size() < line.size() &&
          is_blank(line[p + keyword.size()])) {
        parse_tree_line(line, line_no, p + keyword.size(), keyword == "aux");
        return;
      }
    }

    const std::size_t colon = line.find(':', p);
    if (colon == std::string_view::npos) throw SyntaxError(line_no, p + 1, "expected a declaration or tree entry");
    std::string_view key = line.substr(p, colon - p);
    while (!key.empty() && is_blank(key.back())) key.remove_suffix(1);
    const std::vector<Word> values = split_words(line, colon + 1);
    const std::size_t end_column = line.size() + 1;

    auto single = [&](std::string_view what) -> const Word& {
      if (values.empty()) throw SyntaxError(line_no, end_column, std::string("expected ") + std::string(what));
      if (values.size() > 1) throw SyntaxError(line_no, values[1].column, "unexpected extra token");
      return values.front();
    };
    auto once = [&](bool already) {
      if (already) throw SyntaxError(line_no, p + 1, "duplicate '" + std::string(key) + "' declaration");
    };

    if (key == "formalism") {
      once(decl_.formalism.has_value());
      const Word& w = single("a formalism");
      if (w.text == "stg") {
        decl_.formalism = Formalism::Stg;
      } else if (w.text == "tsg") {
        decl_.formalism = Formalism::Tsg;
      } else if (w.text == "tag") {
        decl_.formalism = Formalism::Tag;
      } else {
        throw SyntaxError(line_no, w.column, "unknown formalism '" + w.text + "'");
      }
    } else if (key == "start") {
      once(decl_.start.has_value());
      decl_.start = single("a start symbol").text;
    } else if (key == "nonterminals" || key == "terminals") {
      auto& slot = key == "nonterminals" ? decl_.nonterminals : decl_.terminals;
      once(slot.has_value());
      slot.emplace();
      for (const Word& w : values) {
        if (w.text.find('(') != std::string::npos || w.text.find(')') != std::string::npos) {
          throw SyntaxError(line_no, w.column, "parentheses are not allowed in symbols");
        }
        slot->insert(w.text);
      }
    } else if (key == "require-adjoining") {
      once(decl_.require_adjoining.has_value());
      const Word& w = single("true or false");
      if (w.text != "true" && w.text != "false") throw SyntaxError(line_no, w.column, "expected true or false");
      decl_.require_adjoining = w.text == "true";
      decl_.require_adjoining_line = line_no;
      decl_.require_adjoining_column = p + 1;
    } else {
      throw SyntaxError(line_no, p + 1, "unknown declaration '" + std::string(key) + "'");
    }
  }

  void parse_tree_line(std::string_view line, std::size_t line_no, std::size_t at, bool auxiliary) {
    while (at < line.size() && is_blank(line[at])) ++at;
    std::size_t end = at;
    while (end < line.size() && !is_blank(line[end]) && line[end] != ':' && line[end] != '(' && line[end] != ')') {
      ++end;
    }
    if (end == at) throw SyntaxError(line_no, at + 1, "expected a tree name");
    std::string name(line.substr(at, end - at));
    while (end < line.size() && is_blank(line[end])) ++end;
    if (end >= line.size() || line[end] != ':') throw SyntaxError(line_no, end + 1, "expected ':'");
    const std::size_t base = end + 1;
    if (!names_.insert(name).second) throw SyntaxError(line_no, at + 1, "duplicate tree name '" + name + "'");
    try {
      RawTree raw = parse_raw_tree(line.substr(base));
      entries_.push_back(TreeEntry{auxiliary, std::move(name), std::move(raw), line_no, base});
    } catch (const BracketError& e) {
      throw SyntaxError(line_no, base + e.offset() + 1, e.detail());
    }
  }

  // Conversion of raw trees

  struct Token {
    std::string text;
    Annotation annotation = Annotation::None;
    bool foot = false;
    bool null_adjoin = false;
  };

  Token read_token(const TreeEntry& entry, const RawTree& raw) const {
    Token tok{raw.token};
    const Formalism f = *decl_.formalism;
    while (tok.text.size() > 1) {
      const char c = tok.text.back();
      if (c != '+' && c != '*' && c != '@' && c != '!') break;
      const std::size_t column = entry.base + raw.offset + tok.text.size();
      const std::string sigil(1, c);
      if ((c == '+' || c == '*') && f != Formalism::Stg) {
        throw LexicalViolation(entry.line, column, "annotation '" + sigil + "' is only allowed in stg grammars");
      }
      if (c == '@' && (f != Formalism::Tag || !entry.auxiliary)) {
        throw LexicalViolation(entry.line, column, "foot marker '@' is only allowed in tag auxiliary trees");
      }
      if (c == '!' && f != Formalism::Tag) {
        throw LexicalViolation(entry.line, column, "null-adjoin marker '!' is only allowed in tag grammars");
      }
      const bool repeated = (c == '@' && tok.foot) || (c == '!' && tok.null_adjoin) ||
                            ((c == '+' || c == '*') && tok.annotation != Annotation::None);
      if (repeated) throw SyntaxError(entry.line, column, "repeated marker '" + sigil + "'");
      if (c == '+') tok.annotation = Annotation::Plus;
      if (c == '*') tok.annotation = Annotation::Star;
      if (c == '@') tok.foot = true;
      if (c == '!') tok.null_adjoin = true;
      tok.text.pop_back();
    }
    return tok;
  }

  Symbol classify(const Token& tok, const RawTree& raw, bool is_root) const {
    if (tok.text == kEpsilonToken) return Symbol::epsilon();
    if (!raw.children.empty()) return Symbol::nonterminal(tok.text);
    if (decl_.nonterminals && decl_.nonterminals->contains(tok.text)) return Symbol::nonterminal(tok.text);
    if (decl_.terminals && decl_.terminals->contains(tok.text)) return Symbol::terminal(tok.text);
    if (raw.bracketed || is_root) return Symbol::nonterminal(tok.text);
    return Symbol::terminal(tok.text);
  }

  void check_epsilon(const TreeEntry& entry, const RawTree& raw, const Token& tok, const TreeAddress& here,
                     const RawTree& root) const {
    const std::size_t column = entry.base + raw.offset + 1;
    if (tok.text != kEpsilonToken) return;
    if (tok.text != raw.token) throw SyntaxError(entry.line, column, "markers are not allowed on <eps>");
    if (!raw.children.empty()) throw SyntaxError(entry.line, column, "<eps> cannot have children");
    if (*decl_.formalism == Formalism::Stg) {
      const bool whole_body = !entry.auxiliary && here.depth() == 1 && root.children.size() == 1;
      if (!whole_body) {
        throw LexicalViolation(entry.line, column, "<eps> in an stg grammar must be the only child of a root");
      }
    }
  }

  SchematicTree to_schematic(const TreeEntry& entry, const RawTree& raw, TreeAddress& here) const {
    const Token tok = read_token(entry, raw);
    check_epsilon(entry, raw, tok, here, entry.raw);
    std::vector<SchematicTree> children;
    for (std::size_t i = 0; i < raw.children.size(); ++i) {
      here.path.push_back(i);
      children.push_back(to_schematic(entry, raw.children[i], here));
      here.path.pop_back();
    }
    return SchematicTree(classify(tok, raw, here.is_root()), tok.annotation, std::move(children));
  }

  SyntaxTree to_tree(const TreeEntry& entry, const RawTree& raw, TreeAddress& here,
                     std::vector<TreeAddress>& feet) const {
    const Token tok = read_token(entry, raw);
    check_epsilon(entry, raw, tok, here, entry.raw);
    if (tok.foot) feet.push_back(here);
    std::vector<SyntaxTree> children;
    for (std::size_t i = 0; i < raw.children.size(); ++i) {
      here.path.push_back(i);
      children.push_back(to_tree(entry, raw.children[i], here, feet));
      here.path.pop_back();
    }
    return SyntaxTree(classify(tok, raw, here.is_root()), std::move(children), tok.null_adjoin);
  }

  Grammar build() const {
    const std::set<std::string> nonterminals = decl_.nonterminals.value_or(std::set<std::string>{});
    const std::set<std::string> terminals = decl_.terminals.value_or(std::set<std::string>{});
    const std::string start = decl_.start.value_or("");
    switch (*decl_.formalism) {
      case Formalism::Stg: {
        StgGrammar g{nonterminals, terminals, start, {}};
        for (const TreeEntry& e : entries_) {
          if (e.auxiliary) throw LexicalViolation(e.line, 1, "auxiliary trees are only allowed in tag grammars");
          TreeAddress here;
          g.initial_trees.emplace(e.name, to_schematic(e, e.raw, here));
        }
        return g;
      }
      case Formalism::Tsg: {
        TsgGrammar g{nonterminals, terminals, start, {}};
        for (const TreeEntry& e : entries_) {
          if (e.auxiliary) throw LexicalViolation(e.line, 1, "auxiliary trees are only allowed in tag grammars");
          TreeAddress here;
          std::vector<TreeAddress> feet;
          g.elementary_trees.emplace(e.name, to_tree(e, e.raw, here, feet));
        }
        return g;
      }
      case Formalism::Tag: {
        TagGrammar g{nonterminals, terminals, start, {}, {}, decl_.require_adjoining.value_or(false)};
        for (const TreeEntry& e : entries_) {
          TreeAddress here;
          std::vector<TreeAddress> feet;
          SyntaxTree tree = to_tree(e, e.raw, here, feet);
          if (e.auxiliary) {
            g.auxiliary_trees.emplace(e.name, AuxiliaryTree{std::move(tree), std::move(feet)});
          } else {
            g.initial_trees.emplace(e.name, std::move(tree));
          }
        }
        return g;
      }
    }
    throw SyntaxError(1, 1, "unreachable");
  }

  std::string_view text_;
  Declarations decl_;
  std::vector<TreeEntry> entries_;
  std::set<std::string> names_;
};

}  // namespace

Grammar parse_grammar_unchecked(std::string_view text) {
  try {
    return GrammarParser(text).parse();
  } catch (const SyntaxError&) {
    throw;
  } catch (const LexicalViolation&) {
    throw;
  } catch (const Error& e) {
    // Tree construction failures that slipped past the parser's own checks.
    throw SyntaxError(1, 1, e.what());
  }
}

Grammar parse_grammar(std::string_view text) {
  Grammar grammar = parse_grammar_unchecked(text);
  ValidationReport report = validate_grammar(grammar);
  if (!report.ok()) throw ValidationError(std::move(report));
  return grammar;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string join_set(const std::set<std::string>& items) {
  std::string out;
  for (const std::string& s : items) out += " " + s;
  return out;
}

void print_header(std::ostringstream& out, Formalism f, const std::string& start,
                  const std::set<std::string>& nonterminals, const std::set<std::string>& terminals) {
  out << "formalism: " << to_string(f) << "\n";
  out << "start: " << start << "\n";
  out << "nonterminals:" << join_set(nonterminals) << "\n";
  out << "terminals:" << join_set(terminals) << "\n";
}

}  // namespace

std::string print_grammar(const Grammar& grammar) {
  std::ostringstream out;
  switch (formalism_of(grammar)) {
    case Formalism::Stg: {
      const auto& g = std::get<StgGrammar>(grammar);
      print_header(out, Formalism::Stg, g.start, g.nonterminals, g.terminals);
      for (const auto& [name, tree] : g.initial_trees) out << "tree " << name << ": " << print_schematic(tree) << "\n";
      break;
    }
    case Formalism::Tsg: {
      const auto& g = std::get<TsgGrammar>(grammar);
      print_header(out, Formalism::Tsg, g.start, g.nonterminals, g.terminals);
      for (const auto& [name, tree] : g.elementary_trees) out << "tree " << name << ": " << print_tree(tree) << "\n";
      break;
    }
    case Formalism::Tag: {
      const auto& g = std::get<TagGrammar>(grammar);
      print_header(out, Formalism::Tag, g.start, g.nonterminals, g.terminals);
      out << "require-adjoining: " << (g.require_adjoining ? "true" : "false") << "\n";
      for (const auto& [name, tree] : g.initial_trees) out << "tree " << name << ": " << print_tree(tree) << "\n";
      for (const auto& [name, aux] : g.auxiliary_trees) {
        std::optional<TreeAddress> foot;
        if (!aux.feet.empty()) foot = aux.feet.front();
        out << "aux " << name << ": " << print_tree(aux.tree, foot) << "\n";
      }
      break;
    }
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Grammar load_grammar_file(const std::filesystem::path& path) { return parse_grammar(read_text_file(path)); }

}  // namespace stgkit
