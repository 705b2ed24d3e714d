#include "stgkit/regular_bridge.hpp"

#include <map>
#include <optional>

namespace stgkit {

std::set<std::string> reachable_labels(const StgGrammar& grammar, const std::string& label) {
  std::set<std::string> seen{label};
  std::vector<std::string> stack{label};
  while (!stack.empty()) {
    const std::string current = stack.back();
    stack.pop_back();
    for (const auto& [name, tree] : grammar.initial_trees) {
      if (tree.label().text != current) continue;
      for (const std::string& l : nonterminal_labels(tree)) {
        if (seen.insert(l).second) stack.push_back(l);
      }
    }
  }
  return seen;
}

namespace {

// Lang(A, F): complete trees rooted at A with no label from F anywhere and
// every substitution obeying the path restriction. A node that ends up with
// no children is a nonterminal leaf and therefore a substitution site.
class StgRegexCompiler {
 public:
  StgRegexCompiler(const StgGrammar& grammar, bool memoize) : grammar_(grammar), memoize_(memoize) {}

  Regex lang(const std::string& label, const std::set<std::string>& forbidden) {
    if (forbidden.contains(label)) return Regex::empty_set();
    const std::set<std::string>& reach = reach_of(label);
    std::set<std::string> relevant;
    for (const std::string& f : forbidden) {
      if (reach.contains(f)) relevant.insert(f);
    }
    auto key = std::make_pair(label, relevant);
    if (memoize_) {
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    std::vector<Regex> alternatives;
    for (const auto& [name, tree] : grammar_.initial_trees) {
      if (tree.label().text != label || !tree.label().is_nonterminal()) continue;
      if (is_empty_sentence_tree(grammar_, tree)) {
        alternatives.push_back(Regex::empty_string());
        continue;
      }
      if (tree.is_leaf()) continue;
      const std::set<std::string> anc{label};
      alternatives.push_back(nonempty_part(children_rx(tree, memoize_ ? relevant : forbidden, anc)));
    }
    Regex result = Regex::alt(std::move(alternatives));
    if (memoize_) memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  const std::set<std::string>& reach_of(const std::string& label) {
    auto it = reach_.find(label);
    if (it == reach_.end()) it = reach_.emplace(label, reachable_labels(grammar_, label)).first;
    return it->second;
  }

  Regex children_rx(const SchematicTree& node, const std::set<std::string>& forbidden,
                    const std::set<std::string>& anc) {
    std::vector<Regex> parts;
    for (const SchematicTree& child : node.children()) {
      Regex one = node_rx(child, forbidden, anc);
      switch (child.annotation()) {
        case Annotation::None:
          parts.push_back(one);
          break;
        case Annotation::Plus:
          parts.push_back(Regex::plus(one));
          break;
        case Annotation::Star:
          parts.push_back(Regex::star(one));
          break;
      }
    }
    return Regex::concat(std::move(parts));
  }

  Regex node_rx(const SchematicTree& node, const std::set<std::string>& forbidden,
                const std::set<std::string>& anc) {
    const Symbol& label = node.label();
    if (!label.is_nonterminal()) return label.is_terminal() ? Regex::literal(label.text) : Regex::empty_string();
    if (forbidden.contains(label.text)) return Regex::empty_set();
    std::set<std::string> site_forbidden = forbidden;
    site_forbidden.insert(anc.begin(), anc.end());
    if (node.is_leaf()) return lang(label.text, site_forbidden);
    std::set<std::string> below = anc;
    below.insert(label.text);
    Regex body = children_rx(node, forbidden, below);
    if (!body.nullable()) return body;
    return Regex::alt({nonempty_part(body), lang(label.text, site_forbidden)});
  }

  const StgGrammar& grammar_;
  bool memoize_;
  std::map<std::string, std::set<std::string>> reach_;
  std::map<std::pair<std::string, std::set<std::string>>, Regex> memo_;
};

}  // namespace

Regex stg_lang(const StgGrammar& grammar, const std::string& label, const std::set<std::string>& forbidden,
               bool memoize) {
  require_valid(grammar);
  return StgRegexCompiler(grammar, memoize).lang(label, forbidden);
}

Regex compile_stg_to_regex(const StgGrammar& grammar) { return stg_lang(grammar, grammar.start, {}); }

Automaton compile_stg_to_automaton(const StgGrammar& grammar) {
  return build_automaton(compile_stg_to_regex(grammar), grammar.terminals);
}

// ---------------------------------------------------------------------------
// Regex to STG

namespace {

class StgBuilder {
 public:
  explicit StgBuilder(const std::set<std::string>& terminals) { grammar_.terminals = terminals; }

  StgGrammar build(const Regex& expression) {
    grammar_.start = "S";
    while (grammar_.terminals.contains(grammar_.start)) grammar_.start += "_";
    grammar_.nonterminals.insert(grammar_.start);
    const Symbol start = Symbol::nonterminal(grammar_.start);
    if (expression.nullable()) {
      add_tree(SchematicTree(start, Annotation::None, {SchematicTree(Symbol::epsilon())}));
    }
    const Regex rest = nonempty_part(expression);
    if (!rest.is_empty_set()) add_tree(SchematicTree(start, Annotation::None, items(rest)));
    return grammar_;
  }

 private:
  // Children realizing a non-nullable expression in sequence.
  std::vector<SchematicTree> items(const Regex& r) {
    switch (r.op()) {
      case RegexOp::Literal:
        return {SchematicTree(Symbol::terminal(r.token()))};
      case RegexOp::Union: {
        const Symbol site = fresh();
        for (const Regex& part : r.parts()) add_tree(SchematicTree(site, Annotation::None, items(part)));
        return {SchematicTree(site)};
      }
      case RegexOp::Plus:
        return {repeated(items(r.inner()), Annotation::Plus)};
      case RegexOp::Concat:
        return concat_items(r);
      default:
        throw Error(ErrorCode::InvalidGrammar, "unexpected nullable expression " + print_regex(r));
    }
  }

  std::vector<SchematicTree> concat_items(const Regex& r) {
    std::span<const Regex> parts = r.parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const Regex& part = parts[i];
      if (!part.nullable() || part.op() == RegexOp::Star || part.op() == RegexOp::Plus) continue;
      // An optional factor that is not a repetition: split into the branches with and without it.
      std::vector<Regex> with(parts.begin(), parts.end());
      with[i] = nonempty_part(part);
      std::vector<Regex> without(parts.begin(), parts.end());
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
      return items(Regex::alt({Regex::concat(std::move(with)), Regex::concat(std::move(without))}));
    }
    std::vector<SchematicTree> out;
    for (const Regex& part : parts) {
      if (part.nullable()) {
        out.push_back(repeated(items(nonempty_part(part.inner())), Annotation::Star));
      } else {
        for (SchematicTree& t : items(part)) out.push_back(std::move(t));
      }
    }
    return out;
  }

  SchematicTree repeated(std::vector<SchematicTree> body, Annotation annotation) {
    if (body.size() == 1 && body.front().annotation() == Annotation::None) {
      return body.front().with_annotation(annotation);
    }
    return SchematicTree(fresh(), annotation, std::move(body));
  }

  Symbol fresh() {
    std::string name;
    do {
      name = "R" + std::to_string(++counter_);
    } while (grammar_.terminals.contains(name) || name == grammar_.start);
    grammar_.nonterminals.insert(name);
    return Symbol::nonterminal(name);
  }

  void add_tree(SchematicTree tree) {
    const std::string name = "t" + std::to_string(grammar_.initial_trees.size() + 1);
    grammar_.initial_trees.emplace(name, std::move(tree));
  }

  StgGrammar grammar_;
  int counter_ = 0;
};

}  // namespace

StgGrammar regex_to_stg(const Regex& expression, const std::set<std::string>& terminals) {
  for (const std::string& literal : literals_of(expression)) {
    if (!terminals.contains(literal)) throw Error(ErrorCode::UnsupportedLiteral, literal);
  }
  return StgBuilder(terminals).build(expression);
}

}  // namespace stgkit
