#include "stgkit/tag.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace stgkit {

const TreeAddress& AuxiliaryTree::foot() const {
  if (feet.size() != 1) {
    throw Error(ErrorCode::InvalidGrammar, "auxiliary tree has " + std::to_string(feet.size()) + " feet");
  }
  return feet.front();
}

namespace {

bool has_terminal(const SyntaxTree& tree) {
  if (tree.label().is_terminal()) return true;
  return std::any_of(tree.children().begin(), tree.children().end(), has_terminal);
}

bool has_epsilon(const SyntaxTree& tree) {
  if (tree.label().is_epsilon()) return true;
  return std::any_of(tree.children().begin(), tree.children().end(), has_epsilon);
}

void check_annotations(const SyntaxTree& tree, const std::string& name, ValidationReport& report) {
  for (const TreeAddress& at : all_addresses(tree)) {
    const std::string& text = subtree_at(tree, at).label().text;
    if (!text.empty() && (text.back() == '+' || text.back() == '*')) {
      report.add(ViolationKind::SchematicAnnotationInTag, name, at, "'" + text + "'");
    }
  }
}

}  // namespace

ValidationReport validate_tag(const TagGrammar& grammar) {
  ValidationReport report;
  check_vocabulary(grammar.nonterminals, grammar.terminals, grammar.start, report);
  for (const auto& [name, tree] : grammar.initial_trees) {
    check_tree_labels(tree, name, grammar.nonterminals, grammar.terminals, report);
    check_annotations(tree, name, report);
  }
  for (const auto& [name, aux] : grammar.auxiliary_trees) {
    check_tree_labels(aux.tree, name, grammar.nonterminals, grammar.terminals, report);
    check_annotations(aux.tree, name, report);
    if (aux.feet.empty()) report.add(ViolationKind::MissingFoot, name, {}, "no foot node");
    if (aux.feet.size() > 1) {
      report.add(ViolationKind::MultipleFeet, name, aux.feet[1], std::to_string(aux.feet.size()) + " foot nodes");
    }
    for (const TreeAddress& foot : aux.feet) {
      if (!is_valid_address(aux.tree, foot)) {
        report.add(ViolationKind::FootNotFrontier, name, foot, "foot address is not in the tree");
        continue;
      }
      const SyntaxTree& node = subtree_at(aux.tree, foot);
      if (!node.is_leaf() || foot.is_root()) {
        report.add(ViolationKind::FootNotFrontier, name, foot, "foot must be a frontier node below the root");
      }
      if (!node.label().is_nonterminal() || node.label() != aux.tree.label()) {
        report.add(ViolationKind::FootLabelMismatch, name, foot,
                   "foot '" + node.label().text + "' vs root '" + aux.tree.label().text + "'");
      }
    }
    if (!has_terminal(aux.tree)) {
      report.warn(ViolationKind::NonlexicalAuxiliary, name, {}, "no terminal leaf; length bound alone is not enough");
    }
  }
  return report;
}

bool complete_in_length(const TagGrammar& grammar) {
  for (const auto& [name, tree] : grammar.initial_trees) {
    if (has_epsilon(tree)) return false;
  }
  for (const auto& [name, aux] : grammar.auxiliary_trees) {
    if (has_epsilon(aux.tree) || !has_terminal(aux.tree)) return false;
  }
  return true;
}

SyntaxTree adjoin(const SyntaxTree& host, const TreeAddress& address, const AuxiliaryTree& aux) {
  const SyntaxTree& site = subtree_at(host, address);
  if (site.is_leaf() || !site.label().is_nonterminal() || site.null_adjoin()) {
    throw Error(ErrorCode::NotAnAdjunctionSite, address.to_string());
  }
  if (site.label() != aux.tree.label()) {
    throw Error(ErrorCode::LabelMismatch, site.label().text + " vs " + aux.tree.label().text);
  }
  SyntaxTree wrapped = replace_at(aux.tree, aux.foot(), site.with_null_adjoin(true));
  return replace_at(host, address, std::move(wrapped));
}

SyntaxTree substitute_tag(const SyntaxTree& host, const TreeAddress& address, const SyntaxTree& filler) {
  const SyntaxTree& site = subtree_at(host, address);
  if (!site.is_leaf() || !site.label().is_nonterminal()) {
    throw Error(ErrorCode::NotASubstitutionSite, address.to_string());
  }
  if (site.label() != filler.label()) {
    throw Error(ErrorCode::LabelMismatch, site.label().text + " vs " + filler.label().text);
  }
  return replace_at(host, address, filler);
}

// ---------------------------------------------------------------------------
// Bounded search

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

using TokenBag = std::map<std::string, std::size_t>;

void require_valid_tag(const TagGrammar& grammar) {
  ValidationReport report = validate_tag(grammar);
  if (!report.ok()) throw Error(ErrorCode::InvalidGrammar, report.lines().front());
}

struct Move {
  enum Kind { Start, Substitute, Adjoin } kind;
  std::string tree;  // initial or auxiliary tree name
  TreeAddress address;
};

struct SearchState {
  SyntaxTree tree;
  bool adjoined;
  std::size_t steps;
  std::size_t parent;
  Move move;
};

class TagSearch {
 public:
  TagSearch(const TagGrammar& grammar, std::size_t max_len, std::size_t max_steps, std::optional<TokenBag> target)
      : g_(grammar), max_len_(max_len), max_steps_(max_steps), target_(std::move(target)) {
    compute_min_lengths();
  }

  std::vector<Derivation> run() {
    std::deque<std::size_t> queue;
    for (const auto& [name, tree] : g_.initial_trees) {
      if (tree.label().text != g_.start || !tree.label().is_nonterminal()) continue;
      offer(tree, false, 0, kUnbounded, Move{Move::Start, name, {}}, queue);
    }
    std::set<SyntaxTree> emitted;
    std::vector<std::pair<std::size_t, Derivation>> found;
    while (!queue.empty()) {
      const std::size_t id = queue.front();
      queue.pop_front();
      const SearchState state = states_[id];
      if (is_complete(state.tree) && (state.adjoined || !g_.require_adjoining)) {
        if (emitted.insert(state.tree).second) found.emplace_back(id, Derivation{state.tree, trace_of(id)});
      }
      if (state.steps == max_steps_) continue;
      for (const TreeAddress& at : all_addresses(state.tree)) {
        const SyntaxTree& node = subtree_at(state.tree, at);
        if (!node.label().is_nonterminal()) continue;
        if (node.is_leaf()) {
          if (at.is_root()) continue;
          for (const auto& [name, filler] : g_.initial_trees) {
            if (filler.label() != node.label()) continue;
            offer(replace_at(state.tree, at, filler), state.adjoined, state.steps + 1, id,
                  Move{Move::Substitute, name, at}, queue);
          }
        } else if (!node.null_adjoin()) {
          for (const auto& [name, aux] : g_.auxiliary_trees) {
            if (aux.tree.label() != node.label()) continue;
            offer(adjoin(state.tree, at, aux), true, state.steps + 1, id, Move{Move::Adjoin, name, at}, queue);
          }
        }
      }
    }
    std::vector<Derivation> out;
    for (auto& entry : found) out.push_back(std::move(entry.second));
    std::stable_sort(out.begin(), out.end(), [](const Derivation& a, const Derivation& b) {
      const Sentence ya = yield_tokens(a.tree);
      const Sentence yb = yield_tokens(b.tree);
      if (ya.size() != yb.size()) return ya.size() < yb.size();
      if (ya != yb) return ya < yb;
      return a.tree < b.tree;
    });
    return out;
  }

 private:
  void compute_min_lengths() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [name, tree] : g_.initial_trees) {
        const std::size_t cost = lower_bound(tree);
        if (cost == kUnbounded) continue;
        auto [it, inserted] = min_len_.emplace(tree.label().text, cost);
        if (inserted || cost < it->second) {
          it->second = cost;
          changed = true;
        }
      }
    }
  }

  std::size_t lower_bound(const SyntaxTree& tree) const {
    std::size_t total = terminal_count(tree);
    for (const TreeAddress& site : nonterminal_leaves(tree)) {
      auto it = min_len_.find(subtree_at(tree, site).label().text);
      if (it == min_len_.end()) return kUnbounded;
      total += it->second;
    }
    return total;
  }

  bool within_target(const SyntaxTree& tree) const {
    TokenBag have;
    for (const Symbol& s : yield_of(tree)) {
      if (!s.is_terminal()) continue;
      auto it = target_->find(s.text);
      if (it == target_->end() || ++have[s.text] > it->second) return false;
    }
    return true;
  }

  void offer(SyntaxTree tree, bool adjoined, std::size_t steps, std::size_t parent, Move move,
             std::deque<std::size_t>& queue) {
    const std::size_t lower = lower_bound(tree);
    if (lower == kUnbounded || lower > max_len_) return;
    if (nonterminal_leaves(tree).size() > max_steps_ - steps) return;
    if (target_ && !within_target(tree)) return;
    if (!visited_.insert({tree, adjoined}).second) return;
    states_.push_back(SearchState{std::move(tree), adjoined, steps, parent, std::move(move)});
    queue.push_back(states_.size() - 1);
  }

  DerivationTrace trace_of(std::size_t id) const {
    std::vector<std::size_t> chain;
    for (std::size_t at = id; at != kUnbounded; at = states_[at].parent) chain.push_back(at);
    std::reverse(chain.begin(), chain.end());
    DerivationTrace trace;
    std::size_t host = 0;
    for (std::size_t at : chain) {
      const Move& move = states_[at].move;
      switch (move.kind) {
        case Move::Start:
          trace.steps.push_back(InstantiateStep{move.tree, {}});
          break;
        case Move::Substitute: {
          trace.steps.push_back(InstantiateStep{move.tree, {}});
          const std::size_t filler = trace.steps.size() - 1;
          trace.steps.push_back(SubstituteStep{host, move.address, filler, std::nullopt});
          break;
        }
        case Move::Adjoin:
          trace.steps.push_back(AdjoinStep{host, move.address, move.tree});
          break;
      }
      host = trace.steps.size() - 1;
    }
    return trace;
  }

  const TagGrammar& g_;
  std::size_t max_len_;
  std::size_t max_steps_;
  std::optional<TokenBag> target_;
  std::map<std::string, std::size_t> min_len_;
  std::vector<SearchState> states_;
  std::set<std::pair<SyntaxTree, bool>> visited_;
};

void check_sentence(const TagGrammar& grammar, const Sentence& sentence, std::size_t ceiling) {
  if (sentence.size() > ceiling) {
    throw Error(ErrorCode::LengthCeilingExceeded,
                std::to_string(sentence.size()) + " tokens, ceiling " + std::to_string(ceiling));
  }
  for (const std::string& token : sentence) {
    if (!grammar.terminals.contains(token)) throw Error(ErrorCode::UnknownToken, token);
  }
}

}  // namespace

TagEnumeration enumerate_tag(const TagGrammar& grammar, std::size_t max_len, std::size_t max_steps) {
  require_valid_tag(grammar);
  TagEnumeration result;
  result.derivations = TagSearch(grammar, max_len, max_steps, std::nullopt).run();
  result.length_complete = complete_in_length(grammar);
  result.max_steps = max_steps;
  return result;
}

std::size_t member_step_bound(const TagGrammar& grammar, std::size_t length) {
  return (length + 1) * (grammar.initial_trees.size() + grammar.auxiliary_trees.size());
}

std::vector<Derivation> derive_tag(const TagGrammar& grammar, const Sentence& sentence, std::size_t ceiling) {
  require_valid_tag(grammar);
  check_sentence(grammar, sentence, ceiling);
  TokenBag bag;
  for (const std::string& token : sentence) ++bag[token];
  std::vector<Derivation> out;
  for (Derivation& d :
       TagSearch(grammar, sentence.size(), member_step_bound(grammar, sentence.size()), bag).run()) {
    if (yield_tokens(d.tree) == sentence) out.push_back(std::move(d));
  }
  return out;
}

bool member_tag(const TagGrammar& grammar, const Sentence& sentence, std::size_t ceiling) {
  return !derive_tag(grammar, sentence, ceiling).empty();
}

SyntaxTree replay_tag(const TagGrammar& grammar, const DerivationTrace& trace) {
  TraceOps ops;
  ops.instantiate = [&](const InstantiateStep& step) {
    auto it = grammar.initial_trees.find(step.tree);
    if (it == grammar.initial_trees.end()) throw Error(ErrorCode::InvalidTrace, "no initial tree " + step.tree);
    return it->second;
  };
  ops.substitute = [](const SyntaxTree& host, const SubstituteStep& step, const SyntaxTree& filler) {
    return substitute_tag(host, step.address, filler);
  };
  ops.adjoin = [&](const SyntaxTree& host, const AdjoinStep& step) {
    auto it = grammar.auxiliary_trees.find(step.aux);
    if (it == grammar.auxiliary_trees.end()) throw Error(ErrorCode::InvalidTrace, "no auxiliary tree " + step.aux);
    return adjoin(host, step.address, it->second);
  };
  return replay_trace(trace, ops);
}

std::set<Sentence> TagEnumerationSource::bounded_language(std::size_t max_len) const {
  const std::size_t steps = max_steps_ ? *max_steps_ : member_step_bound(grammar_, max_len);
  std::set<Sentence> out;
  for (const Derivation& d : enumerate_tag(grammar_, max_len, steps).derivations) out.insert(yield_tokens(d.tree));
  return out;
}

}  // namespace stgkit
