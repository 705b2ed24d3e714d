#include "stgkit/tsg.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <memory>
#include <tuple>

namespace stgkit {

ValidationReport validate_tsg(const TsgGrammar& grammar) {
  ValidationReport report;
  check_vocabulary(grammar.nonterminals, grammar.terminals, grammar.start, report);
  for (const auto& [name, tree] : grammar.elementary_trees) {
    check_tree_labels(tree, name, grammar.nonterminals, grammar.terminals, report);
    for (const TreeAddress& at : all_addresses(tree)) {
      const std::string& text = subtree_at(tree, at).label().text;
      if (!text.empty() && (text.back() == '+' || text.back() == '*')) {
        report.add(ViolationKind::SchematicAnnotationInTsg, name, at, "'" + text + "'");
      }
    }
  }
  return report;
}

SyntaxTree substitute_tsg(const SyntaxTree& host, const TreeAddress& address, const SyntaxTree& filler) {
  const SyntaxTree& site = subtree_at(host, address);
  if (!site.is_leaf() || !site.label().is_nonterminal()) {
    throw Error(ErrorCode::NotASubstitutionSite, address.to_string());
  }
  if (site.label() != filler.label()) {
    throw Error(ErrorCode::LabelMismatch, site.label().text + " vs " + filler.label().text);
  }
  return replace_at(host, address, filler);
}

namespace {

void require_valid_tsg(const TsgGrammar& grammar) {
  ValidationReport report = validate_tsg(grammar);
  if (!report.ok()) throw Error(ErrorCode::InvalidGrammar, report.lines().front());
}

}  // namespace

Cfg extract_cfg(const TsgGrammar& grammar) {
  require_valid_tsg(grammar);
  Cfg cfg{grammar.nonterminals, grammar.terminals, grammar.start, {}};
  for (const auto& [name, tree] : grammar.elementary_trees) {
    cfg.productions.push_back(Production{tree.label().text, yield_of(tree)});
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

using TokenBag = std::map<std::string, std::size_t>;

bool fits_bag(const SyntaxTree& tree, const TokenBag& target) {
  TokenBag have;
  for (const Symbol& s : yield_of(tree)) {
    if (!s.is_terminal()) continue;
    auto it = target.find(s.text);
    if (it == target.end() || ++have[s.text] > it->second) return false;
  }
  return true;
}

struct DerivNode {
  std::string tree_name;
  std::vector<std::pair<TreeAddress, std::shared_ptr<const DerivNode>>> fillers;
};

struct Partial {
  SyntaxTree tree;
  std::size_t length = 0;
  std::size_t steps = 0;
  std::shared_ptr<const DerivNode> deriv;
  std::vector<std::string> key;
};

bool is_unit_tree(const SyntaxTree& tree) {
  const std::vector<Symbol> frontier = yield_of(tree);
  return frontier.size() == 1 && frontier.front().is_nonterminal() && !tree.is_leaf();
}

bool has_epsilon(const SyntaxTree& tree) {
  if (tree.label().is_epsilon()) return true;
  return std::any_of(tree.children().begin(), tree.children().end(), has_epsilon);
}

class TsgEnumerator {
 public:
  TsgEnumerator(const TsgGrammar& grammar, std::size_t step_limit, std::optional<TokenBag> target)
      : grammar_(grammar), step_limit_(step_limit), target_(std::move(target)) {
    compute_min_lengths();
  }

  std::vector<Partial> top(std::size_t max_len) { return derive(grammar_.start, max_len, step_limit_); }

 private:
  void compute_min_lengths() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [name, tree] : grammar_.elementary_trees) {
        if (tree.is_leaf()) continue;
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

  std::size_t min_len(const std::string& label) const {
    auto it = min_len_.find(label);
    return it == min_len_.end() ? kUnbounded : it->second;
  }

  std::size_t lower_bound(const SyntaxTree& tree) const {
    std::size_t total = terminal_count(tree);
    for (const TreeAddress& site : nonterminal_leaves(tree)) {
      const std::size_t m = min_len(subtree_at(tree, site).label().text);
      if (m == kUnbounded) return kUnbounded;
      total += m;
    }
    return total;
  }

  std::vector<Partial> derive(const std::string& label, std::size_t budget, std::size_t steps) {
    auto key = std::make_tuple(label, budget, steps);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Partial> out;
    for (const auto& [name, tree] : grammar_.elementary_trees) {
      if (tree.label().text != label || tree.is_leaf()) continue;
      if (target_ && !fits_bag(tree, *target_)) continue;
      const std::vector<TreeAddress> sites = nonterminal_leaves(tree);
      if (sites.size() > steps) continue;
      const std::size_t lower = lower_bound(tree);
      if (lower == kUnbounded || lower > budget) continue;
      std::vector<std::size_t> tail_min(sites.size() + 1, 0);
      for (std::size_t i = sites.size(); i-- > 0;) {
        tail_min[i] = tail_min[i + 1] + min_len(subtree_at(tree, sites[i]).label().text);
      }

      DerivNode node{name, {}};
      std::vector<std::string> node_key{name};
      std::function<void(std::size_t, const SyntaxTree&, std::size_t, std::size_t)> fill =
          [&](std::size_t i, const SyntaxTree& current, std::size_t used, std::size_t used_steps) {
            if (i == sites.size()) {
              if (target_ && !fits_bag(current, *target_)) return;
              out.push_back(Partial{current, used, used_steps, std::make_shared<DerivNode>(node), node_key});
              return;
            }
            const std::size_t room = budget - used - tail_min[i + 1];
            const std::size_t room_steps = steps == kUnbounded ? kUnbounded : steps - used_steps;
            const std::string& site_label = subtree_at(tree, sites[i]).label().text;
            for (const Partial& filler : derive(site_label, room, room_steps)) {
              node.fillers.emplace_back(sites[i], filler.deriv);
              const std::size_t key_size = node_key.size();
              node_key.insert(node_key.end(), filler.key.begin(), filler.key.end());
              fill(i + 1, replace_at(current, sites[i], filler.tree), used + filler.length,
                   used_steps == kUnbounded ? kUnbounded : used_steps + filler.steps);
              node_key.resize(key_size);
              node.fillers.pop_back();
            }
          };
      fill(0, tree, terminal_count(tree), steps == kUnbounded ? kUnbounded : sites.size());
    }
    std::stable_sort(out.begin(), out.end(), [](const Partial& a, const Partial& b) {
      return std::tie(a.length, a.steps, a.key) < std::tie(b.length, b.steps, b.key);
    });
    std::set<SyntaxTree> seen;
    std::vector<Partial> unique;
    for (Partial& p : out) {
      if (seen.insert(p.tree).second) unique.push_back(std::move(p));
    }
    memo_.emplace(std::move(key), unique);
    return unique;
  }

  const TsgGrammar& grammar_;
  std::size_t step_limit_;
  std::optional<TokenBag> target_;
  std::map<std::string, std::size_t> min_len_;
  std::map<std::tuple<std::string, std::size_t, std::size_t>, std::vector<Partial>> memo_;
};

std::size_t flatten(const DerivNode& node, DerivationTrace& trace) {
  trace.steps.push_back(InstantiateStep{node.tree_name, {}});
  std::size_t host = trace.steps.size() - 1;
  for (const auto& [address, child] : node.fillers) {
    const std::size_t filler_id = flatten(*child, trace);
    trace.steps.push_back(SubstituteStep{host, address, filler_id, std::nullopt});
    host = trace.steps.size() - 1;
  }
  return host;
}

TsgEnumeration run(const TsgGrammar& grammar, std::size_t max_len, std::optional<TokenBag> target) {
  require_valid_tsg(grammar);
  TsgEnumeration result;
  for (const auto& [name, tree] : grammar.elementary_trees) {
    if (has_epsilon(tree) || is_unit_tree(tree)) result.length_complete = false;
  }
  std::size_t step_limit = kUnbounded;
  if (!result.length_complete) {
    step_limit = std::max<std::size_t>(1, max_len) * grammar.elementary_trees.size();
    result.step_bound = step_limit;
  }
  TsgEnumerator enumerator(grammar, step_limit, std::move(target));
  std::vector<Partial> found = enumerator.top(max_len);
  std::stable_sort(found.begin(), found.end(), [](const Partial& a, const Partial& b) {
    return std::tie(a.length, a.key) < std::tie(b.length, b.key);
  });
  for (const Partial& p : found) {
    DerivationTrace trace;
    flatten(*p.deriv, trace);
    result.derivations.push_back(Derivation{p.tree, std::move(trace)});
  }
  return result;
}

}  // namespace

TsgEnumeration enumerate_tsg(const TsgGrammar& grammar, std::size_t max_len) {
  return run(grammar, max_len, std::nullopt);
}

std::vector<Derivation> derive_tsg(const TsgGrammar& grammar, const Sentence& sentence) {
  TokenBag bag;
  for (const std::string& token : sentence) ++bag[token];
  std::vector<Derivation> out;
  for (Derivation& d : run(grammar, sentence.size(), bag).derivations) {
    if (yield_tokens(d.tree) == sentence) out.push_back(std::move(d));
  }
  return out;
}

SyntaxTree replay_tsg(const TsgGrammar& grammar, const DerivationTrace& trace) {
  TraceOps ops;
  ops.instantiate = [&](const InstantiateStep& step) {
    auto it = grammar.elementary_trees.find(step.tree);
    if (it == grammar.elementary_trees.end()) throw Error(ErrorCode::InvalidTrace, "no elementary tree " + step.tree);
    if (!step.repetitions.empty()) throw Error(ErrorCode::InvalidTrace, "repetitions given for " + step.tree);
    return it->second;
  };
  ops.substitute = [](const SyntaxTree& host, const SubstituteStep& step, const SyntaxTree& filler) {
    return substitute_tsg(host, step.address, filler);
  };
  return replay_trace(trace, ops);
}

std::set<Sentence> TsgEnumerationSource::bounded_language(std::size_t max_len) const {
  std::set<Sentence> out;
  for (const Derivation& d : enumerate_tsg(grammar_, max_len).derivations) out.insert(yield_tokens(d.tree));
  return out;
}

}  // namespace stgkit
