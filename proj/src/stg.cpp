#include "stgkit/stg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <tuple>

#include "stgkit/regular_bridge.hpp"

namespace stgkit {

SchematicTree::SchematicTree(Symbol label, Annotation annotation, std::vector<SchematicTree> children)
    : label_(std::move(label)), annotation_(annotation), children_(std::move(children)) {}

SchematicTree SchematicTree::with_annotation(Annotation annotation) const {
  SchematicTree out = *this;
  out.annotation_ = annotation;
  return out;
}

std::string print_schematic(const SchematicTree& tree) {
  std::string label = tree.label().text;
  if (tree.annotation() == Annotation::Plus) label += '+';
  if (tree.annotation() == Annotation::Star) label += '*';
  if (tree.is_leaf()) return label;
  std::string out = "(" + label;
  for (const SchematicTree& child : tree.children()) out += " " + print_schematic(child);
  return out + ")";
}

std::set<std::string> nonterminal_labels(const SchematicTree& tree) {
  std::set<std::string> out;
  std::function<void(const SchematicTree&)> walk = [&](const SchematicTree& node) {
    if (node.label().is_nonterminal()) out.insert(node.label().text);
    for (const SchematicTree& child : node.children()) walk(child);
  };
  walk(tree);
  return out;
}

bool is_empty_sentence_tree(const StgGrammar& grammar, const SchematicTree& tree) {
  return tree.label().is_nonterminal() && tree.label().text == grammar.start &&
         tree.annotation() == Annotation::None && tree.children().size() == 1 &&
         tree.child(0).label().is_epsilon() && tree.child(0).is_leaf() &&
         tree.child(0).annotation() == Annotation::None;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_stg(const StgGrammar& grammar) {
  ValidationReport report;
  check_vocabulary(grammar.nonterminals, grammar.terminals, grammar.start, report);

  bool has_empty_sentence_tree = false;
  bool start_below_root = false;

  for (const auto& [name, tree] : grammar.initial_trees) {
    if (tree.annotation() != Annotation::None) {
      report.add(ViolationKind::AnnotatedRoot, name, {}, "initial-tree roots cannot be annotated");
    }
    if (!tree.label().is_nonterminal()) {
      report.add(ViolationKind::TerminalRoot, name, {}, "root '" + tree.label().text + "' is not a nonterminal");
    }
    const bool empty_sentence = is_empty_sentence_tree(grammar, tree);
    has_empty_sentence_tree |= empty_sentence;

    TreeAddress here;
    std::function<void(const SchematicTree&)> walk = [&](const SchematicTree& node) {
      const Symbol& label = node.label();
      if (!here.is_root() && label.is_nonterminal() && label.text == grammar.start) start_below_root = true;
      if (label.is_epsilon()) {
        if (!empty_sentence) {
          report.add(ViolationKind::EpsilonInStg, name, here,
                     "epsilon is only allowed as the whole body of a start-rooted tree");
        }
      } else if (!is_valid_token(label.text)) {
        report.add(ViolationKind::InvalidToken, name, here, "'" + label.text + "'");
      } else {
        const auto& own = label.is_nonterminal() ? grammar.nonterminals : grammar.terminals;
        const auto& other = label.is_nonterminal() ? grammar.terminals : grammar.nonterminals;
        if (!node.is_leaf() && grammar.terminals.contains(label.text) &&
            !grammar.nonterminals.contains(label.text)) {
          report.add(ViolationKind::TerminalInternal, name, here, "terminal '" + label.text + "' has children");
        } else if (!own.contains(label.text)) {
          if (other.contains(label.text)) {
            report.add(ViolationKind::KindMismatch, name, here, "'" + label.text + "' used with the wrong kind");
          } else {
            report.add(ViolationKind::UndeclaredLabel, name, here, "'" + label.text + "'");
          }
        }
      }
      for (std::size_t i = 0; i < node.children().size(); ++i) {
        here.path.push_back(i);
        walk(node.child(i));
        here.path.pop_back();
      }
    };
    walk(tree);
  }

  if (has_empty_sentence_tree && start_below_root) {
    report.add(ViolationKind::EpsilonInStg, "", {},
               "an empty-sentence tree requires the start symbol to appear only at roots");
  }
  return report;
}

void require_valid(const StgGrammar& grammar) {
  ValidationReport report = validate_stg(grammar);
  if (!report.ok()) throw Error(ErrorCode::InvalidGrammar, report.lines().front());
}

// ---------------------------------------------------------------------------
// Instantiation

namespace {

bool match_one(const SyntaxTree& tree, const SchematicTree& schema);

bool match_sequence(std::span<const SyntaxTree> trees, const SchematicTree& schema) {
  switch (schema.annotation()) {
    case Annotation::None:
      if (trees.size() != 1) return false;
      break;
    case Annotation::Plus:
      if (trees.empty()) return false;
      break;
    case Annotation::Star:
      break;
  }
  return std::all_of(trees.begin(), trees.end(), [&](const SyntaxTree& t) { return match_one(t, schema); });
}

// reach[j][i]: the first j schema children account for exactly the first i tree children.
bool match_children(std::span<const SyntaxTree> kids, std::span<const SchematicTree> schema_kids) {
  const std::size_t n = kids.size();
  const std::size_t m = schema_kids.size();
  std::vector<std::vector<char>> reach(m + 1, std::vector<char>(n + 1, 0));
  reach[0][0] = 1;
  for (std::size_t j = 0; j < m; ++j) {
    const SchematicTree& target = schema_kids[j];
    for (std::size_t i = 0; i <= n; ++i) {
      if (!reach[j][i]) continue;
      const std::size_t last = target.annotation() == Annotation::None ? std::min(n, i + 1) : n;
      for (std::size_t end = i; end <= last; ++end) {
        if (!reach[j + 1][end] && match_sequence(kids.subspan(i, end - i), target)) reach[j + 1][end] = 1;
      }
    }
  }
  return reach[m][n] != 0;
}

bool match_one(const SyntaxTree& tree, const SchematicTree& schema) {
  if (tree.label() != schema.label()) return false;
  return match_children(tree.children(), schema.children());
}

std::vector<SyntaxTree> build_copies(const SchematicTree& schema, std::span<const std::size_t> reps,
                                     std::size_t& pos);

SyntaxTree build_one(const SchematicTree& schema, std::span<const std::size_t> reps, std::size_t& pos) {
  std::vector<SyntaxTree> children;
  for (const SchematicTree& child : schema.children()) {
    for (SyntaxTree& copy : build_copies(child, reps, pos)) children.push_back(std::move(copy));
  }
  return SyntaxTree(schema.label(), std::move(children));
}

std::vector<SyntaxTree> build_copies(const SchematicTree& schema, std::span<const std::size_t> reps,
                                     std::size_t& pos) {
  std::size_t copies = 1;
  if (schema.annotation() != Annotation::None) {
    if (pos >= reps.size()) throw Error(ErrorCode::InvalidTrace, "repetition vector too short");
    copies = reps[pos++];
    if (schema.annotation() == Annotation::Plus && copies == 0) {
      throw Error(ErrorCode::InvalidTrace, "zero copies at a '+' node");
    }
  }
  std::vector<SyntaxTree> out;
  for (std::size_t c = 0; c < copies; ++c) out.push_back(build_one(schema, reps, pos));
  return out;
}

struct InstanceOption {
  std::vector<SyntaxTree> trees;
  std::vector<std::size_t> reps;
  std::size_t weight = 0;  // node count, or yield lower bound when budgeted
};

// Expands a schema node into its instance options. With `budget` set, weight is a
// lower bound on the final yield (every leaf and every childless node costs one)
// and options above the budget are dropped; otherwise weight counts nodes and
// `max_reps` caps copies.
class InstanceExpander {
 public:
  InstanceExpander(std::size_t max_reps, std::optional<std::size_t> budget)
      : max_reps_(max_reps), budget_(budget) {}

  std::vector<InstanceOption> one(const SchematicTree& schema) const {
    if (schema.is_leaf()) {
      return {InstanceOption{{SyntaxTree(schema.label())}, {}, 1}};
    }
    std::vector<InstanceOption> partial{InstanceOption{}};
    for (const SchematicTree& child : schema.children()) {
      std::vector<InstanceOption> child_options = item(child);
      std::vector<InstanceOption> next;
      for (const InstanceOption& left : partial) {
        for (const InstanceOption& right : child_options) {
          if (!fits(left.weight + right.weight)) continue;
          next.push_back(concat(left, right));
        }
      }
      partial = std::move(next);
    }
    std::vector<InstanceOption> out;
    for (InstanceOption& p : partial) {
      std::size_t weight = budget_ ? std::max<std::size_t>(1, p.weight) : p.weight + 1;
      if (!fits(weight)) continue;
      out.push_back(InstanceOption{{SyntaxTree(schema.label(), std::move(p.trees))}, std::move(p.reps), weight});
    }
    return out;
  }

  std::vector<InstanceOption> item(const SchematicTree& schema) const {
    if (schema.annotation() == Annotation::None) return one(schema);
    const std::vector<InstanceOption> single = one(schema);
    const std::size_t min_copies = schema.annotation() == Annotation::Plus ? 1 : 0;
    std::vector<InstanceOption> out;
    std::vector<InstanceOption> layer{InstanceOption{}};
    for (std::size_t copies = 0;; ++copies) {
      if (copies >= min_copies) {
        for (const InstanceOption& option : layer) {
          InstanceOption tagged{option.trees, {copies}, option.weight};
          tagged.reps.insert(tagged.reps.end(), option.reps.begin(), option.reps.end());
          out.push_back(std::move(tagged));
        }
      }
      if (!budget_ && copies == max_reps_) break;
      std::vector<InstanceOption> next;
      for (const InstanceOption& left : layer) {
        for (const InstanceOption& right : single) {
          if (!fits(left.weight + right.weight)) continue;
          next.push_back(concat(left, right));
        }
      }
      if (next.empty()) break;
      layer = std::move(next);
    }
    return out;
  }

 private:
  bool fits(std::size_t weight) const { return !budget_ || weight <= *budget_; }

  static InstanceOption concat(const InstanceOption& left, const InstanceOption& right) {
    InstanceOption out = left;
    out.trees.insert(out.trees.end(), right.trees.begin(), right.trees.end());
    out.reps.insert(out.reps.end(), right.reps.begin(), right.reps.end());
    out.weight += right.weight;
    return out;
  }

  std::size_t max_reps_;
  std::optional<std::size_t> budget_;
};

}  // namespace

bool instantiates(std::span<const SyntaxTree> trees, const SchematicTree& schema) {
  return match_sequence(trees, schema);
}

bool instantiates(const SyntaxTree& tree, const SchematicTree& schema) {
  return match_sequence(std::span<const SyntaxTree>(&tree, 1), schema);
}

SyntaxTree instantiate(const SchematicTree& schema, std::span<const std::size_t> repetitions) {
  std::size_t pos = 0;
  SyntaxTree out = build_one(schema, repetitions, pos);
  if (pos != repetitions.size()) throw Error(ErrorCode::InvalidTrace, "repetition vector too long");
  return out;
}

std::vector<Instantiation> enumerate_instantiations_with_reps(const SchematicTree& schema, std::size_t max_reps) {
  std::vector<InstanceOption> options = InstanceExpander(max_reps, std::nullopt).one(schema);
  std::sort(options.begin(), options.end(), [](const InstanceOption& a, const InstanceOption& b) {
    return std::tie(a.weight, a.reps) < std::tie(b.weight, b.reps);
  });
  std::set<SyntaxTree> seen;
  std::vector<Instantiation> out;
  for (InstanceOption& option : options) {
    SyntaxTree& tree = option.trees.front();
    if (!seen.insert(tree).second) continue;
    out.push_back(Instantiation{std::move(tree), std::move(option.reps)});
  }
  return out;
}

std::vector<SyntaxTree> enumerate_instantiations(const SchematicTree& schema, std::size_t max_reps) {
  std::vector<SyntaxTree> out;
  for (Instantiation& inst : enumerate_instantiations_with_reps(schema, max_reps)) out.push_back(std::move(inst.tree));
  return out;
}

// ---------------------------------------------------------------------------
// Restricted substitution

std::optional<std::string> path_conflict(const SyntaxTree& host, const TreeAddress& address,
                                         const SyntaxTree& filler) {
  const std::set<std::string> path = path_labels(host, address);
  const std::set<std::string> labels = nonterminal_labels(filler);
  for (const std::string& label : path) {
    if (labels.contains(label)) return label;
  }
  return std::nullopt;
}

SyntaxTree substitute_stg(const SyntaxTree& host, const TreeAddress& address, const SyntaxTree& filler) {
  const SyntaxTree& site = subtree_at(host, address);
  if (!site.is_leaf() || !site.label().is_nonterminal()) {
    throw Error(ErrorCode::NotASubstitutionSite, address.to_string());
  }
  if (site.label() != filler.label()) {
    throw Error(ErrorCode::LabelMismatch, site.label().text + " vs " + filler.label().text);
  }
  if (auto conflict = path_conflict(host, address, filler)) throw Error(ErrorCode::PathRecursion, *conflict);
  return replace_at(host, address, filler);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

using TokenBag = std::map<std::string, std::size_t>;

TokenBag bag_of(const Sentence& sentence) {
  TokenBag bag;
  for (const std::string& token : sentence) ++bag[token];
  return bag;
}

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
  std::vector<std::size_t> reps;
  struct Filler {
    TreeAddress address;
    std::set<std::string> path;
    std::shared_ptr<const DerivNode> node;
  };
  std::vector<Filler> fillers;
};

using DerivKey = std::vector<std::pair<std::vector<std::size_t>, std::string>>;

struct Partial {
  SyntaxTree tree;
  std::size_t length = 0;
  std::set<std::string> labels;
  std::shared_ptr<const DerivNode> deriv;
  DerivKey key;
};

class StgEnumerator {
 public:
  StgEnumerator(const StgGrammar& grammar, std::optional<TokenBag> target)
      : grammar_(grammar), target_(std::move(target)) {
    compute_reachability();
  }

  const std::vector<Partial>& derive(const std::string& label, const std::set<std::string>& forbidden,
                                     std::size_t budget) {
    std::set<std::string> relevant;
    const std::set<std::string>& reach = reach_.at(label);
    for (const std::string& f : forbidden) {
      if (reach.contains(f)) relevant.insert(f);
    }
    auto key = std::make_tuple(label, relevant, budget);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Partial> results = compute(label, relevant, budget);
    return memo_.emplace(std::move(key), std::move(results)).first->second;
  }

 private:
  void compute_reachability() {
    std::map<std::string, std::set<std::string>> direct;
    for (const std::string& nt : grammar_.nonterminals) direct[nt].insert(nt);
    for (const auto& [name, tree] : grammar_.initial_trees) {
      for (const std::string& label : nonterminal_labels(tree)) direct[tree.label().text].insert(label);
    }
    reach_ = direct;
    for (bool changed = true; changed;) {
      changed = false;
      for (auto& [label, set] : reach_) {
        std::set<std::string> grown = set;
        for (const std::string& r : set) {
          if (auto it = reach_.find(r); it != reach_.end()) grown.insert(it->second.begin(), it->second.end());
        }
        if (grown.size() != set.size()) {
          set = std::move(grown);
          changed = true;
        }
      }
    }
  }

  std::vector<Partial> compute(const std::string& label, const std::set<std::string>& forbidden,
                               std::size_t budget) {
    std::vector<Partial> out;
    if (forbidden.contains(label)) return out;
    for (const auto& [name, schema] : grammar_.initial_trees) {
      if (schema.label().text != label || !schema.label().is_nonterminal()) continue;
      if (is_empty_sentence_tree(grammar_, schema)) {
        auto node = std::make_shared<DerivNode>(DerivNode{name, {}, {}});
        SyntaxTree tree(schema.label(), {SyntaxTree(Symbol::epsilon())});
        out.push_back(Partial{std::move(tree), 0, {label}, node, {{{}, name}}});
        continue;
      }
      if (schema.is_leaf()) continue;
      for (InstanceOption& option : InstanceExpander(0, budget).one(schema)) {
        SyntaxTree& instance = option.trees.front();
        if (instance.is_leaf()) continue;
        std::set<std::string> labels = nonterminal_labels(instance);
        if (std::any_of(labels.begin(), labels.end(), [&](const std::string& l) { return forbidden.contains(l); })) {
          continue;
        }
        if (target_ && !fits_bag(instance, *target_)) continue;
        fill_sites(name, option.reps, instance, std::move(labels), forbidden, budget, out);
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const Partial& a, const Partial& b) {
      return std::tie(a.length, a.key) < std::tie(b.length, b.key);
    });
    std::set<SyntaxTree> seen;
    std::vector<Partial> unique;
    for (Partial& p : out) {
      if (seen.insert(p.tree).second) unique.push_back(std::move(p));
    }
    return unique;
  }

  void fill_sites(const std::string& name, const std::vector<std::size_t>& reps, const SyntaxTree& instance,
                  std::set<std::string> labels, const std::set<std::string>& forbidden, std::size_t budget,
                  std::vector<Partial>& out) {
    const std::vector<TreeAddress> sites = nonterminal_leaves(instance);
    const std::size_t fixed = terminal_count(instance);
    if (fixed + sites.size() > budget) return;

    std::vector<std::set<std::string>> site_paths;
    for (const TreeAddress& site : sites) site_paths.push_back(path_labels(instance, site));

    DerivNode base{name, reps, {}};
    DerivKey base_key{{reps, name}};

    std::function<void(std::size_t, const SyntaxTree&, std::size_t, std::set<std::string>&, DerivNode&, DerivKey&)>
        step = [&](std::size_t i, const SyntaxTree& current, std::size_t used, std::set<std::string>& acc,
                   DerivNode& node, DerivKey& key) {
          if (i == sites.size()) {
            if (target_ && !fits_bag(current, *target_)) return;
            out.push_back(Partial{current, used, acc, std::make_shared<DerivNode>(node), key});
            return;
          }
          const std::string& site_label = subtree_at(instance, sites[i]).label().text;
          std::set<std::string> below = forbidden;
          below.insert(site_paths[i].begin(), site_paths[i].end());
          const std::size_t later = sites.size() - i - 1;
          if (used + later > budget) return;
          const std::size_t room = budget - used - later;
          // Copy: derive() may grow the memo and invalidate references into it.
          const std::vector<Partial> fillers = derive(site_label, below, room);
          for (const Partial& filler : fillers) {
            if (filler.length > room) continue;
            std::set<std::string> grown = acc;
            grown.insert(filler.labels.begin(), filler.labels.end());
            node.fillers.push_back({sites[i], site_paths[i], filler.deriv});
            const std::size_t key_size = key.size();
            key.insert(key.end(), filler.key.begin(), filler.key.end());
            step(i + 1, replace_at(current, sites[i], filler.tree), used + filler.length, grown, node, key);
            key.resize(key_size);
            node.fillers.pop_back();
          }
        };
    step(0, instance, fixed, labels, base, base_key);
  }

  const StgGrammar& grammar_;
  std::optional<TokenBag> target_;
  std::map<std::string, std::set<std::string>> reach_;
  std::map<std::tuple<std::string, std::set<std::string>, std::size_t>, std::vector<Partial>> memo_;
};

std::size_t flatten(const DerivNode& node, DerivationTrace& trace) {
  trace.steps.push_back(InstantiateStep{node.tree_name, node.reps});
  std::size_t host = trace.steps.size() - 1;
  for (const DerivNode::Filler& filler : node.fillers) {
    const std::size_t filler_id = flatten(*filler.node, trace);
    trace.steps.push_back(SubstituteStep{host, filler.address, filler_id, filler.path});
    host = trace.steps.size() - 1;
  }
  return host;
}

std::vector<Derivation> run_enumeration(const StgGrammar& grammar, std::size_t max_len,
                                        std::optional<TokenBag> target) {
  require_valid(grammar);
  if (!grammar.nonterminals.contains(grammar.start)) return {};
  StgEnumerator enumerator(grammar, std::move(target));
  std::vector<Derivation> out;
  for (const Partial& p : enumerator.derive(grammar.start, {}, max_len)) {
    DerivationTrace trace;
    flatten(*p.deriv, trace);
    out.push_back(Derivation{p.tree, std::move(trace)});
  }
  return out;
}

}  // namespace

std::vector<Derivation> enumerate_stg(const StgGrammar& grammar, std::size_t max_len) {
  return run_enumeration(grammar, max_len, std::nullopt);
}

std::vector<Derivation> derive_stg(const StgGrammar& grammar, const Sentence& sentence) {
  std::vector<Derivation> out;
  for (Derivation& d : run_enumeration(grammar, sentence.size(), bag_of(sentence))) {
    if (yield_tokens(d.tree) == sentence) out.push_back(std::move(d));
  }
  return out;
}

SyntaxTree replay_stg(const StgGrammar& grammar, const DerivationTrace& trace) {
  TraceOps ops;
  ops.instantiate = [&](const InstantiateStep& step) {
    auto it = grammar.initial_trees.find(step.tree);
    if (it == grammar.initial_trees.end()) throw Error(ErrorCode::InvalidTrace, "no initial tree " + step.tree);
    if (is_empty_sentence_tree(grammar, it->second)) {
      return SyntaxTree(it->second.label(), {SyntaxTree(Symbol::epsilon())});
    }
    return instantiate(it->second, step.repetitions);
  };
  ops.substitute = [](const SyntaxTree& host, const SubstituteStep& step, const SyntaxTree& filler) {
    if (step.path_labels && *step.path_labels != path_labels(host, step.address)) {
      throw Error(ErrorCode::InvalidTrace, "recorded path labels differ at " + step.address.to_string());
    }
    return substitute_stg(host, step.address, filler);
  };
  return replay_trace(trace, ops);
}

bool member_stg(const StgGrammar& grammar, const Sentence& sentence) {
  require_valid(grammar);
  for (const std::string& token : sentence) {
    if (!grammar.terminals.contains(token)) throw Error(ErrorCode::UnknownToken, token);
  }
  return automaton_member(compile_stg_to_automaton(grammar), sentence).accepted;
}

}  // namespace stgkit
