#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stgkit/cfg.hpp"
#include "stgkit/language.hpp"
#include "stgkit/trace.hpp"
#include "stgkit/tree.hpp"
#include "stgkit/validation.hpp"

namespace stgkit {

struct TsgGrammar {
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::string start;
  std::map<std::string, SyntaxTree> elementary_trees;

  Alphabet alphabet() const { return Alphabet(nonterminals, terminals); }
  friend bool operator==(const TsgGrammar&, const TsgGrammar&) = default;
};

/// Recursion of a label below itself is allowed.
ValidationReport validate_tsg(const TsgGrammar& grammar);

/// Plain substitution at a nonterminal leaf; no path restriction.
/// Errors: InvalidAddress, NotASubstitutionSite, LabelMismatch.
SyntaxTree substitute_tsg(const SyntaxTree& host, const TreeAddress& address, const SyntaxTree& filler);

/// One production per elementary tree: root label -> frontier without epsilon leaves.
/// Throws InvalidGrammar.
Cfg extract_cfg(const TsgGrammar& grammar);

struct TsgEnumeration {
  std::vector<Derivation> derivations;
  // True when the length bound alone guarantees completeness (no epsilon leaves
  // and no tree whose frontier is a single nonterminal).
  bool length_complete = true;
  // Substitution budget applied when length_complete is false.
  std::optional<std::size_t> step_bound;
};

/// Complete derived trees rooted at the start symbol with yield length <= max_len,
/// each with a bottom-up trace; ordered by yield length, then by the elementary
/// tree names in preorder. Throws InvalidGrammar.
TsgEnumeration enumerate_tsg(const TsgGrammar& grammar, std::size_t max_len);

std::vector<Derivation> derive_tsg(const TsgGrammar& grammar, const Sentence& sentence);

SyntaxTree replay_tsg(const TsgGrammar& grammar, const DerivationTrace& trace);

class TsgEnumerationSource : public LanguageSource {
 public:
  explicit TsgEnumerationSource(TsgGrammar grammar) : grammar_(std::move(grammar)) {}

  const std::set<std::string>& terminals() const override { return grammar_.terminals; }
  std::set<Sentence> bounded_language(std::size_t max_len) const override;
  std::string method() const override { return "enumeration"; }

 private:
  TsgGrammar grammar_;
};

}  // namespace stgkit
