#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stgkit/language.hpp"
#include "stgkit/trace.hpp"
#include "stgkit/tree.hpp"
#include "stgkit/validation.hpp"

namespace stgkit {

/// A tree with foot nodes marked by address. Well-formed auxiliary trees have
/// exactly one foot; the list form lets validation report missing or extra feet.
struct AuxiliaryTree {
  SyntaxTree tree;
  std::vector<TreeAddress> feet;

  // Throws InvalidGrammar unless there is exactly one foot.
  const TreeAddress& foot() const;

  friend bool operator==(const AuxiliaryTree&, const AuxiliaryTree&) = default;
};

struct TagGrammar {
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::string start;
  std::map<std::string, SyntaxTree> initial_trees;
  std::map<std::string, AuxiliaryTree> auxiliary_trees;
  // Derived trees count only after at least one adjoining.
  bool require_adjoining = false;

  Alphabet alphabet() const { return Alphabet(nonterminals, terminals); }
  friend bool operator==(const TagGrammar&, const TagGrammar&) = default;
};

inline constexpr std::size_t kDefaultLengthCeiling = 20;

ValidationReport validate_tag(const TagGrammar& grammar);

/// True when every auxiliary tree has a terminal leaf and no tree has an
/// epsilon leaf, so the length bound alone limits derivations.
bool complete_in_length(const TagGrammar& grammar);

/// Splices `aux` in at an internal node: the subtree there moves to the foot.
/// The moved subtree's root becomes null-adjoin, as feet are.
/// Errors: InvalidAddress, NotAnAdjunctionSite, LabelMismatch, InvalidGrammar.
SyntaxTree adjoin(const SyntaxTree& host, const TreeAddress& address, const AuxiliaryTree& aux);

/// Errors: InvalidAddress, NotASubstitutionSite, LabelMismatch.
SyntaxTree substitute_tag(const SyntaxTree& host, const TreeAddress& address, const SyntaxTree& filler);

struct TagEnumeration {
  std::vector<Derivation> derivations;
  bool length_complete = false;
  std::size_t max_steps = 0;
};

/// Complete derived trees rooted at the start symbol reachable with at most
/// `max_steps` substitutions and adjoinings, with yield length <= max_len.
/// Ordered by yield length, then yield, then tree. Throws InvalidGrammar.
TagEnumeration enumerate_tag(const TagGrammar& grammar, std::size_t max_len, std::size_t max_steps);

/// Step budget used for membership: (|w| + 1) * (initial + auxiliary tree count).
std::size_t member_step_bound(const TagGrammar& grammar, std::size_t length);

/// Errors: InvalidGrammar, UnknownToken, LengthCeilingExceeded.
bool member_tag(const TagGrammar& grammar, const Sentence& sentence,
                std::size_t ceiling = kDefaultLengthCeiling);

std::vector<Derivation> derive_tag(const TagGrammar& grammar, const Sentence& sentence,
                                   std::size_t ceiling = kDefaultLengthCeiling);

SyntaxTree replay_tag(const TagGrammar& grammar, const DerivationTrace& trace);

/// Bounded search; when no step budget is given, member_step_bound(max_len) is used.
class TagEnumerationSource : public LanguageSource {
 public:
  explicit TagEnumerationSource(TagGrammar grammar, std::optional<std::size_t> max_steps = std::nullopt)
      : grammar_(std::move(grammar)), max_steps_(max_steps) {}

  const std::set<std::string>& terminals() const override { return grammar_.terminals; }
  std::set<Sentence> bounded_language(std::size_t max_len) const override;
  std::string method() const override { return "bounded-search"; }

  bool length_complete() const { return complete_in_length(grammar_); }

 private:
  TagGrammar grammar_;
  std::optional<std::size_t> max_steps_;
};

}  // namespace stgkit
