#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>

#include "stgkit/automaton.hpp"
#include "stgkit/stg.hpp"
#include "stgkit/tree.hpp"

namespace stgkit {

/// Anything that can list its sentences up to a length bound.
class LanguageSource {
 public:
  virtual ~LanguageSource() = default;

  virtual const std::set<std::string>& terminals() const = 0;
  virtual std::set<Sentence> bounded_language(std::size_t max_len) const = 0;
  // How sentences are decided: "automaton", "chart", "enumeration" or "bounded-search".
  virtual std::string method() const = 0;
};

class FiniteSource : public LanguageSource {
 public:
  FiniteSource(std::set<std::string> terminals, std::set<Sentence> sentences);

  const std::set<std::string>& terminals() const override { return terminals_; }
  std::set<Sentence> bounded_language(std::size_t max_len) const override;
  std::string method() const override { return "enumeration"; }

 private:
  std::set<std::string> terminals_;
  std::set<Sentence> sentences_;
};

class AutomatonSource : public LanguageSource {
 public:
  explicit AutomatonSource(Automaton machine) : machine_(std::move(machine)) {}

  const std::set<std::string>& terminals() const override { return machine_.symbols; }
  std::set<Sentence> bounded_language(std::size_t max_len) const override;
  std::string method() const override { return "automaton"; }

 private:
  Automaton machine_;
};

/// Yields of enumerate_stg.
class StgEnumerationSource : public LanguageSource {
 public:
  explicit StgEnumerationSource(StgGrammar grammar) : grammar_(std::move(grammar)) {}

  const std::set<std::string>& terminals() const override { return grammar_.terminals; }
  std::set<Sentence> bounded_language(std::size_t max_len) const override;
  std::string method() const override { return "enumeration"; }

 private:
  StgGrammar grammar_;
};

/// Shortlex: shorter first, then token-wise lexicographic.
bool shortlex_less(const Sentence& lhs, const Sentence& rhs);

enum class Side { Lhs, Rhs };

struct EquivResult {
  bool equal = true;
  std::optional<Sentence> counterexample;  // shortlex-least disagreement
  Side accepted_by = Side::Lhs;            // the side whose language contains it
};

/// Compares the sublanguages of length <= max_len. Throws AlphabetMismatch
/// unless both sources declare the same terminal set.
EquivResult bounded_equiv(const LanguageSource& lhs, const LanguageSource& rhs, std::size_t max_len);

}  // namespace stgkit
