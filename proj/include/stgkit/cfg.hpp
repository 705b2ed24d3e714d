#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "stgkit/language.hpp"
#include "stgkit/tree.hpp"

namespace stgkit {

struct Production {
  std::string lhs;
  std::vector<Symbol> rhs;  // terminals and nonterminals; empty for an epsilon rule

  friend auto operator<=>(const Production&, const Production&) = default;
};

struct Cfg {
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::string start;
  std::vector<Production> productions;
};

/// `S -> a S b`; an empty right-hand side prints as `<eps>`.
std::string print_production(const Production& production);

/// Incremental Earley recognizer: feed tokens one at a time and undo with pop().
class EarleyRecognizer {
 public:
  explicit EarleyRecognizer(const Cfg& grammar);

  void push(const std::string& token);
  void pop();
  std::size_t position() const noexcept { return sets_.size() - 1; }

  bool accepts() const;
  // Terminals that some item of the current set is waiting for.
  std::set<std::string> expected_terminals() const;
  // False once no item survives, i.e. the input is no longer a viable prefix.
  bool viable() const { return !sets_.back().items.empty(); }

 private:
  struct Item {
    std::size_t production;
    std::size_t dot;
    std::size_t origin;
    friend auto operator<=>(const Item&, const Item&) = default;
  };
  struct ItemSet {
    std::vector<Item> items;
    std::set<Item> seen;
  };

  void close(std::size_t k);
  void add(ItemSet& set, Item item);

  const Cfg* grammar_;
  std::set<std::string> nullable_;
  std::vector<ItemSet> sets_;
};

struct ParseCount {
  bool accepted = false;
  std::uint64_t count = 0;  // distinct parse trees, saturating
  bool saturated = false;
  bool infinite = false;  // unit or empty cycles give unboundedly many parses
};

/// Number of parse trees of `sentence`, by an inside computation over spans.
ParseCount cfg_parse_count(const Cfg& grammar, const Sentence& sentence);

/// Errors: UnknownToken.
bool cfg_member(const Cfg& grammar, const Sentence& sentence);

/// Enumerates the bounded language by walking viable prefixes with the recognizer.
class CfgChartSource : public LanguageSource {
 public:
  explicit CfgChartSource(Cfg grammar) : grammar_(std::move(grammar)) {}

  const std::set<std::string>& terminals() const override { return grammar_.terminals; }
  std::set<Sentence> bounded_language(std::size_t max_len) const override;
  std::string method() const override { return "chart"; }

  const Cfg& grammar() const noexcept { return grammar_; }

 private:
  Cfg grammar_;
};

}  // namespace stgkit
