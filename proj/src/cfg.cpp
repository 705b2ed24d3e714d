#include "stgkit/cfg.hpp"

#include <functional>
#include <limits>
#include <map>

namespace stgkit {

std::string print_production(const Production& production) {
  std::string out = production.lhs + " ->";
  if (production.rhs.empty()) return out + " " + std::string(kEpsilonToken);
  for (const Symbol& s : production.rhs) out += " " + s.text;
  return out;
}

namespace {

std::set<std::string> nullable_nonterminals(const Cfg& grammar) {
  std::set<std::string> nullable;
  for (bool changed = true; changed;) {
    changed = false;
    for (const Production& p : grammar.productions) {
      if (nullable.contains(p.lhs)) continue;
      bool all = true;
      for (const Symbol& s : p.rhs) all = all && s.is_nonterminal() && nullable.contains(s.text);
      if (all) {
        nullable.insert(p.lhs);
        changed = true;
      }
    }
  }
  return nullable;
}

}  // namespace

EarleyRecognizer::EarleyRecognizer(const Cfg& grammar)
    : grammar_(&grammar), nullable_(nullable_nonterminals(grammar)) {
  sets_.emplace_back();
  for (std::size_t p = 0; p < grammar.productions.size(); ++p) {
    if (grammar.productions[p].lhs == grammar.start) add(sets_[0], {p, 0, 0});
  }
  close(0);
}

void EarleyRecognizer::add(ItemSet& set, Item item) {
  if (set.seen.insert(item).second) set.items.push_back(item);
}

void EarleyRecognizer::close(std::size_t k) {
  const auto& prods = grammar_->productions;
  for (std::size_t i = 0; i < sets_[k].items.size(); ++i) {
    const Item item = sets_[k].items[i];
    const Production& p = prods[item.production];
    if (item.dot == p.rhs.size()) {
      for (std::size_t j = 0; j < sets_[item.origin].items.size(); ++j) {
        const Item waiting = sets_[item.origin].items[j];
        const Production& w = prods[waiting.production];
        if (waiting.dot < w.rhs.size() && w.rhs[waiting.dot].is_nonterminal() && w.rhs[waiting.dot].text == p.lhs) {
          add(sets_[k], {waiting.production, waiting.dot + 1, waiting.origin});
        }
      }
      continue;
    }
    const Symbol& next = p.rhs[item.dot];
    if (!next.is_nonterminal()) continue;
    for (std::size_t q = 0; q < prods.size(); ++q) {
      if (prods[q].lhs == next.text) add(sets_[k], {q, 0, k});
    }
    if (nullable_.contains(next.text)) add(sets_[k], {item.production, item.dot + 1, item.origin});
  }
}

void EarleyRecognizer::push(const std::string& token) {
  ItemSet next;
  for (const Item& item : sets_.back().items) {
    const Production& p = grammar_->productions[item.production];
    if (item.dot < p.rhs.size() && p.rhs[item.dot].is_terminal() && p.rhs[item.dot].text == token) {
      add(next, {item.production, item.dot + 1, item.origin});
    }
  }
  sets_.push_back(std::move(next));
  close(sets_.size() - 1);
}

void EarleyRecognizer::pop() {
  if (sets_.size() > 1) sets_.pop_back();
}

bool EarleyRecognizer::accepts() const {
  for (const Item& item : sets_.back().items) {
    const Production& p = grammar_->productions[item.production];
    if (item.origin == 0 && item.dot == p.rhs.size() && p.lhs == grammar_->start) return true;
  }
  return false;
}

std::set<std::string> EarleyRecognizer::expected_terminals() const {
  std::set<std::string> out;
  for (const Item& item : sets_.back().items) {
    const Production& p = grammar_->productions[item.production];
    if (item.dot < p.rhs.size() && p.rhs[item.dot].is_terminal()) out.insert(p.rhs[item.dot].text);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parse counting

namespace {

struct Count {
  std::uint64_t n = 0;
  bool infinite = false;
  bool saturated = false;

  bool zero() const { return n == 0 && !infinite; }
  friend bool operator==(const Count&, const Count&) = default;
};

Count add(Count a, const Count& b) {
  Count out;
  out.infinite = a.infinite || b.infinite;
  out.saturated = a.saturated || b.saturated;
  if (a.n > std::numeric_limits<std::uint64_t>::max() - b.n) {
    out.n = std::numeric_limits<std::uint64_t>::max();
    out.saturated = true;
  } else {
    out.n = a.n + b.n;
  }
  return out;
}

Count mul(const Count& a, const Count& b) {
  if (a.zero() || b.zero()) return {};
  Count out;
  out.infinite = a.infinite || b.infinite;
  out.saturated = a.saturated || b.saturated;
  if (a.n != 0 && b.n > std::numeric_limits<std::uint64_t>::max() / a.n) {
    out.n = std::numeric_limits<std::uint64_t>::max();
    out.saturated = true;
  } else {
    out.n = a.n * b.n;
  }
  if (out.infinite && out.n == 0) out.n = 1;
  return out;
}

class InsideCounter {
 public:
  InsideCounter(const Cfg& grammar, const Sentence& sentence) : g_(grammar), w_(sentence) {
    const std::size_t n = w_.size();
    table_.assign(n + 1, std::vector<std::map<std::string, Count>>(n + 1));
  }

  Count run() {
    const std::size_t n = w_.size();
    const std::size_t rounds = g_.nonterminals.size() + 1;
    for (std::size_t len = 0; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        const std::size_t j = i + len;
        for (std::size_t r = 0; r < rounds; ++r) {
          if (!round(i, j, false)) break;
        }
        // Entries still growing sit on a unit or empty cycle.
        if (round(i, j, true)) {
          for (std::size_t r = 0; r < rounds; ++r) {
            if (!round(i, j, false)) break;
          }
        }
      }
    }
    return lookup(g_.start, 0, n);
  }

 private:
  // Recomputes every nonterminal over span [i, j). Returns true if anything changed;
  // with `mark_growing`, changed entries become infinite.
  bool round(std::size_t i, std::size_t j, bool mark_growing) {
    std::map<std::string, Count> fresh;
    for (const Production& p : g_.productions) fresh[p.lhs] = add(fresh[p.lhs], sequence(p.rhs, 0, i, j));
    bool changed = false;
    for (auto& [label, value] : fresh) {
      Count& slot = table_[i][j][label];
      if (slot == value) continue;
      changed = true;
      if (mark_growing) value.infinite = true;
      slot = value;
    }
    return changed;
  }

  // Ways rhs[d..] derives w[i, j).
  Count sequence(const std::vector<Symbol>& rhs, std::size_t d, std::size_t i, std::size_t j) const {
    if (d == rhs.size()) return i == j ? Count{1} : Count{};
    const Symbol& x = rhs[d];
    if (x.is_terminal()) {
      if (i < j && w_[i] == x.text) return sequence(rhs, d + 1, i + 1, j);
      return {};
    }
    Count total;
    for (std::size_t k = i; k <= j; ++k) {
      Count head = lookup(x.text, i, k);
      if (head.zero()) continue;
      total = add(total, mul(head, sequence(rhs, d + 1, k, j)));
    }
    return total;
  }

  Count lookup(const std::string& label, std::size_t i, std::size_t j) const {
    const auto& cell = table_[i][j];
    auto it = cell.find(label);
    return it == cell.end() ? Count{} : it->second;
  }

  const Cfg& g_;
  const Sentence& w_;
  std::vector<std::vector<std::map<std::string, Count>>> table_;
};

}  // namespace

ParseCount cfg_parse_count(const Cfg& grammar, const Sentence& sentence) {
  Count c = InsideCounter(grammar, sentence).run();
  ParseCount out;
  out.accepted = !c.zero();
  out.count = c.n;
  out.saturated = c.saturated;
  out.infinite = c.infinite;
  return out;
}

bool cfg_member(const Cfg& grammar, const Sentence& sentence) {
  for (const std::string& token : sentence) {
    if (!grammar.terminals.contains(token)) throw Error(ErrorCode::UnknownToken, token);
  }
  EarleyRecognizer recognizer(grammar);
  for (const std::string& token : sentence) {
    recognizer.push(token);
    if (!recognizer.viable()) return false;
  }
  return recognizer.accepts();
}

std::set<Sentence> CfgChartSource::bounded_language(std::size_t max_len) const {
  std::set<Sentence> out;
  EarleyRecognizer recognizer(grammar_);
  Sentence prefix;
  std::function<void()> walk = [&]() {
    if (recognizer.accepts()) out.insert(prefix);
    if (prefix.size() == max_len) return;
    for (const std::string& token : recognizer.expected_terminals()) {
      recognizer.push(token);
      prefix.push_back(token);
      walk();
      prefix.pop_back();
      recognizer.pop();
    }
  };
  walk();
  return out;
}

}  // namespace stgkit
