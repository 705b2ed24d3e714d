#include "stgkit/language.hpp"

#include <algorithm>

namespace stgkit {

FiniteSource::FiniteSource(std::set<std::string> terminals, std::set<Sentence> sentences)
    : terminals_(std::move(terminals)), sentences_(std::move(sentences)) {}

std::set<Sentence> FiniteSource::bounded_language(std::size_t max_len) const {
  std::set<Sentence> out;
  for (const Sentence& s : sentences_) {
    if (s.size() <= max_len) out.insert(s);
  }
  return out;
}

std::set<Sentence> AutomatonSource::bounded_language(std::size_t max_len) const {
  return automaton_language(machine_, max_len);
}

std::set<Sentence> StgEnumerationSource::bounded_language(std::size_t max_len) const {
  std::set<Sentence> out;
  for (const Derivation& d : enumerate_stg(grammar_, max_len)) out.insert(yield_tokens(d.tree));
  return out;
}

bool shortlex_less(const Sentence& lhs, const Sentence& rhs) {
  if (lhs.size() != rhs.size()) return lhs.size() < rhs.size();
  return lhs < rhs;
}

EquivResult bounded_equiv(const LanguageSource& lhs, const LanguageSource& rhs, std::size_t max_len) {
  if (lhs.terminals() != rhs.terminals()) {
    std::string detail = "{";
    for (const std::string& t : lhs.terminals()) detail += (detail.size() > 1 ? "," : "") + t;
    detail += "} vs {";
    const std::size_t mark = detail.size();
    for (const std::string& t : rhs.terminals()) detail += (detail.size() > mark ? "," : "") + t;
    throw Error(ErrorCode::AlphabetMismatch, detail + "}");
  }
  const std::set<Sentence> left = lhs.bounded_language(max_len);
  const std::set<Sentence> right = rhs.bounded_language(max_len);
  EquivResult result;
  auto consider = [&](const Sentence& s, Side side) {
    if (!result.counterexample || shortlex_less(s, *result.counterexample)) {
      result.equal = false;
      result.counterexample = s;
      result.accepted_by = side;
    }
  };
  for (const Sentence& s : left) {
    if (!right.contains(s)) consider(s, Side::Lhs);
  }
  for (const Sentence& s : right) {
    if (!left.contains(s)) consider(s, Side::Rhs);
  }
  return result;
}

}  // namespace stgkit
