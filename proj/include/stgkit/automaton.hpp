#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stgkit/regex.hpp"
#include "stgkit/tree.hpp"

namespace stgkit {

/// Nondeterministic automaton with empty moves (Thompson construction).
struct Automaton {
  struct State {
    std::vector<std::pair<std::string, std::size_t>> moves;
    std::vector<std::size_t> empty_moves;
  };

  std::set<std::string> symbols;
  std::vector<State> states;
  std::size_t start = 0;
  std::set<std::size_t> accepting;

  std::size_t state_count() const noexcept { return states.size(); }
  std::size_t transition_count() const;
};

/// `symbols` is the declared alphabet; literals of the expression are added to it.
Automaton build_automaton(const Regex& expression, std::set<std::string> symbols = {});

struct MemberResult {
  bool accepted = false;
  bool unknown_token = false;  // some token was outside the machine's symbols
};

MemberResult automaton_member(const Automaton& machine, const Sentence& sentence);

/// Every accepted sentence of length <= max_len.
std::set<Sentence> automaton_language(const Automaton& machine, std::size_t max_len);

/// Line-oriented listing: header, start, accepting states, then one transition per line.
std::vector<std::string> describe_automaton(const Automaton& machine);

}  // namespace stgkit
