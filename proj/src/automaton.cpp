#include "stgkit/automaton.hpp"

#include <deque>
#include <functional>
#include <limits>
#include <map>

namespace stgkit {

std::size_t Automaton::transition_count() const {
  std::size_t count = 0;
  for (const State& s : states) count += s.moves.size() + s.empty_moves.size();
  return count;
}

namespace {

struct Fragment {
  std::size_t start;
  std::size_t accept;
};

class ThompsonBuilder {
 public:
  explicit ThompsonBuilder(Automaton& machine) : m_(machine) {}

  Fragment build(const Regex& r) {
    const std::size_t s = add();
    const std::size_t f = add();
    switch (r.op()) {
      case RegexOp::EmptySet:
        break;
      case RegexOp::EmptyString:
        link(s, f);
        break;
      case RegexOp::Literal:
        m_.states[s].moves.emplace_back(r.token(), f);
        break;
      case RegexOp::Concat: {
        std::size_t at = s;
        for (const Regex& part : r.parts()) {
          Fragment inner = build(part);
          link(at, inner.start);
          at = inner.accept;
        }
        link(at, f);
        break;
      }
      case RegexOp::Union:
        for (const Regex& part : r.parts()) {
          Fragment inner = build(part);
          link(s, inner.start);
          link(inner.accept, f);
        }
        break;
      case RegexOp::Star:
      case RegexOp::Plus: {
        Fragment inner = build(r.inner());
        link(s, inner.start);
        link(inner.accept, inner.start);
        link(inner.accept, f);
        if (r.op() == RegexOp::Star) link(s, f);
        break;
      }
    }
    return {s, f};
  }

 private:
  std::size_t add() {
    m_.states.emplace_back();
    return m_.states.size() - 1;
  }
  void link(std::size_t from, std::size_t to) { m_.states[from].empty_moves.push_back(to); }

  Automaton& m_;
};

using StateSet = std::vector<std::size_t>;  // sorted

StateSet closure(const Automaton& m, StateSet seed) {
  std::vector<char> seen(m.states.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t q : seed) {
    if (!seen[q]) {
      seen[q] = 1;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    const std::size_t q = stack.back();
    stack.pop_back();
    for (std::size_t r : m.states[q].empty_moves) {
      if (!seen[r]) {
        seen[r] = 1;
        stack.push_back(r);
      }
    }
  }
  StateSet out;
  for (std::size_t q = 0; q < seen.size(); ++q) {
    if (seen[q]) out.push_back(q);
  }
  return out;
}

StateSet step(const Automaton& m, const StateSet& from, const std::string& symbol) {
  StateSet next;
  for (std::size_t q : from) {
    for (const auto& [label, target] : m.states[q].moves) {
      if (label == symbol) next.push_back(target);
    }
  }
  return closure(m, std::move(next));
}

bool accepts(const Automaton& m, const StateSet& set) {
  for (std::size_t q : set) {
    if (m.accepting.contains(q)) return true;
  }
  return false;
}

// Fewest symbols needed to reach acceptance from each state (0-1 BFS backwards).
std::vector<std::size_t> distance_to_accept(const Automaton& m) {
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> reverse(m.states.size());
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    for (const auto& move : m.states[q].moves) reverse[move.second].emplace_back(q, 1);
    for (std::size_t r : m.states[q].empty_moves) reverse[r].emplace_back(q, 0);
  }
  std::vector<std::size_t> dist(m.states.size(), kInf);
  std::deque<std::size_t> queue;
  for (std::size_t q : m.accepting) {
    dist[q] = 0;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    const std::size_t q = queue.front();
    queue.pop_front();
    for (const auto& [p, cost] : reverse[q]) {
      if (dist[q] + cost < dist[p]) {
        dist[p] = dist[q] + cost;
        if (cost == 0) {
          queue.push_front(p);
        } else {
          queue.push_back(p);
        }
      }
    }
  }
  return dist;
}

}  // namespace

Automaton build_automaton(const Regex& expression, std::set<std::string> symbols) {
  Automaton machine;
  machine.symbols = std::move(symbols);
  machine.symbols.merge(literals_of(expression));
  Fragment whole = ThompsonBuilder(machine).build(expression);
  machine.start = whole.start;
  machine.accepting.insert(whole.accept);
  return machine;
}

MemberResult automaton_member(const Automaton& machine, const Sentence& sentence) {
  MemberResult result;
  StateSet current = closure(machine, {machine.start});
  for (const std::string& token : sentence) {
    if (!machine.symbols.contains(token)) {
      result.unknown_token = true;
      return result;
    }
    current = step(machine, current, token);
    if (current.empty()) return result;
  }
  result.accepted = accepts(machine, current);
  return result;
}

std::set<Sentence> automaton_language(const Automaton& machine, std::size_t max_len) {
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  const std::vector<std::size_t> dist = distance_to_accept(machine);

  // Lazily determinized view: subset id -> (states, accepting, remaining distance, transitions).
  struct Subset {
    StateSet states;
    bool accepting;
    std::size_t distance;
    std::map<std::string, std::size_t> next;  // absent = not computed yet
  };
  std::vector<Subset> subsets;
  std::map<StateSet, std::size_t> index;
  auto intern = [&](StateSet states) {
    if (auto it = index.find(states); it != index.end()) return it->second;
    std::size_t best = kInf;
    for (std::size_t q : states) best = std::min(best, dist[q]);
    const bool acc = accepts(machine, states);
    subsets.push_back(Subset{states, acc, best, {}});
    index.emplace(std::move(states), subsets.size() - 1);
    return subsets.size() - 1;
  };

  std::set<Sentence> out;
  Sentence prefix;
  std::function<void(std::size_t)> walk = [&](std::size_t id) {
    if (subsets[id].accepting) out.insert(prefix);
    if (prefix.size() == max_len) return;
    for (const std::string& symbol : machine.symbols) {
      std::size_t target;
      if (auto it = subsets[id].next.find(symbol); it != subsets[id].next.end()) {
        target = it->second;
      } else {
        target = intern(step(machine, subsets[id].states, symbol));
        subsets[id].next.emplace(symbol, target);
      }
      const std::size_t d = subsets[target].distance;
      if (d == kInf || prefix.size() + 1 + d > max_len) continue;
      prefix.push_back(symbol);
      walk(target);
      prefix.pop_back();
    }
  };
  const std::size_t root = intern(closure(machine, {machine.start}));
  if (subsets[root].distance <= max_len) walk(root);
  return out;
}

std::vector<std::string> describe_automaton(const Automaton& machine) {
  std::vector<std::string> lines;
  lines.push_back("states " + std::to_string(machine.state_count()) + " transitions " +
                  std::to_string(machine.transition_count()));
  lines.push_back("start " + std::to_string(machine.start));
  std::string acc = "accept";
  for (std::size_t q : machine.accepting) acc += " " + std::to_string(q);
  lines.push_back(acc);
  for (std::size_t q = 0; q < machine.states.size(); ++q) {
    for (const auto& [label, target] : machine.states[q].moves) {
      lines.push_back(std::to_string(q) + " " + label + " " + std::to_string(target));
    }
    for (std::size_t target : machine.states[q].empty_moves) {
      lines.push_back(std::to_string(q) + " <eps> " + std::to_string(target));
    }
  }
  return lines;
}

}  // namespace stgkit
