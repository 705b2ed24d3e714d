#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "stgkit/tree.hpp"

namespace stgkit {

struct InstantiateStep {
  std::string tree;
  // Copy counts at annotated schema nodes, preorder; empty outside STG.
  std::vector<std::size_t> repetitions;
};

struct SubstituteStep {
  std::size_t host = 0;
  TreeAddress address;
  std::size_t filler = 0;
  // Path labels checked against the filler; only recorded by the STG engine.
  std::optional<std::set<std::string>> path_labels;
};

struct AdjoinStep {
  std::size_t host = 0;
  TreeAddress address;
  std::string aux;
};

using TraceStep = std::variant<InstantiateStep, SubstituteStep, AdjoinStep>;

/// Ordered record of derivation steps. Step ids are positions in `steps`;
/// each step's result is a tree, and the last step's tree is the derived tree.
struct DerivationTrace {
  std::vector<TraceStep> steps;

  std::size_t operation_count() const;
};

struct Derivation {
  SyntaxTree tree;
  DerivationTrace trace;
};

struct TraceOps {
  std::function<SyntaxTree(const InstantiateStep&)> instantiate;
  std::function<SyntaxTree(const SyntaxTree& host, const SubstituteStep&, const SyntaxTree& filler)> substitute;
  std::function<SyntaxTree(const SyntaxTree& host, const AdjoinStep&)> adjoin;
};

// Throws InvalidTrace on forward references or an empty trace.
SyntaxTree replay_trace(const DerivationTrace& trace, const TraceOps& ops);

std::vector<std::string> format_trace(const DerivationTrace& trace);

}  // namespace stgkit
