#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stgkit/error.hpp"
#include "stgkit/tree.hpp"

namespace stgkit {

enum class ViolationKind {
  StartNotNonterminal,
  OverlappingVocabulary,
  InvalidToken,
  UndeclaredLabel,
  KindMismatch,
  TerminalInternal,
  TerminalRoot,
  AnnotatedRoot,
  EpsilonInStg,
  SchematicAnnotationInTsg,
  SchematicAnnotationInTag,
  MissingFoot,
  MultipleFeet,
  FootLabelMismatch,
  FootNotFrontier,
  NonlexicalAuxiliary,  // warning only
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string tree;  // empty for grammar-level violations
  TreeAddress address;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<Violation> warnings;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const;
  void add(ViolationKind kind, std::string tree, TreeAddress address, std::string message);
  void warn(ViolationKind kind, std::string tree, TreeAddress address, std::string message);

  std::vector<std::string> lines() const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// Shared checks for the vocabulary declarations of every formalism.
void check_vocabulary(const std::set<std::string>& nonterminals, const std::set<std::string>& terminals,
                      const std::string& start, ValidationReport& report);

// Label checks shared by TSG and TAG elementary trees.
void check_tree_labels(const SyntaxTree& tree, const std::string& name, const std::set<std::string>& nonterminals,
                       const std::set<std::string>& terminals, ValidationReport& report);

}  // namespace stgkit
