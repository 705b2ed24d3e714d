#include "stgkit/validation.hpp"

#include <functional>

namespace stgkit {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::StartNotNonterminal: return "StartNotNonterminal";
    case ViolationKind::OverlappingVocabulary: return "OverlappingVocabulary";
    case ViolationKind::InvalidToken: return "InvalidToken";
    case ViolationKind::UndeclaredLabel: return "UndeclaredLabel";
    case ViolationKind::KindMismatch: return "KindMismatch";
    case ViolationKind::TerminalInternal: return "TerminalInternal";
    case ViolationKind::TerminalRoot: return "TerminalRoot";
    case ViolationKind::AnnotatedRoot: return "AnnotatedRoot";
    case ViolationKind::EpsilonInStg: return "EpsilonInStg";
    case ViolationKind::SchematicAnnotationInTsg: return "SchematicAnnotationInTsg";
    case ViolationKind::SchematicAnnotationInTag: return "SchematicAnnotationInTag";
    case ViolationKind::MissingFoot: return "MissingFoot";
    case ViolationKind::MultipleFeet: return "MultipleFeet";
    case ViolationKind::FootLabelMismatch: return "FootLabelMismatch";
    case ViolationKind::FootNotFrontier: return "FootNotFrontier";
    case ViolationKind::NonlexicalAuxiliary: return "NonlexicalAuxiliary";
  }
  return "Unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  for (const Violation& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

void ValidationReport::add(ViolationKind kind, std::string tree, TreeAddress address, std::string message) {
  violations.push_back({kind, std::move(tree), std::move(address), std::move(message)});
}

void ValidationReport::warn(ViolationKind kind, std::string tree, TreeAddress address, std::string message) {
  warnings.push_back({kind, std::move(tree), std::move(address), std::move(message)});
}

namespace {

std::string describe(const Violation& v) {
  std::string line(to_string(v.kind));
  if (!v.tree.empty()) line += " tree=" + v.tree + " at=" + v.address.to_string();
  if (!v.message.empty()) line += ": " + v.message;
  return line;
}

std::string summarize(const ValidationReport& report) {
  std::string out = std::to_string(report.violations.size()) + " violation(s)";
  if (!report.violations.empty()) out += "; first: " + describe(report.violations.front());
  return out;
}

}  // namespace

std::vector<std::string> ValidationReport::lines() const {
  std::vector<std::string> out;
  for (const Violation& v : violations) out.push_back("violation " + describe(v));
  for (const Violation& v : warnings) out.push_back("warning " + describe(v));
  return out;
}

ValidationError::ValidationError(ValidationReport report)
    : Error(ErrorCode::ValidationFailed, summarize(report)), report_(std::move(report)) {}

void check_vocabulary(const std::set<std::string>& nonterminals, const std::set<std::string>& terminals,
                      const std::string& start, ValidationReport& report) {
  if (!nonterminals.contains(start)) {
    report.add(ViolationKind::StartNotNonterminal, "", {}, "start symbol '" + start + "' is not a declared nonterminal");
  }
  for (const std::string& t : terminals) {
    if (nonterminals.contains(t)) {
      report.add(ViolationKind::OverlappingVocabulary, "", {}, "'" + t + "' declared as terminal and nonterminal");
    }
  }
  for (const auto* set : {&nonterminals, &terminals}) {
    for (const std::string& token : *set) {
      if (!is_valid_token(token) || token == kEpsilonToken) {
        report.add(ViolationKind::InvalidToken, "", {}, "'" + token + "' cannot be declared");
      }
    }
  }
}

void check_tree_labels(const SyntaxTree& tree, const std::string& name, const std::set<std::string>& nonterminals,
                       const std::set<std::string>& terminals, ValidationReport& report) {
  if (!tree.label().is_nonterminal()) {
    report.add(ViolationKind::TerminalRoot, name, {}, "root '" + tree.label().text + "' is not a nonterminal");
  }
  TreeAddress here;
  std::function<void(const SyntaxTree&)> walk = [&](const SyntaxTree& node) {
    const Symbol& label = node.label();
    if (label.is_epsilon()) {
      if (label.text != kEpsilonToken) {
        report.add(ViolationKind::InvalidToken, name, here, "epsilon leaf must be written " + std::string(kEpsilonToken));
      }
    } else if (!is_valid_token(label.text)) {
      report.add(ViolationKind::InvalidToken, name, here, "'" + label.text + "'");
    } else {
      const std::set<std::string>& own = label.is_nonterminal() ? nonterminals : terminals;
      const std::set<std::string>& other = label.is_nonterminal() ? terminals : nonterminals;
      if (!own.contains(label.text)) {
        if (other.contains(label.text) && label.is_nonterminal() && !node.is_leaf()) {
          report.add(ViolationKind::TerminalInternal, name, here, "terminal '" + label.text + "' has children");
        } else if (other.contains(label.text)) {
          report.add(ViolationKind::KindMismatch, name, here, "'" + label.text + "' used with the wrong kind");
        } else {
          report.add(ViolationKind::UndeclaredLabel, name, here, "'" + label.text + "'");
        }
      }
    }
    for (std::size_t i = 0; i < node.arity(); ++i) {
      here.path.push_back(i);
      walk(node.child(i));
      here.path.pop_back();
    }
  };
  walk(tree);
}

}  // namespace stgkit
