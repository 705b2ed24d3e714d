#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stgkit/trace.hpp"
#include "stgkit/tree.hpp"
#include "stgkit/validation.hpp"

namespace stgkit {

enum class Annotation { None, Plus, Star };

/// Ordered labeled tree whose non-root nodes may be marked `+` (one or more
/// copies) or `*` (zero or more copies).
class SchematicTree {
 public:
  SchematicTree(Symbol label, Annotation annotation = Annotation::None, std::vector<SchematicTree> children = {});

  const Symbol& label() const noexcept { return label_; }
  Annotation annotation() const noexcept { return annotation_; }
  std::span<const SchematicTree> children() const noexcept { return children_; }
  const SchematicTree& child(std::size_t index) const { return children_.at(index); }
  bool is_leaf() const noexcept { return children_.empty(); }

  SchematicTree with_annotation(Annotation annotation) const;

  friend bool operator==(const SchematicTree&, const SchematicTree&) = default;

 private:
  Symbol label_;
  Annotation annotation_ = Annotation::None;
  std::vector<SchematicTree> children_;
};

std::string print_schematic(const SchematicTree& tree);

/// Every nonterminal label in the schema, annotated or not.
std::set<std::string> nonterminal_labels(const SchematicTree& tree);

struct StgGrammar {
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::string start;
  std::map<std::string, SchematicTree> initial_trees;

  Alphabet alphabet() const { return Alphabet(nonterminals, terminals); }
  friend bool operator==(const StgGrammar&, const StgGrammar&) = default;
};

/// True for the one epsilon form an STG admits: an initial tree `(S <eps>)`
/// rooted in the start symbol. It contributes the empty sentence and nothing else.
bool is_empty_sentence_tree(const StgGrammar& grammar, const SchematicTree& tree);

ValidationReport validate_stg(const StgGrammar& grammar);

// Throws InvalidGrammar (carrying the first violation) when the grammar does not validate.
void require_valid(const StgGrammar& grammar);

// ---------------------------------------------------------------------------
// Instantiation

/// Decides whether `trees` instantiates `schema`: sequence length fits the root
/// annotation, every root label matches, and each tree's children split into
/// contiguous runs that instantiate the schema's children left to right.
bool instantiates(std::span<const SyntaxTree> trees, const SchematicTree& schema);

bool instantiates(const SyntaxTree& tree, const SchematicTree& schema);

/// Builds the instance described by a repetition vector: one copy count per
/// annotated node, consumed in preorder, copies expanded left to right.
/// Throws InvalidTrace when the vector is too short or too long.
SyntaxTree instantiate(const SchematicTree& schema, std::span<const std::size_t> repetitions);

struct Instantiation {
  SyntaxTree tree;
  std::vector<std::size_t> repetitions;
};

/// All single-tree instances using at most `max_reps` copies at every annotated
/// node, each distinct tree once, fewest nodes first and then by smallest
/// repetition vector. The schema root must be unannotated.
std::vector<Instantiation> enumerate_instantiations_with_reps(const SchematicTree& schema, std::size_t max_reps);

std::vector<SyntaxTree> enumerate_instantiations(const SchematicTree& schema, std::size_t max_reps);

// ---------------------------------------------------------------------------
// Restricted substitution

/// First nonterminal shared by the root-to-site path of `host` (site excluded)
/// and the labels of `filler`, if any.
std::optional<std::string> path_conflict(const SyntaxTree& host, const TreeAddress& address,
                                         const SyntaxTree& filler);

/// Errors: InvalidAddress, NotASubstitutionSite, LabelMismatch, PathRecursion.
SyntaxTree substitute_stg(const SyntaxTree& host, const TreeAddress& address, const SyntaxTree& filler);

// ---------------------------------------------------------------------------
// Tree set and string language

/// Complete trees rooted in the start symbol with yield length <= max_len, each
/// with one bottom-up trace. Ordered by yield length, then by the derivation's
/// repetition vectors and tree names in preorder. Throws InvalidGrammar.
std::vector<Derivation> enumerate_stg(const StgGrammar& grammar, std::size_t max_len);

/// Derivations whose yield is exactly `sentence` (same order as enumerate_stg).
std::vector<Derivation> derive_stg(const StgGrammar& grammar, const Sentence& sentence);

/// Rebuilds the tree a trace describes, re-checking every substitution.
SyntaxTree replay_stg(const StgGrammar& grammar, const DerivationTrace& trace);

/// Errors: InvalidGrammar, UnknownToken.
bool member_stg(const StgGrammar& grammar, const Sentence& sentence);

}  // namespace stgkit
