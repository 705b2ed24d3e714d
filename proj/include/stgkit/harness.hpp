#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stgkit/grammar_io.hpp"
#include "stgkit/language.hpp"

namespace stgkit {

/// The strongest available decision procedure for a grammar: compiled
/// automaton for STG, chart over the extracted CFG for TSG, bounded search for TAG.
std::unique_ptr<LanguageSource> language_source(const Grammar& grammar,
                                                std::optional<std::size_t> tag_max_steps = std::nullopt);

struct CompareResult {
  EquivResult equiv;
  std::string lhs_method;
  std::string rhs_method;
  // e.g. TagCompletenessUnavailable when a TAG side is only step-bounded.
  std::vector<std::string> warnings;
};

/// Errors: AlphabetMismatch.
CompareResult compare_grammars(const Grammar& lhs, const Grammar& rhs, std::size_t max_len,
                               std::optional<std::size_t> tag_max_steps = std::nullopt);

struct MembershipVerdict {
  bool accepted = false;
  std::string method;  // automaton | chart | bounded-search
  std::string note;    // why a verdict was forced false, if it was
};

/// Membership by the strongest procedure; tokens outside the grammar's
/// terminals give a false verdict instead of an error.
MembershipVerdict grammar_member(const Grammar& grammar, const Sentence& sentence);

struct StageGrammar {
  std::string name;
  Grammar grammar;
};

struct StageVerdict {
  std::string name;
  Formalism formalism;
  MembershipVerdict verdict;
};

struct StageResult {
  Sentence sentence;
  std::optional<std::size_t> minimal_stage;  // 1-based
  std::vector<StageVerdict> per_stage;
};

/// Grammar files of a directory in file-name order; stage k is the k-th file.
std::vector<StageGrammar> load_stage_fixtures(const std::filesystem::path& directory);

StageResult classify_stage(const Sentence& sentence, const std::vector<StageGrammar>& stages);

}  // namespace stgkit
