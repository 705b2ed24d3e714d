#include "stgkit/harness.hpp"

#include <algorithm>
#include <stdexcept>

#include "stgkit/cfg.hpp"
#include "stgkit/regular_bridge.hpp"

namespace stgkit {

std::unique_ptr<LanguageSource> language_source(const Grammar& grammar, std::optional<std::size_t> tag_max_steps) {
  switch (formalism_of(grammar)) {
    case Formalism::Stg:
      return std::make_unique<AutomatonSource>(compile_stg_to_automaton(std::get<StgGrammar>(grammar)));
    case Formalism::Tsg:
      return std::make_unique<CfgChartSource>(extract_cfg(std::get<TsgGrammar>(grammar)));
    case Formalism::Tag:
      return std::make_unique<TagEnumerationSource>(std::get<TagGrammar>(grammar), tag_max_steps);
  }
  throw std::logic_error("unknown formalism");
}

CompareResult compare_grammars(const Grammar& lhs, const Grammar& rhs, std::size_t max_len,
                               std::optional<std::size_t> tag_max_steps) {
  CompareResult result;
  const auto left = language_source(lhs, tag_max_steps);
  const auto right = language_source(rhs, tag_max_steps);
  for (const auto& [grammar, side] : {std::pair{&lhs, "lhs"}, std::pair{&rhs, "rhs"}}) {
    if (formalism_of(*grammar) == Formalism::Tag && !complete_in_length(std::get<TagGrammar>(*grammar))) {
      result.warnings.push_back(std::string("TagCompletenessUnavailable: ") + side +
                                " has epsilon leaves or non-lexical auxiliary trees; its side is step-bounded");
    }
  }
  result.equiv = bounded_equiv(*left, *right, max_len);
  result.lhs_method = left->method();
  result.rhs_method = right->method();
  return result;
}

MembershipVerdict grammar_member(const Grammar& grammar, const Sentence& sentence) {
  MembershipVerdict verdict;
  const Formalism f = formalism_of(grammar);
  verdict.method = f == Formalism::Stg ? "automaton" : f == Formalism::Tsg ? "chart" : "bounded-search";
  const std::set<std::string>& terminals = terminals_of(grammar);
  for (const std::string& token : sentence) {
    if (!terminals.contains(token)) {
      verdict.note = "unknown token '" + token + "'";
      return verdict;
    }
  }
  switch (f) {
    case Formalism::Stg:
      verdict.accepted = member_stg(std::get<StgGrammar>(grammar), sentence);
      break;
    case Formalism::Tsg:
      verdict.accepted = cfg_member(extract_cfg(std::get<TsgGrammar>(grammar)), sentence);
      break;
    case Formalism::Tag:
      try {
        verdict.accepted = member_tag(std::get<TagGrammar>(grammar), sentence);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LengthCeilingExceeded) throw;
        verdict.note = e.what();
      }
      break;
  }
  return verdict;
}

std::vector<StageGrammar> load_stage_fixtures(const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    const std::string ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".stg" || ext == ".tsg" || ext == ".tag")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<StageGrammar> out;
  for (const auto& file : files) out.push_back(StageGrammar{file.filename().string(), load_grammar_file(file)});
  return out;
}

StageResult classify_stage(const Sentence& sentence, const std::vector<StageGrammar>& stages) {
  StageResult result{sentence, std::nullopt, {}};
  for (std::size_t i = 0; i < stages.size(); ++i) {
    StageVerdict v{stages[i].name, formalism_of(stages[i].grammar), grammar_member(stages[i].grammar, sentence)};
    if (v.verdict.accepted && !result.minimal_stage) result.minimal_stage = i + 1;
    result.per_stage.push_back(std::move(v));
  }
  return result;
}

}  // namespace stgkit
