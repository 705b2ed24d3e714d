#include "doctest.h"
#include "oracles.hpp"
#include "stgkit/cfg.hpp"
#include "stgkit/harness.hpp"

using namespace stgkit;

namespace {

const std::string kSentence1 = "john has eaten an apple and fred has eaten peaches and a candy bar";
const std::string kSentence2 = "cookie monster tells grover to jump over the fence";
const std::string kSentence3 = "cookie monster touches grover after jumping over the fence";

}  // namespace

TEST_CASE("compare_grammars: reflexivity") {
  const Grammar coord = oracle::load("coord.stg");
  const CompareResult r = compare_grammars(coord, coord, 10);
  CHECK(r.equiv.equal);
  CHECK(r.lhs_method == "automaton");
  CHECK(r.warnings.empty());
}

TEST_CASE("compare_grammars: abplus against anbn") {
  const Grammar ab = oracle::load("abplus.stg");
  const Grammar anbn = oracle::load("anbn.tsg");
  const CompareResult r = compare_grammars(ab, anbn, 8);
  CHECK_FALSE(r.equiv.equal);
  CHECK(r.lhs_method == "automaton");
  CHECK(r.rhs_method == "chart");
  // Shortlex-least string in exactly one of the two languages, by brute force.
  std::optional<Sentence> least;
  bool in_lhs = false;
  const Cfg cfg = extract_cfg(std::get<TsgGrammar>(anbn));
  for (const Sentence& s : oracle::all_strings({"a", "b"}, 8)) {
    const bool l = !s.empty();
    const bool rr = oracle::cfg_derives(cfg, s, 5);
    if (l != rr) {
      least = s;
      in_lhs = l;
      break;
    }
  }
  REQUIRE(least.has_value());
  CHECK(r.equiv.counterexample == least);
  CHECK((r.equiv.accepted_by == Side::Lhs) == in_lhs);
  CHECK(r.equiv.counterexample->size() <= 4);
}

TEST_CASE("compare_grammars: TSG against its extracted CFG") {
  const Grammar anbn = oracle::load("anbn.tsg");
  const auto lhs = language_source(anbn);
  const TsgEnumerationSource enumerated(std::get<TsgGrammar>(anbn));
  CHECK(bounded_equiv(enumerated, *lhs, 12).equal);
}

TEST_CASE("compare_grammars: TAG sides warn about completeness") {
  const Grammar l4 = oracle::load("l4.tag");
  const CompareResult r = compare_grammars(l4, l4, 8);
  CHECK(r.equiv.equal);
  CHECK(r.lhs_method == "bounded-search");
  REQUIRE(r.warnings.size() == 2);
  CHECK(r.warnings[0].rfind("TagCompletenessUnavailable", 0) == 0);
  CHECK_THROWS_AS(compare_grammars(l4, oracle::load("abplus.stg"), 4), Error);
}

TEST_CASE("classify_stage orders the three constructions") {
  const auto stages = load_stage_fixtures(oracle::fixture_path("stages"));
  REQUIRE(stages.size() == 3);
  CHECK(formalism_of(stages[0].grammar) == Formalism::Stg);
  CHECK(formalism_of(stages[1].grammar) == Formalism::Tsg);
  CHECK(formalism_of(stages[2].grammar) == Formalism::Tag);

  const StageResult s1 = classify_stage(oracle::words(kSentence1), stages);
  CHECK(s1.minimal_stage == std::optional<std::size_t>(1));
  CHECK(s1.per_stage[0].verdict.method == "automaton");

  const StageResult s2 = classify_stage(oracle::words(kSentence2), stages);
  CHECK(s2.minimal_stage == std::optional<std::size_t>(2));
  CHECK_FALSE(s2.per_stage[0].verdict.accepted);
  CHECK(s2.per_stage[1].verdict.method == "chart");

  const StageResult s3 = classify_stage(oracle::words(kSentence3), stages);
  CHECK(s3.minimal_stage == std::optional<std::size_t>(3));
  CHECK_FALSE(s3.per_stage[0].verdict.accepted);
  CHECK_FALSE(s3.per_stage[1].verdict.accepted);
  CHECK(s3.per_stage[2].verdict.method == "bounded-search");

  const StageResult none = classify_stage(oracle::words("grover grover"), stages);
  CHECK_FALSE(none.minimal_stage.has_value());
}

TEST_CASE("unknown tokens give a false verdict with a note") {
  const MembershipVerdict v = grammar_member(oracle::load("abplus.stg"), oracle::words("a zebra"));
  CHECK_FALSE(v.accepted);
  CHECK(v.note.find("zebra") != std::string::npos);
  const MembershipVerdict long_tag = grammar_member(oracle::load("l4.tag"), Sentence(24, "a"));
  CHECK_FALSE(long_tag.accepted);
  CHECK_FALSE(long_tag.note.empty());
}
