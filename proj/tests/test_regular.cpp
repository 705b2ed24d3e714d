#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stgkit/automaton.hpp"
#include "stgkit/grammar_io.hpp"
#include "stgkit/language.hpp"
#include "stgkit/regular_bridge.hpp"
#include "stgkit/tsg.hpp"

using namespace stgkit;

namespace {

const std::vector<std::string> kAb{"a", "b"};

Regex rx(const std::string& text) { return parse_regex(text); }

std::set<Sentence> stg_yields(const StgGrammar& g, std::size_t max_len) {
  std::set<Sentence> out;
  for (const auto& d : enumerate_stg(g, max_len)) out.insert(yield_tokens(d.tree));
  return out;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidTrace;
}

}  // namespace

TEST_CASE("regex printing and parsing") {
  CHECK(print_regex(rx("( a | b )+")) == "( a | b )+");
  CHECK(print_regex(Regex::empty_string()) == "<eps>");
  CHECK(print_regex(Regex::empty_set()) == "<empty>");
  CHECK(rx("(a|b)*") == Regex::star(Regex::alt({Regex::literal("a"), Regex::literal("b")})));
  CHECK(code_of([] { parse_regex("( a"); }) == ErrorCode::RegexSyntax);
  CHECK(code_of([] { parse_regex("a )"); }) == ErrorCode::RegexSyntax);

  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Regex r = oracle::random_regex(rng, 3);
    CHECK(parse_regex(print_regex(r)) == r);
  }
}

TEST_CASE("smart constructors preserve the language") {
  std::mt19937 rng(11);
  for (int i = 0; i < 60; ++i) {
    const Regex r = oracle::random_regex(rng, 3);
    const auto strings = oracle::all_strings(kAb, 6);
    for (const Sentence& s : strings) {
      CHECK(oracle::regex_matches(nonempty_part(r), s) == (!s.empty() && oracle::regex_matches(r, s)));
    }
    CHECK(r.nullable() == oracle::regex_matches(r, {}));
  }
}

TEST_CASE("compile_stg_to_regex on abplus") {
  const StgGrammar g = oracle::load_as<StgGrammar>("abplus.stg");
  const Regex compiled = compile_stg_to_regex(g);
  const AutomatonSource lhs(build_automaton(compiled, g.terminals));
  const AutomatonSource rhs(build_automaton(rx("( a | b ) ( a | b )*"), g.terminals));
  CHECK(bounded_equiv(lhs, rhs, 10).equal);
  CHECK(oracle::regex_language(compiled, kAb, 8) == oracle::regex_language(rx("( a | b )+"), kAb, 8));
}

TEST_CASE("adversarial fixture: the compiler prunes the blocked branch") {
  const StgGrammar g = oracle::load_as<StgGrammar>("extra/adversarial.stg");
  CHECK(stg_lang(g, "B", {"S", "A"}).is_empty_set());
  CHECK_FALSE(stg_lang(g, "B", {"S"}).is_empty_set());
  const AutomatonSource compiled(compile_stg_to_automaton(g));
  const StgEnumerationSource enumerated(g);
  CHECK(bounded_equiv(compiled, enumerated, 10).equal);
  CHECK(compiled.bounded_language(10) == std::set<Sentence>{{"y"}, {"z"}});
}

TEST_CASE("memoized and unmemoized compilation agree") {
  for (const std::string name : {"abplus.stg", "coord.stg", "coord-bare.stg", "extra/adversarial.stg",
                                 "negative/2-a-any-b.stg", "negative/5-anbn-upto3.stg"}) {
    const StgGrammar g = oracle::load_as<StgGrammar>(name);
    const Regex memo = stg_lang(g, g.start, {}, true);
    const Regex fresh = stg_lang(g, g.start, {}, false);
    const AutomatonSource a(build_automaton(memo, g.terminals));
    const AutomatonSource b(build_automaton(fresh, g.terminals));
    CHECK_MESSAGE(bounded_equiv(a, b, 9).equal, name);
  }
}

TEST_CASE("forward direction: every STG fixture compiles to its enumerated language") {
  for (const std::string name : {"abplus.stg", "coord-bare.stg", "extra/adversarial.stg", "negative/1-abplus.stg",
                                 "negative/2-a-any-b.stg", "negative/3-aplus-bplus.stg",
                                 "negative/4-ab-repeated.stg", "negative/5-anbn-upto3.stg"}) {
    const StgGrammar g = oracle::load_as<StgGrammar>(name);
    const auto compiled = automaton_language(compile_stg_to_automaton(g), 8);
    CHECK_MESSAGE(compiled == stg_yields(g, 8), name);
  }
}

TEST_CASE("regex_to_stg") {
  const StgGrammar abc = regex_to_stg(rx("( a b )* c"), {"a", "b", "c"});
  CHECK(validate_stg(abc).ok());
  std::set<Sentence> expected;
  for (std::size_t n = 0; 2 * n + 1 <= 9; ++n) {
    Sentence s;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back("a");
      s.push_back("b");
    }
    s.push_back("c");
    expected.insert(s);
  }
  CHECK(expected.size() == 5);
  CHECK(stg_yields(abc, 9) == expected);
  CHECK(automaton_language(build_automaton(rx("( a b )* c")), 9) == expected);

  const StgGrammar any = regex_to_stg(rx("( a | b )*"), {"a", "b"});
  CHECK(validate_stg(any).ok());
  CHECK(stg_yields(any, 6).size() == 127);
  std::size_t one_terminal_fillers = 0;
  bool repeated_site = false;
  for (const auto& [name, tree] : any.initial_trees) {
    if (tree.children().size() == 1 && tree.child(0).label().is_terminal() && tree.label().text != any.start)
      ++one_terminal_fillers;
    for (const auto& c : tree.children()) repeated_site = repeated_site || c.annotation() != Annotation::None;
  }
  CHECK(one_terminal_fillers == 2);
  CHECK(repeated_site);

  CHECK(code_of([] { regex_to_stg(parse_regex("a c"), {"a", "b"}); }) == ErrorCode::UnsupportedLiteral);
}

TEST_CASE("regex_to_stg round trip on random expressions") {
  std::mt19937 rng(31337);
  for (int i = 0; i < 40; ++i) {
    const Regex r = oracle::random_regex(rng, 3);
    const StgGrammar g = regex_to_stg(r, {"a", "b"});
    REQUIRE_MESSAGE(validate_stg(g).ok(), print_regex(r));
    CHECK_MESSAGE(stg_yields(g, 6) == oracle::regex_language(r, kAb, 6), print_regex(r));
  }
}

TEST_CASE("automaton agrees with brute-force matching") {
  const Regex r = rx("( a | b )+");
  const Automaton m = build_automaton(r);
  const auto strings = oracle::all_strings(kAb, 8);
  std::size_t nonempty = 0;
  for (const Sentence& s : strings) {
    if (s.empty()) continue;
    ++nonempty;
    CHECK(automaton_member(m, s).accepted == oracle::regex_matches(r, s));
  }
  CHECK(nonempty == 510);
  CHECK_FALSE(automaton_member(m, {}).accepted);

  std::mt19937 rng(2718);
  for (int i = 0; i < 40; ++i) {
    const Regex q = oracle::random_regex(rng, 3);
    const Automaton mq = build_automaton(q, {"a", "b"});
    CHECK(automaton_language(mq, 6) == oracle::regex_language(q, kAb, 6));
  }
}

TEST_CASE("automaton membership on fixtures") {
  const Automaton ab = compile_stg_to_automaton(oracle::load_as<StgGrammar>("abplus.stg"));
  CHECK(automaton_member(ab, {"a", "b", "a"}).accepted);
  CHECK(automaton_member(ab, {"a", "z"}).unknown_token);
  const Automaton coord = compile_stg_to_automaton(oracle::load_as<StgGrammar>("coord.stg"));
  CHECK(automaton_member(coord, oracle::words("john has eaten an apple and fred has eaten peaches and a candy bar"))
            .accepted);
  CHECK(automaton_member(build_automaton(rx("a*")), {}).accepted);
  CHECK_FALSE(automaton_member(build_automaton(rx("a+")), {}).accepted);
}

TEST_CASE("bounded_equiv") {
  const StgGrammar g = oracle::load_as<StgGrammar>("abplus.stg");
  CHECK(bounded_equiv(StgEnumerationSource(g), AutomatonSource(compile_stg_to_automaton(g)), 10).equal);

  const FiniteSource small({"a", "b"}, {{"a"}, {"a", "b"}});
  const FiniteSource other({"a", "b"}, {{"a"}, {"b", "b"}, {"a", "b"}});
  const EquivResult r = bounded_equiv(small, other, 4);
  CHECK_FALSE(r.equal);
  CHECK(r.counterexample == Sentence{"b", "b"});
  CHECK(r.accepted_by == Side::Rhs);

  const FiniteSource abc({"a", "b", "c"}, {});
  CHECK(code_of([&] { bounded_equiv(small, abc, 3); }) == ErrorCode::AlphabetMismatch);
}

TEST_CASE("no shipped STG captures a^n b^n") {
  const TsgGrammar anbn = oracle::load_as<TsgGrammar>("anbn.tsg");
  const TsgEnumerationSource target(anbn);
  const auto truth = target.bounded_language(8);
  for (const std::string name : {"negative/1-abplus.stg", "negative/2-a-any-b.stg", "negative/3-aplus-bplus.stg",
                                 "negative/4-ab-repeated.stg", "negative/5-anbn-upto3.stg"}) {
    const StgGrammar g = oracle::load_as<StgGrammar>(name);
    const EquivResult r = bounded_equiv(AutomatonSource(compile_stg_to_automaton(g)), target, 8);
    REQUIRE_MESSAGE(!r.equal, name);
    REQUIRE(r.counterexample.has_value());
    CHECK(r.counterexample->size() <= 8);
    // The counterexample is the shortlex-least element of the symmetric difference.
    const auto mine = stg_yields(g, 8);
    std::optional<Sentence> least;
    for (const Sentence& s : oracle::all_strings(kAb, 8)) {
      if (mine.contains(s) != truth.contains(s) && (!least || shortlex_less(s, *least))) least = s;
    }
    CHECK_MESSAGE(r.counterexample == least, name);
    CHECK((r.accepted_by == Side::Lhs) == mine.contains(*least));
  }
}
