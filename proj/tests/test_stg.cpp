#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stgkit/grammar_io.hpp"
#include "stgkit/stg.hpp"

using namespace stgkit;

namespace {

const std::string kCoordSentence = "john has eaten an apple and fred has eaten peaches and a candy bar";

StgGrammar stg_from(const std::string& header, const std::string& trees) {
  return std::get<StgGrammar>(parse_grammar("formalism: stg\n" + header + "\n" + trees));
}

SchematicTree schema_of(const std::string& decls, const std::string& tree) {
  const StgGrammar g = stg_from(decls, "tree t: " + tree + "\n");
  return g.initial_trees.at("t");
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

const std::string kSxDecls = "start: S\nnonterminals: S X\nterminals: a b";

}  // namespace

TEST_CASE("validate_stg") {
  CHECK(validate_stg(oracle::load_as<StgGrammar>("coord.stg")).ok());
  CHECK(validate_stg(oracle::load_as<StgGrammar>("coord-bare.stg")).ok());

  StgGrammar g = oracle::load_as<StgGrammar>("abplus.stg");
  StgGrammar annotated = g;
  annotated.initial_trees.insert_or_assign(
      "bad", SchematicTree(Symbol::nonterminal("X"), Annotation::Plus, {SchematicTree(Symbol::terminal("a"))}));
  CHECK(validate_stg(annotated).has(ViolationKind::AnnotatedRoot));

  StgGrammar internal = g;
  internal.initial_trees.insert_or_assign(
      "bad", SchematicTree(Symbol::nonterminal("X"), Annotation::None,
                           {SchematicTree(Symbol::nonterminal("a"), Annotation::None,
                                          {SchematicTree(Symbol::terminal("b"))})}));
  const ValidationReport report = validate_stg(internal);
  CHECK(report.has(ViolationKind::TerminalInternal));
  CHECK_FALSE(report.ok());
}

TEST_CASE("instantiates: the and-free coordination tree against the bare schema") {
  const StgGrammar g = oracle::load_as<StgGrammar>("coord-bare.stg");
  const SchematicTree& schema = g.initial_trees.at("coord");
  const SyntaxTree figure = parse_tree(
      "(CP C (IP NP (Ibar (I has) (VP (V eaten) NP))) (IP NP (Ibar (I has) (VP (V eaten) NP NP))))", g.alphabet());
  CHECK(instantiates(figure, schema));
  const SyntaxTree one[] = {figure};
  CHECK(oracle::brute_instantiates(one, schema));
  const SyntaxTree no_ip = parse_tree("(CP C)", g.alphabet());
  CHECK_FALSE(instantiates(no_ip, schema));
}

TEST_CASE("instantiates: clause discipline") {
  const Alphabet sx({"S", "X"}, {"a", "b"});
  const SchematicTree bare(Symbol::nonterminal("S"));
  const SyntaxTree single = parse_tree("S", sx);
  const SyntaxTree seq[] = {single};
  CHECK(instantiates(seq, bare));
  CHECK_FALSE(instantiates(std::span<const SyntaxTree>{}, bare));

  const SchematicTree star = schema_of(kSxDecls, "(S X*)");
  const SchematicTree plain = schema_of(kSxDecls, "(S X)");
  const SyntaxTree s0 = SyntaxTree(Symbol::nonterminal("S"));
  const SyntaxTree s3 = parse_tree("(S X X X)", sx);
  const SyntaxTree s2 = parse_tree("(S X X)", sx);
  CHECK(instantiates(s0, star));
  CHECK(instantiates(s3, star));
  CHECK_FALSE(instantiates(s2, plain));
  const SyntaxTree s2seq[] = {s2};
  CHECK_FALSE(oracle::brute_instantiates(s2seq, plain));
}

TEST_CASE("instantiates agrees with the partition oracle on small random pairs") {
  std::mt19937 rng(99);
  const std::vector<std::string> kids{"X", "a", "(X a)", "(X b X)", "b"};
  const std::vector<std::string> marks{"", "+", "*"};
  const Alphabet sx({"S", "X"}, {"a", "b"});
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    std::string schema_text = "(S";
    const std::size_t n = 1 + rng() % 3;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 2) schema_text += std::string(" X") + marks[rng() % 3];
      else schema_text += std::string(" (X") + marks[rng() % 3] + " a" + marks[rng() % 3] + ")";
    }
    schema_text += ")";
    const SchematicTree schema = schema_of(kSxDecls, schema_text);
    std::string tree_text = "(S";
    const std::size_t m = rng() % 5;
    for (std::size_t i = 0; i < m; ++i) tree_text += " " + kids[rng() % kids.size()];
    tree_text += ")";
    const SyntaxTree tree = m == 0 ? SyntaxTree(Symbol::nonterminal("S")) : parse_tree(tree_text, sx);
    const SyntaxTree one[] = {tree};
    CHECK_MESSAGE(instantiates(tree, schema) == oracle::brute_instantiates(one, schema),
                  schema_text << " vs " << tree_text);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("enumerate_instantiations") {
  const auto star = enumerate_instantiations(schema_of(kSxDecls, "(S X*)"), 2);
  REQUIRE(star.size() == 3);
  CHECK(star[0] == SyntaxTree(Symbol::nonterminal("S")));
  CHECK(star[2].arity() == 2);

  const auto fixed = enumerate_instantiations(schema_of(kSxDecls, "(S a)"), 5);
  REQUIRE(fixed.size() == 1);
  CHECK(fixed[0] == parse_tree("(S a)", Alphabet({"S", "X"}, {"a", "b"})));

  for (std::size_t k = 1; k <= 4; ++k) {
    CHECK(enumerate_instantiations(schema_of(kSxDecls, "(S X+)"), k).size() == k);
  }
}

TEST_CASE("enumerate_instantiations matches explicit set construction") {
  const std::vector<std::string> schemas{
      "(S X+)",           "(S (X a+))",        "(S (X+ a*))",     "(S (X* b (X+ a)) a)",
      "(S (X+ (X* a)))", "(S a* (X+ b*) X)", "(S (X+ (X+ a+)))",
  };
  for (const auto& text : schemas) {
    const SchematicTree schema = schema_of(kSxDecls, text);
    for (std::size_t k = 1; k <= 3; ++k) {
      const auto got = enumerate_instantiations_with_reps(schema, k);
      std::set<SyntaxTree> expected;
      for (const auto& seq : oracle::instance_sequences(schema, k)) expected.insert(seq.front());
      std::set<SyntaxTree> got_set;
      for (const auto& inst : got) {
        got_set.insert(inst.tree);
        CHECK(instantiate(schema, inst.repetitions) == inst.tree);
        CHECK(instantiates(inst.tree, schema));
      }
      CHECK_MESSAGE(got_set.size() == got.size(), text << " emitted a duplicate");
      CHECK_MESSAGE(got_set == expected, text << " k=" << k);
      for (std::size_t i = 1; i < got.size(); ++i) CHECK(node_count(got[i - 1].tree) <= node_count(got[i].tree));
    }
  }
}

TEST_CASE("instantiate checks the repetition vector") {
  const SchematicTree schema = schema_of(kSxDecls, "(S X+ a*)");
  CHECK(instantiate(schema, std::vector<std::size_t>{2, 0}) ==
        parse_tree("(S X X)", Alphabet({"S", "X"}, {"a", "b"})));
  CHECK(code_of([&] { instantiate(schema, std::vector<std::size_t>{2}); }) == ErrorCode::InvalidTrace);
  CHECK(code_of([&] { instantiate(schema, std::vector<std::size_t>{1, 1, 1}); }) == ErrorCode::InvalidTrace);
  CHECK(code_of([&] { instantiate(schema, std::vector<std::size_t>{0, 1}); }) == ErrorCode::InvalidTrace);
}

TEST_CASE("substitute_stg") {
  const Alphabet ab({"S", "A", "B"}, {"a", "b"});
  const SyntaxTree out = substitute_stg(parse_tree("(S A)", ab), TreeAddress{{0}}, parse_tree("(A a)", ab));
  CHECK(out == parse_tree("(S (A a))", ab));

  const SyntaxTree host = parse_tree("(S (B A))", ab);
  const SyntaxTree filler = parse_tree("(A (B b))", ab);
  CHECK(code_of([&] { substitute_stg(host, TreeAddress{{0, 0}}, filler); }) == ErrorCode::PathRecursion);
  // Cross-check against the raw label-set intersection.
  std::set<std::string> inside;
  oracle::nonterminals_in(filler, inside);
  const auto above = oracle::labels_above(host, {0, 0});
  std::vector<std::string> common;
  std::set_intersection(above.begin(), above.end(), inside.begin(), inside.end(), std::back_inserter(common));
  CHECK(common == std::vector<std::string>{"B"});
  CHECK(path_conflict(host, TreeAddress{{0, 0}}, filler) == std::optional<std::string>("B"));

  CHECK(code_of([&] { substitute_stg(host, TreeAddress{{0}}, filler); }) == ErrorCode::NotASubstitutionSite);
  CHECK(code_of([&] { substitute_stg(parse_tree("(S A)", ab), TreeAddress{{0}}, parse_tree("(B b)", ab)); }) ==
        ErrorCode::LabelMismatch);
}

TEST_CASE("substitute_stg into the coordination instance") {
  const StgGrammar g = oracle::load_as<StgGrammar>("coord.stg");
  const auto instances = enumerate_instantiations(g.initial_trees.at("coord"), 1);
  const SyntaxTree& host = instances.front();
  const auto sites = nonterminal_leaves(host);
  REQUIRE_FALSE(sites.empty());
  const SyntaxTree john = instantiate(g.initial_trees.at("np-john"), std::vector<std::size_t>{});
  const SyntaxTree filled = substitute_stg(host, sites.front(), john);
  const auto y = yield_of(filled);
  REQUIRE(y.size() >= 3);
  CHECK(y[0].text == "john");
  CHECK(y[1].text == "has");
  CHECK(y[2].text == "eaten");
}

TEST_CASE("enumerate_stg on abplus") {
  const StgGrammar g = oracle::load_as<StgGrammar>("abplus.stg");
  const auto ds = enumerate_stg(g, 2);
  std::set<Sentence> yields;
  for (const auto& d : ds) {
    CHECK(is_complete(d.tree));
    CHECK(d.tree.label().text == "S");
    yields.insert(yield_tokens(d.tree));
  }
  CHECK(ds.size() == 6);
  CHECK(yields == std::set<Sentence>{{"a"}, {"b"}, {"a", "a"}, {"a", "b"}, {"b", "a"}, {"b", "b"}});
  for (std::size_t i = 1; i < ds.size(); ++i)
    CHECK(terminal_count(ds[i - 1].tree) <= terminal_count(ds[i].tree));
}

TEST_CASE("enumerate_stg on coord reaches the coordination sentence") {
  const StgGrammar g = oracle::load_as<StgGrammar>("coord.stg");
  const auto ds = enumerate_stg(g, 14);
  bool found = false;
  for (const auto& d : ds) found = found || yield_tokens(d.tree) == oracle::words(kCoordSentence);
  CHECK(found);
  CHECK(derive_stg(g, oracle::words(kCoordSentence)).size() >= 1);
}

TEST_CASE("traces replay and record disjoint path labels") {
  for (const std::string name : {"abplus.stg", "coord.stg", "extra/adversarial.stg", "negative/4-ab-repeated.stg"}) {
    const StgGrammar g = oracle::load_as<StgGrammar>(name);
    for (const auto& d : enumerate_stg(g, 6)) {
      CHECK(replay_stg(g, d.trace) == d.tree);
      std::vector<SyntaxTree> results;
      for (const auto& step : d.trace.steps) {
        if (const auto* inst = std::get_if<InstantiateStep>(&step)) {
          results.push_back(instantiate(g.initial_trees.at(inst->tree), inst->repetitions));
        } else if (const auto* sub = std::get_if<SubstituteStep>(&step)) {
          REQUIRE(sub->path_labels.has_value());
          std::set<std::string> inside;
          oracle::nonterminals_in(results[sub->filler], inside);
          for (const auto& l : *sub->path_labels) CHECK_FALSE(inside.contains(l));
          CHECK(*sub->path_labels == oracle::labels_above(results[sub->host], sub->address.path));
          results.push_back(substitute_stg(results[sub->host], sub->address, results[sub->filler]));
        }
      }
      CHECK(results.back() == d.tree);
    }
  }
}

TEST_CASE("enumerate_stg equals a top-down brute-force tree search") {
  const std::vector<std::pair<std::string, std::size_t>> cases{
      {"abplus.stg", 5}, {"extra/adversarial.stg", 6}, {"negative/1-abplus.stg", 4}, {"negative/2-a-any-b.stg", 5},
      {"negative/3-aplus-bplus.stg", 5}, {"negative/4-ab-repeated.stg", 6}, {"negative/5-anbn-upto3.stg", 6},
  };
  for (const auto& [name, len] : cases) {
    const StgGrammar g = oracle::load_as<StgGrammar>(name);
    std::set<SyntaxTree> got;
    for (const auto& d : enumerate_stg(g, len)) got.insert(d.tree);
    CHECK_MESSAGE(got == oracle::brute_stg_trees(g, len), name);
  }
}

TEST_CASE("heterogeneous copies") {
  const StgGrammar g = stg_from(kSxDecls, "tree s: (S X*)\ntree xa: (X a)\ntree xb: (X b)\n");
  std::set<Sentence> yields;
  for (const auto& d : enumerate_stg(g, 2)) yields.insert(yield_tokens(d.tree));
  CHECK(yields.contains(Sentence{"a", "b"}));
  CHECK(yields.contains(Sentence{"b", "a"}));
}

TEST_CASE("member_stg") {
  const StgGrammar coord = oracle::load_as<StgGrammar>("coord.stg");
  CHECK(member_stg(coord, oracle::words(kCoordSentence)));
  const StgGrammar ab = oracle::load_as<StgGrammar>("abplus.stg");
  CHECK_FALSE(member_stg(ab, {}));
  CHECK(member_stg(ab, Sentence{"a", "b", "a"}));
  CHECK(code_of([&] { member_stg(ab, Sentence{"a", "c"}); }) == ErrorCode::UnknownToken);

  std::set<Sentence> enumerated;
  for (const auto& d : enumerate_stg(ab, 3)) enumerated.insert(yield_tokens(d.tree));
  for (const Sentence& s : oracle::all_strings({"a", "b"}, 3)) CHECK(member_stg(ab, s) == enumerated.contains(s));
}

TEST_CASE("adversarial fixture: path restriction fires in the engine") {
  const StgGrammar g = oracle::load_as<StgGrammar>("extra/adversarial.stg");
  const Alphabet al = g.alphabet();
  const SyntaxTree host = parse_tree("(S (A x B))", al);
  const SyntaxTree filler = parse_tree("(B (A y))", al);
  CHECK(code_of([&] { substitute_stg(host, TreeAddress{{0, 1}}, filler); }) == ErrorCode::PathRecursion);
  std::set<Sentence> yields;
  for (const auto& d : enumerate_stg(g, 10)) yields.insert(yield_tokens(d.tree));
  CHECK(yields == std::set<Sentence>{{"y"}, {"z"}});
}
