// One PASS/FAIL line per acceptance criterion. `--write-goldens` regenerates
// the CLI golden files instead of checking them.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "stgkit/automaton.hpp"
#include "stgkit/harness.hpp"
#include "stgkit/regular_bridge.hpp"

using namespace stgkit;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kMemberSeconds = 1.0;
constexpr double kForwardSeconds = 30.0;
constexpr double kReverseSeconds = 60.0;
constexpr double kTagSeconds = 30.0;
constexpr std::size_t kForwardLen = 10;
constexpr std::size_t kReverseLen = 8;
constexpr std::size_t kReverseCount = 20;
constexpr std::size_t kReverseDepth = 3;
constexpr std::uint32_t kReverseSeed = 1994;
constexpr std::size_t kAdversarialLen = 10;
constexpr std::size_t kTsgLen = 12;
constexpr std::size_t kRoundTripPairs = 1000;
constexpr std::uint32_t kRoundTripSeed = 8;
constexpr std::size_t kOracleNodeLimit = 9;

const std::string kSentence1 = "john has eaten an apple and fred has eaten peaches and a candy bar";
const std::string kSentence2 = "cookie monster tells grover to jump over the fence";
const std::string kSentence3 = "cookie monster touches grover after jumping over the fence";

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_seconds(double s) {
  std::ostringstream out;
  out.precision(3);
  out << std::fixed << s << " s";
  return out.str();
}

std::set<Sentence> stg_yields(const StgGrammar& g, std::size_t max_len) {
  std::set<Sentence> out;
  for (const auto& d : enumerate_stg(g, max_len)) out.insert(yield_tokens(d.tree));
  return out;
}

// ---------------------------------------------------------------------------

Outcome coordination_sentence() {
  Outcome o;
  const StgGrammar coord = oracle::load_as<StgGrammar>("coord.stg");
  const Timer t;
  const bool accepted = member_stg(coord, oracle::words(kSentence1));
  const double secs = t.seconds();

  const StgGrammar bare = oracle::load_as<StgGrammar>("coord-bare.stg");
  const SyntaxTree figure = parse_tree(
      "(CP C (IP NP (Ibar (I has) (VP (V eaten) NP))) (IP NP (Ibar (I has) (VP (V eaten) NP NP))))", bare.alphabet());
  const bool inst = instantiates(figure, bare.initial_trees.at("coord"));

  o.pass = accepted && secs < kMemberSeconds && inst;
  o.detail = std::string("member=") + (accepted ? "true" : "false") + " in " + fmt_seconds(secs) +
             ", and-free tree instantiates=" + (inst ? "true" : "false");
  return o;
}

Outcome forward_direction() {
  Outcome o;
  const Timer t;
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(STGKIT_FIXTURE_DIR)) {
    if (entry.path().extension() != ".stg") continue;
    ++files;
    const StgGrammar g = std::get<StgGrammar>(load_grammar_file(entry.path()));
    const EquivResult r =
        bounded_equiv(StgEnumerationSource(g), AutomatonSource(compile_stg_to_automaton(g)), kForwardLen);
    if (!r.equal) {
      o.pass = false;
      o.detail += " differs:" + entry.path().filename().string() + " on \"" + join_sentence(*r.counterexample) + "\"";
    }
  }
  const double secs = t.seconds();
  if (secs >= kForwardSeconds) o.pass = false;
  o.detail = std::to_string(files) + " fixtures equal at max_len " + std::to_string(kForwardLen) + " in " +
             fmt_seconds(secs) + o.detail;
  return o;
}

Outcome reverse_direction() {
  Outcome o;
  const Timer t;
  std::mt19937 rng(kReverseSeed);
  std::size_t agreed = 0;
  for (std::size_t i = 0; i < kReverseCount; ++i) {
    const Regex r = oracle::random_regex(rng, kReverseDepth);
    const StgGrammar g = regex_to_stg(r, {"a", "b"});
    const EquivResult eq =
        bounded_equiv(StgEnumerationSource(g), AutomatonSource(build_automaton(r, {"a", "b"})), kReverseLen);
    const bool brute = stg_yields(g, kReverseLen) == oracle::regex_language(r, {"a", "b"}, kReverseLen);
    if (eq.equal && brute && operator_depth(r) <= kReverseDepth) {
      ++agreed;
    } else {
      o.pass = false;
      o.detail += " mismatch:" + print_regex(r);
    }
  }
  const double secs = t.seconds();
  if (secs >= kReverseSeconds) o.pass = false;
  o.detail = std::to_string(agreed) + "/" + std::to_string(kReverseCount) + " regexes equal at max_len " +
             std::to_string(kReverseLen) + " in " + fmt_seconds(secs) + o.detail;
  return o;
}

Outcome path_restriction() {
  Outcome o;
  const StgGrammar g = oracle::load_as<StgGrammar>("extra/adversarial.stg");
  const Alphabet al = g.alphabet();
  bool fired = false;
  try {
    substitute_stg(parse_tree("(S (A x B))", al), TreeAddress{{0, 1}}, parse_tree("(B (A y))", al));
  } catch (const Error& e) {
    fired = e.code() == ErrorCode::PathRecursion;
  }
  const auto compiled = automaton_language(compile_stg_to_automaton(g), kAdversarialLen);
  const auto enumerated = stg_yields(g, kAdversarialLen);
  const bool pruned = stg_lang(g, "B", {"S", "A"}).is_empty_set();
  o.pass = fired && compiled == enumerated && pruned;
  o.detail = std::string("PathRecursion=") + (fired ? "yes" : "no") + ", compiled " +
             std::to_string(compiled.size()) + " vs enumerated " + std::to_string(enumerated.size()) +
             " sentences, blocked branch empty=" + (pruned ? "yes" : "no");
  return o;
}

Outcome tsg_context_free() {
  Outcome o;
  for (const std::string name : {"anbn.tsg", "compl.tsg"}) {
    const TsgGrammar g = oracle::load_as<TsgGrammar>(name);
    const bool eq = bounded_equiv(TsgEnumerationSource(g), CfgChartSource(extract_cfg(g)), kTsgLen).equal;
    o.pass = o.pass && eq;
    o.detail += name + (eq ? " equal, " : " DIFFERS, ");
  }
  const Cfg anbn = extract_cfg(oracle::load_as<TsgGrammar>("anbn.tsg"));
  std::size_t right = 0;
  for (std::size_t k = 1; k <= 6; ++k) {
    right += cfg_member(anbn, oracle::repeat_tokens({{"a", k}, {"b", k}})) ? 1 : 0;
    right += cfg_member(anbn, oracle::repeat_tokens({{"a", k}, {"b", k - 1}})) ? 0 : 1;
  }
  o.pass = o.pass && right == 12;
  o.detail += "anbn decisions " + std::to_string(right) + "/12";
  return o;
}

Outcome tag_witness() {
  Outcome o;
  const TagGrammar g = oracle::load_as<TagGrammar>("l4.tag");
  const Timer t;
  std::set<Sentence> got;
  std::size_t trees = 0;
  for (const auto& d : enumerate_tag(g, 20, 5).derivations) {
    got.insert(yield_tokens(d.tree));
    ++trees;
  }
  std::set<Sentence> closed_form;
  for (std::size_t n = 1; n <= 5; ++n)
    closed_form.insert(oracle::repeat_tokens({{"a", n}, {"b", n}, {"c", n}, {"d", n}}));
  const bool positive = member_tag(g, oracle::words("a a b b c c d d"));
  const bool negative = member_tag(g, oracle::words("a a b c c d d"));
  const double secs = t.seconds();
  o.pass = got == closed_form && trees == 5 && positive && !negative && secs < kTagSeconds;
  o.detail = std::to_string(got.size()) + " yields (closed form 5), 8-token=" + (positive ? "true" : "false") +
             ", 7-token=" + (negative ? "true" : "false") + " in " + fmt_seconds(secs);
  return o;
}

Outcome acquisition_order() {
  Outcome o;
  const auto stages = load_stage_fixtures(oracle::fixture_path("stages"));
  std::vector<std::optional<std::size_t>> minimal;
  for (const std::string& s : {kSentence1, kSentence2, kSentence3}) {
    const StageResult r = classify_stage(oracle::words(s), stages);
    minimal.push_back(r.minimal_stage);
  }
  const bool rejections = !classify_stage(oracle::words(kSentence2), stages).per_stage[0].verdict.accepted &&
                          !classify_stage(oracle::words(kSentence3), stages).per_stage[0].verdict.accepted &&
                          !classify_stage(oracle::words(kSentence3), stages).per_stage[1].verdict.accepted;
  o.pass = stages.size() == 3 && minimal == std::vector<std::optional<std::size_t>>{1, 2, 3} && rejections;
  o.detail = "minimal stages (";
  for (std::size_t i = 0; i < minimal.size(); ++i)
    o.detail += (i ? ", " : "") + (minimal[i] ? std::to_string(*minimal[i]) : std::string("none"));
  o.detail += std::string("), earlier stages reject=") + (rejections ? "yes" : "no");
  return o;
}

// Random schema over S, A, B and a, b; the root is unannotated.
SchematicTree random_schema(std::mt19937& rng, std::size_t depth, bool root) {
  static const std::array<std::string, 2> kNts{"A", "B"};
  static const std::array<std::string, 2> kTs{"a", "b"};
  const Annotation ann = root ? Annotation::None : std::array{Annotation::None, Annotation::None, Annotation::Plus,
                                                              Annotation::Star}[rng() % 4];
  if (root || (depth > 0 && rng() % 3 != 0)) {
    std::vector<SchematicTree> kids;
    const std::size_t arity = 1 + rng() % 3;
    for (std::size_t i = 0; i < arity; ++i) kids.push_back(random_schema(rng, depth == 0 ? 0 : depth - 1, false));
    return SchematicTree(Symbol::nonterminal(root ? "S" : kNts[rng() % 2]), ann, std::move(kids));
  }
  if (rng() % 2) return SchematicTree(Symbol::terminal(kTs[rng() % 2]), ann);
  return SchematicTree(Symbol::nonterminal(kNts[rng() % 2]), ann);
}

// Instance node plus whether its schema node's children are all unannotated.
struct Shape {
  SyntaxTree tree;
  bool rigid = false;
  std::vector<Shape> kids;
};

// Draws copy counts in preorder while building the instance directly.
std::vector<Shape> build_instance(const SchematicTree& s, std::mt19937& rng, std::vector<std::size_t>& reps) {
  std::size_t copies = 1;
  if (s.annotation() != Annotation::None) {
    copies = (s.annotation() == Annotation::Plus ? 1 : 0) + rng() % 3;
    reps.push_back(copies);
  }
  bool rigid = !s.children().empty();
  for (const SchematicTree& c : s.children()) rigid = rigid && c.annotation() == Annotation::None;
  std::vector<Shape> out;
  for (std::size_t c = 0; c < copies; ++c) {
    std::vector<Shape> kids;
    for (const SchematicTree& child : s.children()) {
      auto part = build_instance(child, rng, reps);
      kids.insert(kids.end(), part.begin(), part.end());
    }
    std::vector<SyntaxTree> trees;
    for (const Shape& k : kids) trees.push_back(k.tree);
    out.push_back(Shape{SyntaxTree(s.label(), std::move(trees)), rigid, std::move(kids)});
  }
  return out;
}

// Rigid nodes reachable from the root through rigid nodes only. Along such a
// chain every child is matched one-to-one, so a mutation cannot be re-absorbed.
void rigid_parents(const Shape& shape, std::vector<std::size_t>& path, std::vector<std::vector<std::size_t>>& out) {
  if (!shape.rigid) return;
  out.push_back(path);
  for (std::size_t i = 0; i < shape.kids.size(); ++i) {
    path.push_back(i);
    rigid_parents(shape.kids[i], path, out);
    path.pop_back();
  }
}

SyntaxTree mutate(const SyntaxTree& t, std::span<const std::size_t> path, std::mt19937& rng) {
  if (!path.empty()) {
    std::vector<SyntaxTree> kids(t.children().begin(), t.children().end());
    kids[path.front()] = mutate(kids[path.front()], path.subspan(1), rng);
    return SyntaxTree(t.label(), std::move(kids));
  }
  std::vector<SyntaxTree> kids(t.children().begin(), t.children().end());
  const std::size_t i = rng() % kids.size();
  if (rng() % 2) kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(i), kids[i]);
  else kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(i));
  return SyntaxTree(t.label(), std::move(kids));
}

Outcome instantiation_round_trip() {
  Outcome o;
  std::mt19937 rng(kRoundTripSeed);
  std::size_t positives = 0, negatives = 0, oracle_checked = 0, failures = 0;
  std::string first_failure;
  auto note = [&](const char* kind, const SchematicTree& schema, const SyntaxTree& tree) {
    if (first_failure.empty()) first_failure = std::string(kind) + " " + print_schematic(schema) + " vs " + print_tree(tree);
  };
  while (positives < kRoundTripPairs || negatives < kRoundTripPairs) {
    const SchematicTree schema = random_schema(rng, 3, true);
    std::vector<std::size_t> reps;
    const Shape built = build_instance(schema, rng, reps).front();
    const SyntaxTree tree = instantiate(schema, reps);
    const SyntaxTree one[] = {tree};
    if (positives < kRoundTripPairs) {
      ++positives;
      bool ok = tree == built.tree && instantiates(tree, schema);
      if (node_count(tree) <= kOracleNodeLimit) {
        ++oracle_checked;
        ok = ok && oracle::brute_instantiates(one, schema);
      }
      failures += ok ? 0 : 1;
      if (!ok) note("positive", schema, tree);
    }
    if (negatives >= kRoundTripPairs) continue;
    std::vector<std::vector<std::size_t>> rigid;
    std::vector<std::size_t> scratch;
    rigid_parents(built, scratch, rigid);
    if (rigid.empty()) continue;
    const SyntaxTree bad = mutate(tree, rigid[rng() % rigid.size()], rng);
    ++negatives;
    bool ok = !instantiates(bad, schema);
    const SyntaxTree bad_one[] = {bad};
    if (node_count(bad) <= kOracleNodeLimit) {
      ++oracle_checked;
      ok = ok && !oracle::brute_instantiates(bad_one, schema);
    }
    failures += ok ? 0 : 1;
    if (!ok) note("negative", schema, bad);
  }
  o.pass = failures == 0;
  o.detail = std::to_string(positives) + " positives, " + std::to_string(negatives) + " negatives, " +
             std::to_string(oracle_checked) + " cross-checked by partition oracle, " + std::to_string(failures) +
             " failures" +
             (first_failure.empty() ? "" : "; first: " + first_failure);
  return o;
}

// ---------------------------------------------------------------------------
// CLI goldens

struct GoldenCommand {
  std::string name;
  std::string args;
};

std::vector<GoldenCommand> golden_commands() {
  std::ifstream in(fs::path(STGKIT_GOLDEN_DIR) / "commands.txt");
  std::vector<GoldenCommand> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto bar = line.find(" | ");
    if (bar == std::string::npos) continue;
    out.push_back({line.substr(0, bar), line.substr(bar + 3)});
  }
  return out;
}

std::string run_cli(const std::string& args) {
  const fs::path root = fs::path(STGKIT_FIXTURE_DIR).parent_path();
  const std::string command =
      "cd '" + root.string() + "' && '" + STGKIT_CLI_PATH + "' " + args + " 2>&1; echo \"exit $?\"";
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return "popen failed";
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

fs::path golden_file(const std::string& name) { return fs::path(STGKIT_GOLDEN_DIR) / (name + ".out"); }

Outcome determinism() {
  Outcome o;
  std::size_t stable = 0;
  const auto commands = golden_commands();
  for (const auto& c : commands) {
    const std::string first = run_cli(c.args);
    const std::string second = run_cli(c.args);
    std::ifstream in(golden_file(c.name), std::ios::binary);
    std::stringstream expected;
    expected << in.rdbuf();
    if (in && first == second && first == expected.str()) {
      ++stable;
    } else {
      o.pass = false;
      o.detail += " unstable:" + c.name;
    }
  }
  o.pass = o.pass && !commands.empty();
  o.detail = std::to_string(stable) + "/" + std::to_string(commands.size()) +
             " golden files byte-identical over two runs" + o.detail;
  return o;
}

int write_goldens() {
  for (const auto& c : golden_commands()) {
    std::ofstream out(golden_file(c.name), std::ios::binary);
    out << run_cli(c.args);
    std::cout << "wrote " << golden_file(c.name).filename().string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string(argv[1]) == "--write-goldens") return write_goldens();

  const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
      {"coordination sentence generation", coordination_sentence},
      {"regularity, forward direction", forward_direction},
      {"regularity, reverse direction", reverse_direction},
      {"path restriction", path_restriction},
      {"TSG weak context-freeness", tsg_context_free},
      {"TAG capacity witness", tag_witness},
      {"acquisition ordering", acquisition_order},
      {"instantiation round trip", instantiation_round_trip},
      {"CLI determinism", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Timer t;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = Outcome{false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << " [" << fmt_seconds(t.seconds())
              << "] " << criteria[i].first << ": " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
