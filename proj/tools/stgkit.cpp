// stgkit: command-line front end for the grammar workbench.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "stgkit/cfg.hpp"
#include "stgkit/grammar_io.hpp"
#include "stgkit/harness.hpp"
#include "stgkit/regular_bridge.hpp"

using nlohmann::json;
using namespace stgkit;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kGrammar = 3 };

struct Output {
  bool structured = false;
  std::vector<std::string> lines;
  json object = json::object();

  void line(std::string text) { lines.push_back(std::move(text)); }

  void flush() const {
    if (structured) {
      std::cout << object.dump(2) << "\n";
    } else {
      for (const std::string& l : lines) std::cout << l << "\n";
    }
  }
};

// Grammar load failures carry exit code 3.
struct GrammarFailure {
  std::vector<std::string> messages;
};

std::string show(const Sentence& s) { return s.empty() ? std::string(kEpsilonToken) : join_sentence(s); }

Grammar load(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_grammar(text);
  } catch (const ValidationError& e) {
    throw GrammarFailure{e.report().lines()};
  } catch (const SyntaxError& e) {
    throw GrammarFailure{{path + ": " + e.what()}};
  } catch (const LexicalViolation& e) {
    throw GrammarFailure{{path + ": " + e.what()}};
  }
}

json trace_json(const DerivationTrace& trace) {
  json steps = json::array();
  for (const TraceStep& step : trace.steps) {
    json j;
    if (const auto* s = std::get_if<InstantiateStep>(&step)) {
      j = {{"op", "instantiate"}, {"tree", s->tree}, {"repetitions", s->repetitions}};
    } else if (const auto* s = std::get_if<SubstituteStep>(&step)) {
      j = {{"op", "substitute"}, {"host", s->host}, {"address", s->address.path}, {"filler", s->filler}};
      if (s->path_labels) j["path_labels"] = *s->path_labels;
    } else if (const auto* s = std::get_if<AdjoinStep>(&step)) {
      j = {{"op", "adjoin"}, {"host", s->host}, {"address", s->address.path}, {"aux", s->aux}};
    }
    steps.push_back(std::move(j));
  }
  return steps;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(Output& out, const std::string& path) {
  const std::string text = read_text_file(path);
  Grammar grammar;
  try {
    grammar = parse_grammar_unchecked(text);
  } catch (const SyntaxError& e) {
    throw GrammarFailure{{path + ": " + e.what()}};
  } catch (const LexicalViolation& e) {
    throw GrammarFailure{{path + ": " + e.what()}};
  }
  const ValidationReport report = validate_grammar(grammar);
  out.object["file"] = path;
  out.object["formalism"] = std::string(to_string(formalism_of(grammar)));
  out.object["valid"] = report.ok();
  json violations = json::array();
  for (const Violation& v : report.violations) {
    violations.push_back({{"kind", std::string(to_string(v.kind))}, {"tree", v.tree}, {"address", v.address.path},
                          {"message", v.message}});
  }
  json warnings = json::array();
  for (const Violation& v : report.warnings) {
    warnings.push_back({{"kind", std::string(to_string(v.kind))}, {"tree", v.tree}, {"address", v.address.path},
                        {"message", v.message}});
  }
  out.object["violations"] = violations;
  out.object["warnings"] = warnings;
  for (const std::string& l : report.lines()) out.line(l);
  out.line(std::string(report.ok() ? "valid " : "invalid ") + std::string(to_string(formalism_of(grammar))) + " " +
           path);
  return report.ok() ? kOk : kGrammar;
}

int cmd_enumerate(Output& out, const std::string& path, std::size_t max_len, std::optional<std::size_t> max_steps,
                  bool trees) {
  const Grammar grammar = load(path);
  std::vector<Derivation> derivations;
  json info = json::object();
  switch (formalism_of(grammar)) {
    case Formalism::Stg:
      derivations = enumerate_stg(std::get<StgGrammar>(grammar), max_len);
      info["length_complete"] = true;
      break;
    case Formalism::Tsg: {
      TsgEnumeration e = enumerate_tsg(std::get<TsgGrammar>(grammar), max_len);
      derivations = std::move(e.derivations);
      info["length_complete"] = e.length_complete;
      if (e.step_bound) info["step_bound"] = *e.step_bound;
      break;
    }
    case Formalism::Tag: {
      const auto& g = std::get<TagGrammar>(grammar);
      TagEnumeration e = enumerate_tag(g, max_len, max_steps.value_or(member_step_bound(g, max_len)));
      derivations = std::move(e.derivations);
      info["length_complete"] = e.length_complete;
      info["step_bound"] = e.max_steps;
      break;
    }
  }
  out.object["file"] = path;
  out.object["max_len"] = max_len;
  out.object.update(info);
  if (info.contains("step_bound")) out.line("# step bound " + std::to_string(info["step_bound"].get<std::size_t>()));
  if (trees) {
    json items = json::array();
    for (const Derivation& d : derivations) {
      out.line(print_tree(d.tree));
      items.push_back({{"tree", print_tree(d.tree)}, {"yield", show(yield_tokens(d.tree))}});
    }
    out.object["trees"] = items;
  } else {
    std::vector<Sentence> sentences;
    for (const Derivation& d : derivations) sentences.push_back(yield_tokens(d.tree));
    std::sort(sentences.begin(), sentences.end(), shortlex_less);
    sentences.erase(std::unique(sentences.begin(), sentences.end()), sentences.end());
    json items = json::array();
    for (const Sentence& s : sentences) {
      out.line(show(s));
      items.push_back(show(s));
    }
    out.object["strings"] = items;
  }
  return kOk;
}

int cmd_member(Output& out, const std::string& path, const std::string& text) {
  const Grammar grammar = load(path);
  const Sentence sentence = split_sentence(text);
  for (const std::string& token : sentence) {
    if (!terminals_of(grammar).contains(token)) throw Error(ErrorCode::UnknownToken, token);
  }
  const MembershipVerdict verdict = grammar_member(grammar, sentence);
  out.object = {{"file", path}, {"sentence", show(sentence)}, {"member", verdict.accepted}, {"method", verdict.method}};
  std::string line = std::string(verdict.accepted ? "true" : "false") + " method=" + verdict.method;
  if (formalism_of(grammar) == Formalism::Tsg) {
    const ParseCount count = cfg_parse_count(extract_cfg(std::get<TsgGrammar>(grammar)), sentence);
    std::string parses = count.infinite ? "infinite" : std::to_string(count.count) + (count.saturated ? "+" : "");
    out.object["parses"] = parses;
    line += " parses=" + parses;
  }
  out.line(line);
  return verdict.accepted ? kOk : kNegative;
}

int cmd_derive(Output& out, const std::string& path, const std::string& text, bool with_trace) {
  const Grammar grammar = load(path);
  const Sentence sentence = split_sentence(text);
  for (const std::string& token : sentence) {
    if (!terminals_of(grammar).contains(token)) throw Error(ErrorCode::UnknownToken, token);
  }
  std::vector<Derivation> derivations;
  switch (formalism_of(grammar)) {
    case Formalism::Stg:
      derivations = derive_stg(std::get<StgGrammar>(grammar), sentence);
      break;
    case Formalism::Tsg:
      derivations = derive_tsg(std::get<TsgGrammar>(grammar), sentence);
      break;
    case Formalism::Tag:
      derivations = derive_tag(std::get<TagGrammar>(grammar), sentence);
      break;
  }
  out.object["file"] = path;
  out.object["sentence"] = show(sentence);
  json items = json::array();
  out.line("derivations " + std::to_string(derivations.size()));
  for (const Derivation& d : derivations) {
    out.line(print_tree(d.tree));
    json item = {{"tree", print_tree(d.tree)}, {"operations", d.trace.operation_count()}};
    if (with_trace) {
      for (const std::string& step : format_trace(d.trace)) out.line("  " + step);
      item["trace"] = trace_json(d.trace);
    }
    items.push_back(std::move(item));
  }
  out.object["derivations"] = items;
  return derivations.empty() ? kNegative : kOk;
}

int cmd_compile(Output& out, const std::string& path, const std::string& target) {
  const Grammar grammar = load(path);
  const Formalism f = formalism_of(grammar);
  out.object["file"] = path;
  out.object["to"] = target;
  if ((target == "regex" || target == "automaton") && f == Formalism::Stg) {
    const auto& g = std::get<StgGrammar>(grammar);
    const Regex rx = compile_stg_to_regex(g);
    if (target == "regex") {
      out.line(print_regex(rx));
      out.object["regex"] = print_regex(rx);
    } else {
      const Automaton machine = build_automaton(rx, g.terminals);
      const std::vector<std::string> lines = describe_automaton(machine);
      for (const std::string& l : lines) out.line(l);
      out.object["states"] = machine.state_count();
      out.object["lines"] = lines;
    }
    return kOk;
  }
  if (target == "cfg" && f == Formalism::Tsg) {
    const Cfg cfg = extract_cfg(std::get<TsgGrammar>(grammar));
    json productions = json::array();
    for (const Production& p : cfg.productions) {
      out.line(print_production(p));
      productions.push_back(print_production(p));
    }
    out.object["start"] = cfg.start;
    out.object["productions"] = productions;
    return kOk;
  }
  throw CLI::ValidationError("--to", "cannot compile a " + std::string(to_string(f)) + " grammar to " + target);
}

int cmd_regex2stg(Output& out, const std::string& text, const std::vector<std::string>& terminals,
                  const std::string& output) {
  const Regex rx = parse_regex(text);
  const std::set<std::string> alphabet(terminals.begin(), terminals.end());
  const StgGrammar grammar = regex_to_stg(rx, alphabet);
  const std::string printed = print_grammar(grammar);
  out.object["regex"] = print_regex(rx);
  out.object["trees"] = grammar.initial_trees.size();
  if (output.empty()) {
    std::istringstream lines(printed);
    for (std::string l; std::getline(lines, l);) out.line(l);
    out.object["grammar"] = printed;
  } else {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + output);
    file << printed;
    out.line("wrote " + output + " (" + std::to_string(grammar.initial_trees.size()) + " trees)");
    out.object["output"] = output;
  }
  return kOk;
}

int cmd_compare(Output& out, const std::string& a, const std::string& b, std::size_t max_len,
                std::optional<std::size_t> max_steps) {
  const Grammar lhs = load(a);
  const Grammar rhs = load(b);
  const CompareResult result = compare_grammars(lhs, rhs, max_len, max_steps);
  out.object = {{"lhs", a}, {"rhs", b}, {"max_len", max_len}, {"lhs_method", result.lhs_method},
                {"rhs_method", result.rhs_method}, {"equal", result.equiv.equal}, {"warnings", result.warnings}};
  for (const std::string& w : result.warnings) out.line("warning " + w);
  if (result.equiv.equal) {
    out.line("equal max-len=" + std::to_string(max_len));
    return kOk;
  }
  const std::string side = result.equiv.accepted_by == Side::Lhs ? "lhs" : "rhs";
  out.object["counterexample"] = show(*result.equiv.counterexample);
  out.object["accepted_by"] = side;
  out.line("counterexample \"" + show(*result.equiv.counterexample) + "\" accepted-by=" + side);
  return kNegative;
}

int cmd_stages(Output& out, const std::string& directory, const std::string& text) {
  std::vector<StageGrammar> stages;
  try {
    stages = load_stage_fixtures(directory);
  } catch (const ValidationError& e) {
    throw GrammarFailure{e.report().lines()};
  } catch (const SyntaxError& e) {
    throw GrammarFailure{{e.what()}};
  } catch (const LexicalViolation& e) {
    throw GrammarFailure{{e.what()}};
  } catch (const std::filesystem::filesystem_error& e) {
    throw std::runtime_error(e.what());
  }
  const StageResult result = classify_stage(split_sentence(text), stages);
  json per_stage = json::array();
  for (std::size_t i = 0; i < result.per_stage.size(); ++i) {
    const StageVerdict& v = result.per_stage[i];
    std::string line = "stage " + std::to_string(i + 1) + " " + v.name + " " +
                       (v.verdict.accepted ? "accept" : "reject") + " method=" + v.verdict.method;
    if (!v.verdict.note.empty()) line += " (" + v.verdict.note + ")";
    out.line(line);
    per_stage.push_back({{"stage", i + 1}, {"file", v.name}, {"formalism", std::string(to_string(v.formalism))},
                         {"member", v.verdict.accepted}, {"method", v.verdict.method}, {"note", v.verdict.note}});
  }
  const std::string minimal = result.minimal_stage ? std::to_string(*result.minimal_stage) : "none";
  out.line("minimal-stage " + minimal);
  out.object = {{"sentence", show(result.sentence)}, {"per_stage", per_stage}};
  out.object["minimal_stage"] = result.minimal_stage ? json(*result.minimal_stage) : json(nullptr);
  return result.minimal_stage ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schematic, substitution and adjoining tree grammars"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));

  std::string file, file_b, sentence, target, regex_text, output, fixtures;
  std::size_t max_len = 0;
  std::optional<std::size_t> max_steps;
  std::vector<std::string> terminals;
  bool trees = false, strings = false, with_trace = false;

  auto* validate = app.add_subcommand("validate", "Validate a grammar file");
  validate->add_option("file", file)->required();

  auto* enumerate = app.add_subcommand("enumerate", "List the language up to a length bound");
  enumerate->add_option("file", file)->required();
  enumerate->add_option("--max-len", max_len)->required();
  enumerate->add_option("--max-steps", max_steps, "Operation budget for tag grammars");
  auto* trees_flag = enumerate->add_flag("--trees", trees, "Print derived trees");
  enumerate->add_flag("--strings", strings, "Print sentences (default)")->excludes(trees_flag);

  auto* member = app.add_subcommand("member", "Decide membership of a sentence");
  member->add_option("file", file)->required();
  member->add_option("sentence", sentence)->required();

  auto* derive = app.add_subcommand("derive", "Show derivations of a sentence");
  derive->add_option("file", file)->required();
  derive->add_option("sentence", sentence)->required();
  derive->add_flag("--trace", with_trace, "Include the derivation steps");

  auto* compile = app.add_subcommand("compile", "Compile a grammar");
  compile->add_option("file", file)->required();
  compile->add_option("--to", target)->required()->check(CLI::IsMember({"regex", "automaton", "cfg"}));

  auto* regex2stg = app.add_subcommand("regex2stg", "Build a schematic tree grammar from a regular expression");
  regex2stg->add_option("regex", regex_text)->required();
  regex2stg->add_option("--terminals", terminals)->required()->delimiter(',');
  regex2stg->add_option("-o,--output", output);

  auto* compare = app.add_subcommand("compare", "Compare two languages up to a length bound");
  compare->add_option("a", file)->required();
  compare->add_option("b", file_b)->required();
  compare->add_option("--max-len", max_len)->required();
  compare->add_option("--max-steps", max_steps, "Operation budget for tag grammars");

  auto* stages = app.add_subcommand("stages", "Classify a sentence against the stage grammars");
  stages->add_option("--fixtures", fixtures)->required();
  stages->add_option("sentence", sentence)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Output out;
  out.structured = format == "structured";
  int code = kOk;
  try {
    if (validate->parsed()) code = cmd_validate(out, file);
    if (enumerate->parsed()) code = cmd_enumerate(out, file, max_len, max_steps, trees);
    if (member->parsed()) code = cmd_member(out, file, sentence);
    if (derive->parsed()) code = cmd_derive(out, file, sentence, with_trace);
    if (compile->parsed()) code = cmd_compile(out, file, target);
    if (regex2stg->parsed()) code = cmd_regex2stg(out, regex_text, terminals, output);
    if (compare->parsed()) code = cmd_compare(out, file, file_b, max_len, max_steps);
    if (stages->parsed()) code = cmd_stages(out, fixtures, sentence);
  } catch (const GrammarFailure& failure) {
    for (const std::string& m : failure.messages) std::cerr << m << "\n";
    return kGrammar;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::InvalidGrammar ? kGrammar : kUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  out.flush();
  return code;
}
