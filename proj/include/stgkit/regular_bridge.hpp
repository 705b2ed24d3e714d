#pragma once

#include <set>
#include <string>

#include "stgkit/automaton.hpp"
#include "stgkit/regex.hpp"
#include "stgkit/stg.hpp"

namespace stgkit {

/// Regular expression for the string language of `grammar`. Throws InvalidGrammar.
Regex compile_stg_to_regex(const StgGrammar& grammar);

/// Language of complete trees rooted at `label` when every label in `forbidden`
/// is barred (the compiler's recursion, exposed for testing). With `memoize`
/// off every call is recomputed from scratch.
Regex stg_lang(const StgGrammar& grammar, const std::string& label, const std::set<std::string>& forbidden,
               bool memoize = true);

/// Labels that can occur in any derivation from `label`, `label` included.
std::set<std::string> reachable_labels(const StgGrammar& grammar, const std::string& label);

Automaton compile_stg_to_automaton(const StgGrammar& grammar);

/// An STG over `terminals` whose string language is L(expression).
/// Throws UnsupportedLiteral for literals outside `terminals`.
StgGrammar regex_to_stg(const Regex& expression, const std::set<std::string>& terminals);

}  // namespace stgkit
