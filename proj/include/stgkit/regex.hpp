#pragma once

#include <compare>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stgkit {

enum class RegexOp { EmptySet, EmptyString, Literal, Concat, Union, Star, Plus };

/// Immutable regular expression over word tokens. The factories simplify:
/// empty-set and empty-string operands are folded away, nested concatenations
/// and unions are flattened, unions drop duplicate alternatives, and
/// star/plus absorb each other.
class Regex {
 public:
  static Regex empty_set();
  static Regex empty_string();
  static Regex literal(std::string token);
  static Regex concat(std::vector<Regex> parts);
  static Regex alt(std::vector<Regex> parts);
  static Regex star(const Regex& inner);
  static Regex plus(const Regex& inner);

  RegexOp op() const noexcept;
  const std::string& token() const noexcept;
  std::span<const Regex> parts() const noexcept;
  const Regex& inner() const { return parts().front(); }

  bool nullable() const noexcept;
  bool is_empty_set() const noexcept { return op() == RegexOp::EmptySet; }

  friend bool operator==(const Regex& lhs, const Regex& rhs);
  friend std::strong_ordering operator<=>(const Regex& lhs, const Regex& rhs);

 private:
  struct Node;
  explicit Regex(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// The non-empty part: a regex for L(r) minus the empty string.
Regex nonempty_part(const Regex& r);

std::set<std::string> literals_of(const Regex& r);

std::size_t operator_depth(const Regex& r);

/// Space-separated surface syntax, e.g. `( a | b )* c`. `<eps>` is the empty
/// string and `<empty>` the empty set. Parses back to an equal regex.
std::string print_regex(const Regex& r);

/// Tokens are separated by spaces; `(`, `)` and `|` also split tokens, and
/// trailing `*`/`+` on a token are postfix operators. Throws RegexSyntax.
Regex parse_regex(std::string_view text);

}  // namespace stgkit
