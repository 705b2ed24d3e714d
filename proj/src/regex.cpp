#include "stgkit/regex.hpp"

#include <algorithm>
#include <cctype>

#include "stgkit/error.hpp"

namespace stgkit {

struct Regex::Node {
  RegexOp op;
  std::string token;
  std::vector<Regex> parts;
  bool nullable;
};

namespace {

constexpr std::string_view kEmptySetToken = "<empty>";
constexpr std::string_view kEmptyStringToken = "<eps>";

}  // namespace

Regex Regex::empty_set() {
  static const Regex value(std::make_shared<const Node>(Node{RegexOp::EmptySet, "", {}, false}));
  return value;
}

Regex Regex::empty_string() {
  static const Regex value(std::make_shared<const Node>(Node{RegexOp::EmptyString, "", {}, true}));
  return value;
}

Regex Regex::literal(std::string token) {
  return Regex(std::make_shared<const Node>(Node{RegexOp::Literal, std::move(token), {}, false}));
}

Regex Regex::concat(std::vector<Regex> parts) {
  std::vector<Regex> flat;
  for (Regex& part : parts) {
    if (part.op() == RegexOp::EmptySet) return empty_set();
    if (part.op() == RegexOp::EmptyString) continue;
    if (part.op() == RegexOp::Concat) {
      flat.insert(flat.end(), part.parts().begin(), part.parts().end());
    } else {
      flat.push_back(std::move(part));
    }
  }
  if (flat.empty()) return empty_string();
  if (flat.size() == 1) return flat.front();
  const bool nullable = std::all_of(flat.begin(), flat.end(), [](const Regex& r) { return r.nullable(); });
  return Regex(std::make_shared<const Node>(Node{RegexOp::Concat, "", std::move(flat), nullable}));
}

Regex Regex::alt(std::vector<Regex> parts) {
  std::vector<Regex> flat;
  auto add = [&](const Regex& r) {
    if (std::find(flat.begin(), flat.end(), r) == flat.end()) flat.push_back(r);
  };
  for (const Regex& part : parts) {
    if (part.op() == RegexOp::EmptySet) continue;
    if (part.op() == RegexOp::Union) {
      for (const Regex& p : part.parts()) add(p);
    } else {
      add(part);
    }
  }
  if (flat.empty()) return empty_set();
  if (flat.size() == 1) return flat.front();
  const bool nullable = std::any_of(flat.begin(), flat.end(), [](const Regex& r) { return r.nullable(); });
  return Regex(std::make_shared<const Node>(Node{RegexOp::Union, "", std::move(flat), nullable}));
}

Regex Regex::star(const Regex& inner) {
  switch (inner.op()) {
    case RegexOp::EmptySet:
    case RegexOp::EmptyString:
      return empty_string();
    case RegexOp::Star:
      return inner;
    case RegexOp::Plus:
      return star(inner.inner());
    default:
      return Regex(std::make_shared<const Node>(Node{RegexOp::Star, "", {inner}, true}));
  }
}

Regex Regex::plus(const Regex& inner) {
  switch (inner.op()) {
    case RegexOp::EmptySet:
    case RegexOp::EmptyString:
    case RegexOp::Star:
    case RegexOp::Plus:
      return inner;
    default:
      return Regex(std::make_shared<const Node>(Node{RegexOp::Plus, "", {inner}, inner.nullable()}));
  }
}

RegexOp Regex::op() const noexcept { return node_->op; }
const std::string& Regex::token() const noexcept { return node_->token; }
std::span<const Regex> Regex::parts() const noexcept { return node_->parts; }
bool Regex::nullable() const noexcept { return node_->nullable; }

bool operator==(const Regex& lhs, const Regex& rhs) {
  return lhs.node_ == rhs.node_ || (lhs <=> rhs) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Regex& lhs, const Regex& rhs) {
  if (lhs.node_ == rhs.node_) return std::strong_ordering::equal;
  if (auto c = lhs.op() <=> rhs.op(); c != 0) return c;
  if (auto c = lhs.token() <=> rhs.token(); c != 0) return c;
  return std::lexicographical_compare_three_way(lhs.parts().begin(), lhs.parts().end(), rhs.parts().begin(),
                                                rhs.parts().end());
}

Regex nonempty_part(const Regex& r) {
  switch (r.op()) {
    case RegexOp::EmptySet:
    case RegexOp::EmptyString:
      return Regex::empty_set();
    case RegexOp::Literal:
      return r;
    case RegexOp::Union: {
      std::vector<Regex> parts;
      for (const Regex& p : r.parts()) parts.push_back(nonempty_part(p));
      return Regex::alt(std::move(parts));
    }
    case RegexOp::Concat: {
      if (!r.nullable()) return r;
      // ne(r1 R) = ne(r1) R | ne(R), with every factor nullable here.
      std::span<const Regex> parts = r.parts();
      std::vector<Regex> rest(parts.begin() + 1, parts.end());
      Regex tail = Regex::concat(rest);
      std::vector<Regex> first{nonempty_part(parts.front())};
      first.insert(first.end(), rest.begin(), rest.end());
      return Regex::alt({Regex::concat(std::move(first)), nonempty_part(tail)});
    }
    case RegexOp::Star:
    case RegexOp::Plus:
      return Regex::plus(nonempty_part(r.inner()));
  }
  return r;
}

std::set<std::string> literals_of(const Regex& r) {
  std::set<std::string> out;
  if (r.op() == RegexOp::Literal) out.insert(r.token());
  for (const Regex& p : r.parts()) out.merge(literals_of(p));
  return out;
}

std::size_t operator_depth(const Regex& r) {
  std::size_t deepest = 0;
  for (const Regex& p : r.parts()) deepest = std::max(deepest, operator_depth(p));
  return r.parts().empty() ? 0 : deepest + 1;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// 0 = union, 1 = concat, 2 = postfix or atom.
int precedence(const Regex& r) {
  switch (r.op()) {
    case RegexOp::Union:
      return 0;
    case RegexOp::Concat:
      return 1;
    default:
      return 2;
  }
}

std::string print_at(const Regex& r, int context) {
  std::string body;
  switch (r.op()) {
    case RegexOp::EmptySet:
      body = kEmptySetToken;
      break;
    case RegexOp::EmptyString:
      body = kEmptyStringToken;
      break;
    case RegexOp::Literal:
      body = r.token();
      break;
    case RegexOp::Union:
      for (std::size_t i = 0; i < r.parts().size(); ++i) body += (i ? " | " : "") + print_at(r.parts()[i], 0);
      break;
    case RegexOp::Concat:
      for (std::size_t i = 0; i < r.parts().size(); ++i) body += (i ? " " : "") + print_at(r.parts()[i], 2);
      break;
    case RegexOp::Star:
    case RegexOp::Plus: {
      const Regex& inner = r.inner();
      const bool atomic = inner.parts().empty();
      body = (atomic ? print_at(inner, 2) : "( " + print_at(inner, 0) + " )") +
             (r.op() == RegexOp::Star ? "*" : "+");
      break;
    }
  }
  return precedence(r) < context ? "( " + body + " )" : body;
}

}  // namespace

std::string print_regex(const Regex& r) { return print_at(r, 0); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct RegexToken {
  std::string text;
  std::size_t offset;
};

std::vector<RegexToken> lex_regex(std::string_view text) {
  std::vector<RegexToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')' || c == '|') {
      out.push_back({std::string(1, c), i});
      ++i;
    } else {
      std::size_t end = i;
      while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])) && text[end] != '(' &&
             text[end] != ')' && text[end] != '|') {
        ++end;
      }
      std::string_view word = text.substr(i, end - i);
      std::size_t body = word.size();
      while (body > 0 && (word[body - 1] == '*' || word[body - 1] == '+')) --body;
      if (body > 0) out.push_back({std::string(word.substr(0, body)), i});
      for (std::size_t k = body; k < word.size(); ++k) out.push_back({std::string(1, word[k]), i + k});
      i = end;
    }
  }
  return out;
}

class RegexParser {
 public:
  explicit RegexParser(std::vector<RegexToken> tokens) : tokens_(std::move(tokens)) {}

  Regex parse() {
    Regex r = parse_alt();
    if (pos_ != tokens_.size()) fail("unexpected '" + tokens_[pos_].text + "'");
    return r;
  }

 private:
  Regex parse_alt() {
    std::vector<Regex> parts{parse_concat()};
    while (peek("|")) {
      ++pos_;
      parts.push_back(parse_concat());
    }
    return Regex::alt(std::move(parts));
  }

  Regex parse_concat() {
    std::vector<Regex> parts;
    while (pos_ < tokens_.size() && !peek("|") && !peek(")")) parts.push_back(parse_postfix());
    if (parts.empty()) fail("expected an expression");
    return Regex::concat(std::move(parts));
  }

  Regex parse_postfix() {
    Regex r = parse_atom();
    while (peek("*") || peek("+")) {
      r = tokens_[pos_].text == "*" ? Regex::star(r) : Regex::plus(r);
      ++pos_;
    }
    return r;
  }

  Regex parse_atom() {
    if (pos_ >= tokens_.size()) fail("unexpected end of expression");
    const RegexToken& t = tokens_[pos_];
    if (t.text == "(") {
      ++pos_;
      Regex inner = parse_alt();
      if (!peek(")")) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (t.text == ")" || t.text == "|" || t.text == "*" || t.text == "+") fail("unexpected '" + t.text + "'");
    ++pos_;
    if (t.text == kEmptyStringToken) return Regex::empty_string();
    if (t.text == kEmptySetToken) return Regex::empty_set();
    return Regex::literal(t.text);
  }

  bool peek(std::string_view text) const { return pos_ < tokens_.size() && tokens_[pos_].text == text; }

  [[noreturn]] void fail(const std::string& message) const {
    const std::size_t offset = pos_ < tokens_.size() ? tokens_[pos_].offset : std::string::npos;
    throw Error(ErrorCode::RegexSyntax,
                message + (offset == std::string::npos ? " at end" : " at offset " + std::to_string(offset)));
  }

  std::vector<RegexToken> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Regex parse_regex(std::string_view text) { return RegexParser(lex_regex(text)).parse(); }

}  // namespace stgkit
