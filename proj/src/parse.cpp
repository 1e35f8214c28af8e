#include "lcy/parse.hpp"

#include <cctype>

namespace lcy {

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (pos < text.size()) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
};

struct Parser {
  Lexer lex;
  const std::vector<std::string>& context;

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError("syntax error", lex.line, lex.col, expected);
  }

  bool accept(char c) {
    if (lex.peek() == c) {
      lex.advance();
      return true;
    }
    return false;
  }
  void expect(char c, const std::string& what) {
    if (!accept(c)) fail(what);
  }

  Rat number() {
    lex.skip_ws();
    std::string digits;
    while (lex.pos < lex.text.size() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
      digits += lex.text[lex.pos];
      lex.advance();
    }
    if (digits.empty()) fail("digits");
    Int num(digits, 10);
    if (accept('/')) {
      std::string den;
      lex.skip_ws();
      while (lex.pos < lex.text.size() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
        den += lex.text[lex.pos];
        lex.advance();
      }
      if (den.empty()) fail("denominator digits");
      Rat r(num, Int(den, 10));
      r.canonicalize();
      return r;
    }
    return Rat(num);
  }

  std::string ident() {
    lex.skip_ws();
    std::string name;
    while (lex.pos < lex.text.size() &&
           (std::isalnum(static_cast<unsigned char>(lex.text[lex.pos])) || lex.text[lex.pos] == '_')) {
      name += lex.text[lex.pos];
      lex.advance();
    }
    if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) fail("identifier");
    return name;
  }

  uint32_t exponent() {
    lex.skip_ws();
    std::string digits;
    while (lex.pos < lex.text.size() && std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
      digits += lex.text[lex.pos];
      lex.advance();
    }
    if (digits.empty()) fail("exponent digits");
    return uint32_t(std::stoul(digits));
  }

  Poly primary() {
    char c = lex.peek();
    if (c == '(') {
      lex.advance();
      Poly e = expr();
      expect(')', "')'");
      return e;
    }
    if (c == '-') {
      lex.advance();
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Poly(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = ident();
      if (!context.empty() && std::find(context.begin(), context.end(), name) == context.end())
        throw ParseError("unknown variable " + name, lex.line, lex.col, "a context variable");
      return Poly::variable(name);
    }
    fail("a literal, variable or '('");
  }

  Poly factor() {
    Poly base = primary();
    if (accept('^')) {
      uint32_t e = exponent();
      return base.pow(e);
    }
    return base;
  }

  Poly term() {
    Poly acc = factor();
    while (accept('*')) acc *= factor();
    return acc;
  }

  Poly expr() {
    Poly acc;
    char c = lex.peek();
    bool neg = false;
    if (c == '-') {
      // handled inside factor via primary's '-'; keep uniform
    }
    acc = term();
    (void)neg;
    for (;;) {
      char op = lex.peek();
      if (op == '+') {
        lex.advance();
        acc += term();
      } else if (op == '-') {
        lex.advance();
        acc -= term();
      } else {
        break;
      }
    }
    return acc;
  }
};

}  // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& variable_context) {
  Parser p{Lexer{text}, variable_context};
  Poly out = p.expr();
  if (!p.lex.eof()) p.fail("end of input or an operator");
  return out;
}

std::string render_poly(const Poly& p) { return p.str(); }

Witness parse_witness(const std::string& spec, const Space& sp) {
  auto open = spec.find('(');
  if (open == std::string::npos || spec.back() != ')')
    throw ParseError("witness syntax error", 1, 1, "kind(...)");
  std::string kind = spec.substr(0, open);
  std::string body = spec.substr(open + 1, spec.size() - open - 2);
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      if (s[i] == sep && depth == 0) {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    parts.push_back(s.substr(start));
    return parts;
  };
  auto vars = sp.all_vars();
  if (kind == "point") {
    auto parts = split(body, ',');
    if (parts.size() != sp.var_count()) throw ParseError("wrong coordinate count", 1, int(open) + 2, "coordinates");
    Point pt;
    for (auto& s : parts) {
      Poly v = parse_poly(s, {});
      if (!v.is_constant()) throw ParseError("non-constant coordinate", 1, 1, "a rational number");
      pt.push_back(v.is_zero() ? Rat(0) : v.constant_value());
    }
    return PointW{pt};
  }
  if (kind == "line") {
    auto parts = split(body, ';');
    if (parts.size() != 2) throw ParseError("line needs two forms", 1, 1, "f1; f2");
    return LineOnSurfaceW{parse_poly(parts[0], vars), parse_poly(parts[1], vars)};
  }
  if (kind == "conic") {
    auto parts = split(body, ';');
    if (parts.size() < 2) throw ParseError("conic needs plane and quadric", 1, 1, "plane; quadric");
    ConicOnSurfaceW w{parse_poly(parts[0], vars), parse_poly(parts[1], vars), {}};
    if (parts.size() >= 3) {
      auto coords = split(parts[2], ',');
      for (auto& s : coords) {
        Poly v = parse_poly(s, {});
        w.base_point.push_back(v.is_zero() ? Rat(0) : v.constant_value());
      }
    }
    return w;
  }
  if (kind == "lambda") {
    auto parts = split(body, ';');
    if (parts.size() != 2) throw ParseError("lambda witness needs a root and the factor constants", 1, 1,
                                            "lambda; alpha=..,beta=..,gamma=..,delta=..");
    LambdaRootW w;
    w.rational = true;
    Poly l = parse_poly(parts[0], {});
    w.lambda = l.is_zero() ? Rat(0) : l.constant_value();
    for (auto& kv : split(parts[1], ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError("expected name=value", 1, 1, "name=value");
      std::string name = kv.substr(0, eq);
      name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
      Poly v = parse_poly(kv.substr(eq + 1), {});
      Rat val = v.is_zero() ? Rat(0) : v.constant_value();
      if (name == "alpha") w.alpha = val;
      else if (name == "beta") w.beta = val;
      else if (name == "gamma") w.gamma = val;
      else if (name == "delta") w.delta = val;
      else throw ParseError("unknown lambda component " + name, 1, 1, "alpha|beta|gamma|delta");
    }
    return w;
  }
  throw ParseError("unknown witness kind " + kind, 1, 1, "point|line|conic|lambda");
}

}  // namespace lcy
