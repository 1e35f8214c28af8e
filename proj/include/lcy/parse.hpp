#ifndef LCY_PARSE_HPP
#define LCY_PARSE_HPP

#include "lcy/family.hpp"

namespace lcy {

struct ParseError : std::runtime_error {
  int line, col;
  std::string expected;
  ParseError(const std::string& msg, int line_, int col_, std::string expected_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " + std::to_string(col_) +
                           " (expected " + expected_ + ")"),
        line(line_),
        col(col_),
        expected(std::move(expected_)) {}
};

// Grammar: integer/rational literals, variables, + - * ^ and parentheses;
// juxtaposition is a syntax error. Variables outside the context are
// rejected; an empty context admits any identifier.
Poly parse_poly(const std::string& text, const std::vector<std::string>& variable_context = {});

// canonical graded-lex rendering; parse(render(p)) == p
std::string render_poly(const Poly& p);

// witness mini-grammar:
//   point(1,0,0,0)
//   line(y; z)              (two forms separated by ';')
//   conic(t; x*z - y^2)     (plane; quadric -- base point searched)
//   lambda(1/2; alpha=..., beta=..., gamma=..., delta=...)
Witness parse_witness(const std::string& spec, const Space& sp);

}  // namespace lcy

#endif
