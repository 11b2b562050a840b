#pragma once

// Equation grammar (whitespace ignored):
//
//   equation := expr '=' expr
//   expr     := term (('+' | '-') term)*
//   term     := factor (('*' | '/')? factor)*      juxtaposition multiplies: "5m" == "5*m"
//   factor   := NUMBER | SLOT | UNKNOWN | '(' expr ')' | '-' factor
//   SLOT     := [A-Z]
//   UNKNOWN  := [a-z]
//   NUMBER   := [0-9]+ ('.' [0-9]+)? | [0-9]+ '/' [0-9]+

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "derivcheck/expr.hpp"

namespace derivcheck {

// `line` only labels errors.
Equation parse_equation(std::string_view text, std::size_t line = 1);
Template parse_template(std::span<const std::string> lines);
Template parse_template(std::initializer_list<std::string_view> lines);

std::string render_expr(const Expr& e);
std::string render_equation(const Equation& eq);
std::vector<std::string> render_template(const Template& t);

// Renames slots to A, B, C, ... and unknowns to m, n, o, ... by first appearance.
// Throws CapacityExceeded beyond 26 slots or 14 unknowns.
Template canonicalize_template(const Template& t);

Template rename_template(const Template& t, const std::map<char, char>& slots, const std::map<char, char>& unknowns);

// Per equation: sum_u coefficients[u] * u = constant, with coefficients and
// constant built from slots and numbers only.
struct LinearRow {
  std::vector<Expr> coefficients;  // aligned with LinearForm::unknowns
  Expr constant;
};

struct LinearForm {
  std::vector<char> slots;
  std::vector<char> unknowns;
  std::vector<LinearRow> rows;
};

// Throws NonlinearInUnknowns for unknown*unknown terms or unknowns in a divisor.
LinearForm to_linear_form(const Template& t);

// Position of a numeric literal: equation index, then index among that
// equation's literals (lhs before rhs, left to right).
struct LiteralRef {
  std::size_t equation = 0;
  std::size_t index = 0;

  friend auto operator<=>(const LiteralRef&, const LiteralRef&) = default;
};

struct Literal {
  LiteralRef ref;
  Rational value;
};

std::vector<Literal> literals_of(const Template& t);

// Substitutes the literal at each listed position. Positions not listed are kept.
Template replace_literals(const Template& t, const std::map<LiteralRef, Expr>& replacements);

}  // namespace derivcheck
