#include "derivcheck/eqparse.hpp"

#include <cctype>
#include <optional>

#include "derivcheck/errors.hpp"

namespace derivcheck {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Equation equation() {
    Expr lhs = expr();
    skip_space();
    if (peek() != '=') fail(at_end() ? "expected '='" : std::string("unexpected '") + peek() + "'");
    ++pos_;
    Expr rhs = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return Equation{std::move(lhs), std::move(rhs)};
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, pos_ + 1); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      skip_space();
      char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      Expr rhs = term();
      acc = Expr::binary(c == '+' ? Expr::Kind::kAdd : Expr::Kind::kSub, std::move(acc), std::move(rhs));
    }
  }

  bool starts_factor() {
    skip_space();
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '(';
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      skip_space();
      char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        Expr rhs = factor();
        acc = Expr::binary(c == '*' ? Expr::Kind::kMul : Expr::Kind::kDiv, std::move(acc), std::move(rhs));
      } else if (starts_factor()) {
        acc = Expr::binary(Expr::Kind::kMul, std::move(acc), factor());
      } else {
        return acc;
      }
    }
  }

  Expr factor() {
    skip_space();
    if (at_end()) fail("unexpected end of equation");
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return Expr::negate(factor());
    }
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      skip_space();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c >= 'A' && c <= 'Z') {
      ++pos_;
      return Expr::slot(c);
    }
    if (c >= 'a' && c <= 'z') {
      ++pos_;
      return Expr::unknown(c);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [this] {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    auto next_is_digit = [this] {
      return pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
    };
    if (peek() == '.' && next_is_digit()) {
      ++pos_;
      digits();
    } else if (peek() == '/' && next_is_digit()) {
      ++pos_;
      digits();
    }
    try {
      return Expr::number(parse_rational(text_.substr(start, pos_ - start)));
    } catch (const std::invalid_argument& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub:
      return 1;
    case Expr::Kind::kMul:
    case Expr::Kind::kDiv:
      return 2;
    case Expr::Kind::kNeg:
      return 3;
    case Expr::Kind::kNumber:
      return e.value() < 0 ? 3 : 4;
    default:
      return 4;
  }
}

char op_char(Expr::Kind kind) {
  switch (kind) {
    case Expr::Kind::kAdd:
      return '+';
    case Expr::Kind::kSub:
      return '-';
    case Expr::Kind::kMul:
      return '*';
    default:
      return '/';
  }
}

std::string parenthesize(const Expr& e, bool wrap) {
  std::string s = render_expr(e);
  return wrap ? "(" + s + ")" : s;
}

bool is_digit_char(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

Equation parse_equation(std::string_view text, std::size_t line) { return Parser(text, line).equation(); }

Template parse_template(std::span<const std::string> lines) {
  if (lines.empty()) throw Error("equation system is empty");
  std::vector<Equation> equations;
  equations.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Equation eq = parse_equation(lines[i], i + 1);
    if (!contains_unknown(eq.lhs) && !contains_unknown(eq.rhs)) {
      throw ParseError("equation has no unknowns", i + 1, 1);
    }
    equations.push_back(std::move(eq));
  }
  return Template::from_equations(std::move(equations));
}

Template parse_template(std::initializer_list<std::string_view> lines) {
  std::vector<std::string> owned(lines.begin(), lines.end());
  return parse_template(std::span<const std::string>(owned));
}

std::string render_expr(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      return format_rational(e.value());
    case Expr::Kind::kSlot:
    case Expr::Kind::kUnknown:
      return std::string(1, e.name());
    case Expr::Kind::kNeg:
      return "-" + parenthesize(e.operand(), precedence(e.operand()) < 3);
    default: {
      const int p = precedence(e);
      std::string lhs = parenthesize(e.lhs(), precedence(e.lhs()) < p);
      std::string rhs = parenthesize(e.rhs(), precedence(e.rhs()) <= p);
      // "2/3" would re-lex as one fraction literal.
      if (e.kind() == Expr::Kind::kDiv && is_digit_char(lhs.back()) && is_digit_char(rhs.front())) {
        return lhs + " / " + rhs;
      }
      return lhs + op_char(e.kind()) + rhs;
    }
  }
}

std::string render_equation(const Equation& eq) { return render_expr(eq.lhs) + "=" + render_expr(eq.rhs); }

std::vector<std::string> render_template(const Template& t) {
  std::vector<std::string> out;
  out.reserve(t.equations.size());
  for (const auto& eq : t.equations) out.push_back(render_equation(eq));
  return out;
}

Template rename_template(const Template& t, const std::map<char, char>& slots, const std::map<char, char>& unknowns) {
  std::vector<Equation> equations;
  equations.reserve(t.equations.size());
  for (const auto& eq : t.equations) {
    equations.push_back(Equation{rename(eq.lhs, slots, unknowns), rename(eq.rhs, slots, unknowns)});
  }
  return Template::from_equations(std::move(equations));
}

Template canonicalize_template(const Template& t) {
  constexpr std::size_t kMaxSlots = 26;
  constexpr std::size_t kMaxUnknowns = 14;  // m..z
  if (t.slots.size() > kMaxSlots) throw CapacityExceeded("template has more than 26 slots");
  if (t.unknowns.size() > kMaxUnknowns) throw CapacityExceeded("template has more than 14 unknowns");
  std::map<char, char> slots;
  std::map<char, char> unknowns;
  for (std::size_t i = 0; i < t.slots.size(); ++i) slots[t.slots[i]] = static_cast<char>('A' + i);
  for (std::size_t i = 0; i < t.unknowns.size(); ++i) unknowns[t.unknowns[i]] = static_cast<char>('m' + i);
  return rename_template(t, slots, unknowns);
}

// ---------------------------------------------------------------------------
// Linear form

namespace {

bool is_value(const Expr& e, int v) { return e.is_number() && e.value() == v; }

Expr zero() { return Expr::number(Rational(0)); }
Expr one() { return Expr::number(Rational(1)); }

Expr neg(const Expr& a) {
  if (a.is_number()) return Expr::number(-a.value());
  if (a.kind() == Expr::Kind::kNeg) return a.operand();
  return Expr::negate(a);
}

Expr add(const Expr& a, const Expr& b) {
  if (is_value(a, 0)) return b;
  if (is_value(b, 0)) return a;
  if (a.is_number() && b.is_number()) return Expr::number(a.value() + b.value());
  return Expr::binary(Expr::Kind::kAdd, a, b);
}

Expr sub(const Expr& a, const Expr& b) {
  if (is_value(b, 0)) return a;
  if (is_value(a, 0)) return neg(b);
  if (a.is_number() && b.is_number()) return Expr::number(a.value() - b.value());
  return Expr::binary(Expr::Kind::kSub, a, b);
}

// Zero products are only folded when no division could be hidden by the fold;
// otherwise a zero divisor must still surface at instantiation.
Expr mul(const Expr& a, const Expr& b) {
  if (is_value(a, 0) && !contains_division(b)) return a;
  if (is_value(b, 0) && !contains_division(a)) return b;
  if (is_value(a, 1)) return b;
  if (is_value(b, 1)) return a;
  if (is_value(a, -1)) return neg(b);
  if (is_value(b, -1)) return neg(a);
  if (a.is_number() && b.is_number()) return Expr::number(a.value() * b.value());
  return Expr::binary(Expr::Kind::kMul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (is_value(b, 1)) return a;
  if (b.is_number() && b.value() != 0) {
    if (a.is_number()) return Expr::number(a.value() / b.value());
    if (is_value(a, 0)) return a;
  }
  return Expr::binary(Expr::Kind::kDiv, a, b);
}

struct Affine {
  std::map<char, Expr> terms;
  Expr constant = zero();
};

Affine scale(const Affine& x, const Expr& factor, bool divide) {
  Affine out;
  for (const auto& [u, coeff] : x.terms) out.terms.emplace(u, divide ? div(coeff, factor) : mul(coeff, factor));
  out.constant = divide ? div(x.constant, factor) : mul(x.constant, factor);
  return out;
}

Affine combine(const Affine& a, const Affine& b, bool subtract) {
  Affine out;
  out.terms = a.terms;
  for (const auto& [u, coeff] : b.terms) {
    auto it = out.terms.find(u);
    if (it == out.terms.end()) {
      out.terms.emplace(u, subtract ? neg(coeff) : coeff);
    } else {
      it->second = subtract ? sub(it->second, coeff) : add(it->second, coeff);
    }
  }
  out.constant = subtract ? sub(a.constant, b.constant) : add(a.constant, b.constant);
  return out;
}

Affine expand(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
    case Expr::Kind::kSlot: {
      Affine a;
      a.constant = e;
      return a;
    }
    case Expr::Kind::kUnknown: {
      Affine a;
      a.terms.emplace(e.name(), one());
      return a;
    }
    case Expr::Kind::kNeg: {
      Affine inner = expand(e.operand());
      for (auto& [u, coeff] : inner.terms) coeff = neg(coeff);
      inner.constant = neg(inner.constant);
      return inner;
    }
    case Expr::Kind::kAdd:
    case Expr::Kind::kSub:
      return combine(expand(e.lhs()), expand(e.rhs()), e.kind() == Expr::Kind::kSub);
    case Expr::Kind::kMul: {
      Affine l = expand(e.lhs());
      Affine r = expand(e.rhs());
      if (!l.terms.empty() && !r.terms.empty()) {
        throw NonlinearInUnknowns("product of unknowns in '" + render_expr(e) + "'");
      }
      if (l.terms.empty()) {
        // constant * affine keeps the constant on the left of each coefficient
        Affine out;
        for (const auto& [u, coeff] : r.terms) out.terms.emplace(u, mul(l.constant, coeff));
        out.constant = mul(l.constant, r.constant);
        return out;
      }
      return scale(l, r.constant, false);
    }
    case Expr::Kind::kDiv: {
      Affine r = expand(e.rhs());
      if (!r.terms.empty()) throw NonlinearInUnknowns("unknown in divisor of '" + render_expr(e) + "'");
      return scale(expand(e.lhs()), r.constant, true);
    }
  }
  return {};
}

}  // namespace

LinearForm to_linear_form(const Template& t) {
  LinearForm form;
  form.slots = t.slots;
  form.unknowns = t.unknowns;
  form.rows.reserve(t.equations.size());
  for (const auto& eq : t.equations) {
    Affine lhs = expand(eq.lhs);
    Affine rhs = expand(eq.rhs);
    LinearRow row{{}, sub(rhs.constant, lhs.constant)};
    row.coefficients.reserve(t.unknowns.size());
    for (char u : t.unknowns) {
      auto l = lhs.terms.find(u);
      auto r = rhs.terms.find(u);
      Expr lc = l == lhs.terms.end() ? zero() : l->second;
      Expr rc = r == rhs.terms.end() ? zero() : r->second;
      row.coefficients.push_back(sub(lc, rc));
    }
    form.rows.push_back(std::move(row));
  }
  return form;
}

// ---------------------------------------------------------------------------
// Literals

namespace {

void collect_literals(const Expr& e, std::size_t equation, std::vector<Literal>& out) {
  for_each_node(e, [&](const Expr& node) {
    if (node.is_number()) {
      out.push_back(Literal{LiteralRef{equation, 0}, node.value()});
    }
  });
}

Expr substitute(const Expr& e, std::size_t equation, std::size_t& counter,
                const std::map<LiteralRef, Expr>& replacements) {
  switch (e.kind()) {
    case Expr::Kind::kNumber: {
      auto it = replacements.find(LiteralRef{equation, counter++});
      return it == replacements.end() ? e : it->second;
    }
    case Expr::Kind::kSlot:
    case Expr::Kind::kUnknown:
      return e;
    case Expr::Kind::kNeg:
      return Expr::negate(substitute(e.operand(), equation, counter, replacements));
    default: {
      Expr lhs = substitute(e.lhs(), equation, counter, replacements);
      Expr rhs = substitute(e.rhs(), equation, counter, replacements);
      return Expr::binary(e.kind(), std::move(lhs), std::move(rhs));
    }
  }
}

}  // namespace

std::vector<Literal> literals_of(const Template& t) {
  std::vector<Literal> out;
  for (std::size_t i = 0; i < t.equations.size(); ++i) {
    const std::size_t first = out.size();
    collect_literals(t.equations[i].lhs, i, out);
    collect_literals(t.equations[i].rhs, i, out);
    for (std::size_t k = first; k < out.size(); ++k) out[k].ref.index = k - first;
  }
  return out;
}

Template replace_literals(const Template& t, const std::map<LiteralRef, Expr>& replacements) {
  std::vector<Equation> equations;
  equations.reserve(t.equations.size());
  for (std::size_t i = 0; i < t.equations.size(); ++i) {
    std::size_t counter = 0;
    Expr lhs = substitute(t.equations[i].lhs, i, counter, replacements);
    Expr rhs = substitute(t.equations[i].rhs, i, counter, replacements);
    equations.push_back(Equation{std::move(lhs), std::move(rhs)});
  }
  return Template::from_equations(std::move(equations));
}

}  // namespace derivcheck
