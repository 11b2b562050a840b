#include "derivcheck/expr.hpp"

#include <algorithm>
#include <optional>

#include "derivcheck/errors.hpp"

namespace derivcheck {

struct Expr::Node {
  Kind kind;
  Rational value;
  char name = 0;
  std::optional<Expr> lhs;
  std::optional<Expr> rhs;
};

Expr Expr::number(Rational value) {
  return Expr(std::make_shared<const Node>(Node{Kind::kNumber, std::move(value), 0, {}, {}}));
}

Expr Expr::slot(char name) { return Expr(std::make_shared<const Node>(Node{Kind::kSlot, {}, name, {}, {}})); }

Expr Expr::unknown(char name) {
  return Expr(std::make_shared<const Node>(Node{Kind::kUnknown, {}, name, {}, {}}));
}

Expr Expr::negate(Expr operand) {
  return Expr(std::make_shared<const Node>(Node{Kind::kNeg, {}, 0, std::move(operand), {}}));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Node{kind, {}, 0, std::move(lhs), std::move(rhs)}));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }

bool Expr::is_binary() const noexcept {
  switch (node_->kind) {
    case Kind::kAdd:
    case Kind::kSub:
    case Kind::kMul:
    case Kind::kDiv:
      return true;
    default:
      return false;
  }
}

const Rational& Expr::value() const { return node_->value; }
char Expr::name() const { return node_->name; }
const Expr& Expr::operand() const { return *node_->lhs; }
const Expr& Expr::lhs() const { return *node_->lhs; }
const Expr& Expr::rhs() const { return *node_->rhs; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::kNumber:
      return a.value() == b.value();
    case Expr::Kind::kSlot:
    case Expr::Kind::kUnknown:
      return a.name() == b.name();
    case Expr::Kind::kNeg:
      return a.operand() == b.operand();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

void for_each_node(const Expr& e, const std::function<void(const Expr&)>& visit) {
  visit(e);
  if (e.kind() == Expr::Kind::kNeg) {
    for_each_node(e.operand(), visit);
  } else if (e.is_binary()) {
    for_each_node(e.lhs(), visit);
    for_each_node(e.rhs(), visit);
  }
}

namespace {

bool any_node(const Expr& e, Expr::Kind kind) {
  if (e.kind() == kind) return true;
  if (e.kind() == Expr::Kind::kNeg) return any_node(e.operand(), kind);
  if (e.is_binary()) return any_node(e.lhs(), kind) || any_node(e.rhs(), kind);
  return false;
}

}  // namespace

bool contains_unknown(const Expr& e) { return any_node(e, Expr::Kind::kUnknown); }
bool contains_slot(const Expr& e) { return any_node(e, Expr::Kind::kSlot); }
bool contains_division(const Expr& e) { return any_node(e, Expr::Kind::kDiv); }

Rational evaluate(const Expr& e, const SymbolValues& slots, const SymbolValues& unknowns) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      return e.value();
    case Expr::Kind::kSlot: {
      auto it = slots.find(e.name());
      if (it == slots.end()) throw MissingSlot(e.name());
      return it->second;
    }
    case Expr::Kind::kUnknown: {
      auto it = unknowns.find(e.name());
      if (it == unknowns.end()) throw Error(std::string("unknown ") + e.name() + " has no value");
      return it->second;
    }
    case Expr::Kind::kNeg:
      return -evaluate(e.operand(), slots, unknowns);
    case Expr::Kind::kAdd:
      return evaluate(e.lhs(), slots, unknowns) + evaluate(e.rhs(), slots, unknowns);
    case Expr::Kind::kSub:
      return evaluate(e.lhs(), slots, unknowns) - evaluate(e.rhs(), slots, unknowns);
    case Expr::Kind::kMul:
      return evaluate(e.lhs(), slots, unknowns) * evaluate(e.rhs(), slots, unknowns);
    case Expr::Kind::kDiv: {
      Rational divisor = evaluate(e.rhs(), slots, unknowns);
      if (divisor == 0) throw DivideByZero("division by zero");
      return evaluate(e.lhs(), slots, unknowns) / divisor;
    }
  }
  return {};
}

Expr rename(const Expr& e, const std::map<char, char>& slots, const std::map<char, char>& unknowns) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      return e;
    case Expr::Kind::kSlot: {
      auto it = slots.find(e.name());
      return it == slots.end() ? e : Expr::slot(it->second);
    }
    case Expr::Kind::kUnknown: {
      auto it = unknowns.find(e.name());
      return it == unknowns.end() ? e : Expr::unknown(it->second);
    }
    case Expr::Kind::kNeg:
      return Expr::negate(rename(e.operand(), slots, unknowns));
    default:
      return Expr::binary(e.kind(), rename(e.lhs(), slots, unknowns), rename(e.rhs(), slots, unknowns));
  }
}

Template Template::from_equations(std::vector<Equation> equations) {
  if (equations.empty()) throw Error("equation system is empty");
  Template t;
  auto note = [&t](const Expr& node) {
    if (node.kind() == Expr::Kind::kSlot) {
      if (std::find(t.slots.begin(), t.slots.end(), node.name()) == t.slots.end()) t.slots.push_back(node.name());
    } else if (node.kind() == Expr::Kind::kUnknown) {
      if (std::find(t.unknowns.begin(), t.unknowns.end(), node.name()) == t.unknowns.end()) {
        t.unknowns.push_back(node.name());
      }
    }
  };
  for (std::size_t i = 0; i < equations.size(); ++i) {
    const auto& eq = equations[i];
    if (!contains_unknown(eq.lhs) && !contains_unknown(eq.rhs)) {
      throw Error("equation " + std::to_string(i + 1) + " has no unknowns");
    }
    for_each_node(eq.lhs, note);
    for_each_node(eq.rhs, note);
  }
  t.equations = std::move(equations);
  return t;
}

bool Template::has_slot(char s) const { return std::find(slots.begin(), slots.end(), s) != slots.end(); }

}  // namespace derivcheck
