#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "derivcheck/rational.hpp"

namespace derivcheck {

// Values bound to slot or unknown names.
using SymbolValues = std::map<char, Rational>;

// Immutable expression tree. Copies share structure.
class Expr {
 public:
  enum class Kind : std::uint8_t { kNumber, kSlot, kUnknown, kNeg, kAdd, kSub, kMul, kDiv };

  static Expr number(Rational value);
  static Expr slot(char name);
  static Expr unknown(char name);
  static Expr negate(Expr operand);
  static Expr binary(Kind kind, Expr lhs, Expr rhs);

  Kind kind() const noexcept;
  bool is_binary() const noexcept;
  bool is_number() const noexcept { return kind() == Kind::kNumber; }
  const Rational& value() const;  // kNumber
  char name() const;              // kSlot, kUnknown
  const Expr& operand() const;    // kNeg
  const Expr& lhs() const;        // binary kinds
  const Expr& rhs() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool contains_unknown(const Expr& e);
bool contains_slot(const Expr& e);
bool contains_division(const Expr& e);

// Pre-order, left to right.
void for_each_node(const Expr& e, const std::function<void(const Expr&)>& visit);

// Evaluates with the given bindings. Throws MissingSlot for unbound slots,
// DivideByZero for a zero divisor, Error for an unbound unknown.
Rational evaluate(const Expr& e, const SymbolValues& slots, const SymbolValues& unknowns = {});

// Rebuilds the tree with every Slot/Unknown renamed through the maps;
// names absent from a map are kept.
Expr rename(const Expr& e, const std::map<char, char>& slots, const std::map<char, char>& unknowns);

struct Equation {
  Expr lhs;
  Expr rhs;

  friend bool operator==(const Equation&, const Equation&) = default;
};

// An equation system over unknowns (a..z) and coefficient slots (A..Z).
// Grounded systems are templates without slots.
struct Template {
  std::vector<Equation> equations;
  std::vector<char> slots;     // first-appearance order
  std::vector<char> unknowns;  // first-appearance order

  // Computes slot and unknown order. Throws Error for an empty system or an
  // equation without unknowns.
  static Template from_equations(std::vector<Equation> equations);

  bool grounded() const noexcept { return slots.empty(); }
  bool has_slot(char s) const;

  friend bool operator==(const Template&, const Template&) = default;
};

using EquationSystem = Template;

}  // namespace derivcheck
