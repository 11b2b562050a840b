#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "derivcheck/eqparse.hpp"
#include "derivcheck/rational.hpp"

namespace derivcheck {

// Slot name -> value.
using Assignment = SymbolValues;

// rows = equations, columns = unknowns (in `unknowns` order).
struct LinearSystem {
  std::vector<char> unknowns;
  std::vector<std::vector<Rational>> matrix;
  std::vector<Rational> constants;
};

struct Unique {
  std::map<char, Rational> values;
  friend bool operator==(const Unique&, const Unique&) = default;
};
struct Inconsistent {
  friend bool operator==(const Inconsistent&, const Inconsistent&) = default;
};
struct Underdetermined {
  friend bool operator==(const Underdetermined&, const Underdetermined&) = default;
};

using SolveOutcome = std::variant<Unique, Inconsistent, Underdetermined>;

// Throws MissingSlot if the assignment does not cover every slot, DivideByZero
// if a coefficient divides by zero under it.
LinearSystem instantiate(const LinearForm& form, const Assignment& assignment);
LinearSystem instantiate(const Template& t, const Assignment& assignment);

// Exact Gauss-Jordan elimination, pivoting on the first nonzero entry.
SolveOutcome solve(LinearSystem system);

// Sorted solution values for Unique, nullopt otherwise.
std::optional<std::vector<Rational>> solution_multiset(const SolveOutcome& outcome);

// "m=15, n=5", "inconsistent" or "underdetermined".
std::string describe(const SolveOutcome& outcome);

}  // namespace derivcheck
