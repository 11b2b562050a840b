#pragma once

// Test-only reference computations, written independently of the library's
// linear-form extraction and elimination.

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "derivcheck/expr.hpp"
#include "derivcheck/linsolve.hpp"

namespace derivcheck::testing {

using Matrix = std::vector<std::vector<Rational>>;

// Laplace expansion; fine for n <= 5.
Rational determinant(const Matrix& m);

enum class Kind { kUnique, kInconsistent, kUnderdetermined };

struct CramerResult {
  Kind kind;
  std::vector<Rational> values;  // kUnique only
};

// 2x2 system classified from determinants alone.
CramerResult cramer_2x2(const Matrix& a, const std::vector<Rational>& b);

// Square systems with nonzero determinant; nullopt otherwise.
std::optional<std::vector<Rational>> cramer_solve(const Matrix& a, const std::vector<Rational>& b);

// Coefficients by evaluating the raw equation trees at the origin and unit
// vectors of the unknowns.
LinearSystem probe_linear_system(const Template& t, const SymbolValues& slots);

// Sorted solution via probing and Cramer; nullopt if degenerate or a
// division by zero occurs.
std::optional<std::vector<Rational>> oracle_solution(const Template& t, const SymbolValues& slots);

// Brute-force equivalence: some slot bijection gives equal solutions on
// `rounds` draws of large nonzero values. Degenerate draws are redrawn.
bool oracle_equivalent(const Template& t1, const Template& t2, int rounds, std::uint64_t seed);

}  // namespace derivcheck::testing
