#include "derivcheck/linsolve.hpp"

#include <utility>

#include "derivcheck/errors.hpp"

namespace derivcheck {

LinearSystem instantiate(const LinearForm& form, const Assignment& assignment) {
  for (char s : form.slots) {
    if (!assignment.contains(s)) throw MissingSlot(s);
  }
  LinearSystem system;
  system.unknowns = form.unknowns;
  system.matrix.reserve(form.rows.size());
  system.constants.reserve(form.rows.size());
  for (const auto& row : form.rows) {
    std::vector<Rational> values;
    values.reserve(row.coefficients.size());
    for (const auto& coeff : row.coefficients) values.push_back(evaluate(coeff, assignment));
    system.matrix.push_back(std::move(values));
    system.constants.push_back(evaluate(row.constant, assignment));
  }
  return system;
}

LinearSystem instantiate(const Template& t, const Assignment& assignment) {
  return instantiate(to_linear_form(t), assignment);
}

SolveOutcome solve(LinearSystem system) {
  auto& a = system.matrix;
  auto& b = system.constants;
  const std::size_t rows = a.size();
  const std::size_t cols = system.unknowns.size();

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    std::swap(b[pivot], b[rank]);

    const Rational inv = 1 / a[rank][col];
    for (std::size_t j = col; j < cols; ++j) a[rank][j] *= inv;
    b[rank] *= inv;

    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t j = col; j < cols; ++j) a[r][j] -= factor * a[rank][j];
      b[r] -= factor * b[rank];
    }
    pivot_col.push_back(col);
    ++rank;
  }

  // Rows below the rank are all-zero on the left; a nonzero constant there
  // means the augmented matrix has higher rank.
  for (std::size_t r = rank; r < rows; ++r) {
    if (b[r] != 0) return Inconsistent{};
  }
  if (rank < cols) return Underdetermined{};

  Unique out;
  for (std::size_t r = 0; r < rank; ++r) out.values.emplace(system.unknowns[pivot_col[r]], b[r]);
  return out;
}

std::optional<std::vector<Rational>> solution_multiset(const SolveOutcome& outcome) {
  const auto* unique = std::get_if<Unique>(&outcome);
  if (!unique) return std::nullopt;
  std::vector<Rational> values;
  values.reserve(unique->values.size());
  for (const auto& [name, value] : unique->values) values.push_back(value);
  return sorted_values(std::move(values));
}

std::string describe(const SolveOutcome& outcome) {
  if (std::holds_alternative<Inconsistent>(outcome)) return "inconsistent";
  if (std::holds_alternative<Underdetermined>(outcome)) return "underdetermined";
  std::string out;
  for (const auto& [name, value] : std::get<Unique>(outcome).values) {
    if (!out.empty()) out += ", ";
    out += name;
    out += "=" + format_rational(value);
  }
  return out;
}

}  // namespace derivcheck
