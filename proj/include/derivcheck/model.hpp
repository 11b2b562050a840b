#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derivcheck/expr.hpp"
#include "derivcheck/rational.hpp"

namespace derivcheck {

// A number mention in the problem text. Offsets count Unicode code points,
// half-open.
struct TextualNumber {
  std::string id;
  Rational value;
  std::size_t span_start = 0;
  std::size_t span_end = 0;
  std::string surface;

  friend bool operator==(const TextualNumber&, const TextualNumber&) = default;
};

// Non-epsilon tuples are keyed by slot, so each slot has at most one number.
// Numbers not aligned to any slot are listed as irrelevant (the (q, eps) tuples).
struct Alignment {
  std::map<char, std::string> slot_to_number;
  std::vector<std::string> irrelevant;

  const std::string* number_for(char slot) const {
    auto it = slot_to_number.find(slot);
    return it == slot_to_number.end() ? nullptr : &it->second;
  }

  friend bool operator==(const Alignment&, const Alignment&) = default;
};

struct Derivation {
  Template tmpl;
  Alignment alignment;

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

using NumberPair = std::pair<std::string, std::string>;

struct DerivationAnnotation {
  Derivation derivation;
  std::vector<NumberPair> equiv_tnum;

  friend bool operator==(const DerivationAnnotation&, const DerivationAnnotation&) = default;
};

struct WordProblem {
  std::string id;
  std::string text;
  std::vector<TextualNumber> numbers;
  EquationSystem gold_equations;
  std::vector<Rational> gold_solution;
  std::optional<DerivationAnnotation> annotation;

  const TextualNumber* find_number(std::string_view number_id) const;

  friend bool operator==(const WordProblem&, const WordProblem&) = default;
};

struct Prediction {
  std::string problem_id;
  Derivation derivation;
  std::optional<std::vector<Rational>> solution;
  // Some supplied solution value was written as a decimal.
  bool decimal_solution = false;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Equivalence classes over textual number ids, closed under symmetry and
// transitivity.
class EquivTNum {
 public:
  EquivTNum() = default;
  explicit EquivTNum(const std::vector<NumberPair>& pairs);

  bool equivalent(const std::string& a, const std::string& b) const;
  bool empty() const noexcept { return parent_.empty(); }

 private:
  std::string root(const std::string& id) const;
  std::map<std::string, std::string> parent_;
};

// Every slot -> value of its aligned number. Throws Error when a slot is
// unaligned or names a number the problem does not have.
SymbolValues slot_values(const Derivation& d, const std::vector<TextualNumber>& numbers);

// Adds (q, eps) tuples for every number not aligned to a slot.
void materialize_irrelevant(Alignment& alignment, const std::vector<TextualNumber>& numbers);

}  // namespace derivcheck
