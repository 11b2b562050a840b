#pragma once

// Worked-example problems with their gold annotations.

#include <map>
#include <string>

#include "derivcheck/model.hpp"

namespace derivcheck::testing {

Derivation make_derivation(std::initializer_list<std::string_view> equations, std::map<char, std::string> alignment,
                           const std::vector<TextualNumber>& numbers);

// Numbers extracted from text, gold equations parsed, annotation attached.
WordProblem make_problem(const std::string& id, const std::string& text,
                         std::initializer_list<std::string_view> gold_equations,
                         std::initializer_list<std::string_view> annotation_template,
                         std::map<char, std::string> annotation_alignment);

// Jane's babysitting and tutoring: {5m=15n, 5m+5n=100}, m=15, n=5.
WordProblem babysitting_problem();
// "The sum of 2 numbers is 25...": {m+n=25, 4m-2n=28}, 28 annotated as 16+12.
WordProblem sum_problem();
// "The larger of two numbers is 2 more than 4 times the smaller...".
WordProblem larger_problem();
// Mrs. Martin's coffee and bagels.
WordProblem martin_problem();

}  // namespace derivcheck::testing
