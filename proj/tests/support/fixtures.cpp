#include "fixtures.hpp"

#include "derivcheck/annotate.hpp"
#include "derivcheck/eqparse.hpp"
#include "derivcheck/linsolve.hpp"

namespace derivcheck::testing {

Derivation make_derivation(std::initializer_list<std::string_view> equations, std::map<char, std::string> alignment,
                           const std::vector<TextualNumber>& numbers) {
  Derivation d{parse_template(equations), Alignment{std::move(alignment), {}}};
  materialize_irrelevant(d.alignment, numbers);
  return d;
}

WordProblem make_problem(const std::string& id, const std::string& text,
                         std::initializer_list<std::string_view> gold_equations,
                         std::initializer_list<std::string_view> annotation_template,
                         std::map<char, std::string> annotation_alignment) {
  WordProblem p;
  p.id = id;
  p.text = text;
  p.numbers = extract_textual_numbers(text);
  p.gold_equations = parse_template(gold_equations);
  p.gold_solution = *solution_multiset(solve(instantiate(p.gold_equations, Assignment{})));
  p.annotation =
      DerivationAnnotation{make_derivation(annotation_template, std::move(annotation_alignment), p.numbers), {}};
  return p;
}

WordProblem babysitting_problem() {
  return make_problem("babysitting",
                      "Jane earns 5 dollars per hour babysitting and 15 dollars per hour tutoring, and earned the same "
                      "amount from each job last week. This week she charged 5 dollars per hour for both jobs, working "
                      "the same hours at 5 dollars each, and earned 100 dollars.",
                      {"5*m=15*n", "5*m+5*n=100"}, {"A*m=B*n", "C*m+D*n=E"},
                      {{'A', "q1"}, {'B', "q2"}, {'C', "q3"}, {'D', "q4"}, {'E', "q5"}});
}

WordProblem sum_problem() {
  return make_problem("sum",
                      "The sum of 2 numbers is 25. 12 less than 4 times one of the numbers is 16 more than twice the "
                      "other number. Find the numbers.",
                      {"m+n=25", "4*m-2*n=28"}, {"m+n=A", "B*m-C*n=D+E"},
                      {{'A', "q2"}, {'B', "q4"}, {'C', "q7"}, {'D', "q6"}, {'E', "q3"}});
}

WordProblem larger_problem() {
  return make_problem("larger",
                      "The larger of two numbers is 2 more than 4 times the smaller. Their sum is 67. Find the "
                      "numbers.",
                      {"m-4*n=2", "m+n=67"}, {"m-A*n=B", "m+n=C"}, {{'A', "q3"}, {'B', "q2"}, {'C', "q4"}});
}

WordProblem martin_problem() {
  return make_problem("martin",
                      "Mrs. Martin bought 3 cups of coffee and 2 bagels and spent 12.75 dollars. Mr. Martin bought 2 "
                      "cups of coffee and 5 bagels and spent 14.00 dollars. Find the cost of one cup of coffee and "
                      "that of one bagel.",
                      {"3*m+2*n=12.75", "2*m+5*n=14"}, {"A*m+B*n=C", "D*m+E*n=F"},
                      {{'A', "q1"}, {'B', "q2"}, {'C', "q3"}, {'D', "q4"}, {'E', "q5"}, {'F', "q6"}});
}

}  // namespace derivcheck::testing
