#include "derivcheck/annotate.hpp"

#include <gtest/gtest.h>

#include "derivcheck/errors.hpp"
#include "derivcheck/metrics.hpp"
#include "derivcheck/utf8.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

namespace derivcheck {
namespace {

std::vector<Rational> values_of(const std::vector<TextualNumber>& numbers) {
  std::vector<Rational> out;
  for (const auto& n : numbers) out.push_back(n.value);
  return out;
}

void expect_faithful_spans(const std::string& text, const std::vector<TextualNumber>& numbers) {
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < numbers.size(); ++i) {
    const auto& n = numbers[i];
    EXPECT_EQ(n.id, "q" + std::to_string(i + 1));
    EXPECT_LT(n.span_start, n.span_end);
    EXPECT_GE(n.span_start, prev_end);
    EXPECT_EQ(utf8::substr(text, n.span_start, n.span_end), n.surface);
    prev_end = n.span_end;
  }
}

TEST(Extract, SumProblemHasSevenNumbers) {
  const std::string text =
      "The sum of 2 numbers is 25. 12 less than 4 times one of the numbers is 16 more than twice the other number.";
  const auto numbers = extract_textual_numbers(text);
  EXPECT_EQ(values_of(numbers), (std::vector<Rational>{2, 25, 12, 4, 1, 16, 2}));
  EXPECT_EQ(numbers[4].surface, "one");
  EXPECT_EQ(numbers[6].surface, "twice");
  expect_faithful_spans(text, numbers);
}

TEST(Extract, Decimals) {
  const auto numbers = extract_textual_numbers("12.75 dollars");
  ASSERT_EQ(numbers.size(), 1u);
  EXPECT_EQ(numbers[0].value, Rational(51, 4));
  EXPECT_EQ(numbers[0].surface, "12.75");
  EXPECT_TRUE(extract_textual_numbers("no numbers here").empty());
}

TEST(Extract, MartinNumbers) {
  const WordProblem p = testing::martin_problem();
  EXPECT_EQ(values_of(p.numbers), (std::vector<Rational>{3, 2, Rational(51, 4), 2, 5, 14, 1, 1}));
  EXPECT_EQ(p.numbers[5].surface, "14.00");
  expect_faithful_spans(p.text, p.numbers);
}

TEST(Extract, NumberWordsAndLexicon) {
  const std::string text =
      "Twenty-five kids, two hundred fifty adults, one thousand two hundred seats, ninety nine, thrice, half, "
      "a third, 1,250 coins, 3/4 cup, and room x9.";
  const auto numbers = extract_textual_numbers(text);
  EXPECT_EQ(values_of(numbers),
            (std::vector<Rational>{25, 250, 1200, 99, 3, Rational(1, 2), 1250, Rational(3, 4)}));
  EXPECT_EQ(numbers[0].surface, "Twenty-five");
  EXPECT_EQ(numbers[6].surface, "1,250");
  expect_faithful_spans(text, numbers);
}

TEST(Extract, UnicodeOffsets) {
  const std::string text = "Café sold 3 crêpes for 12.5 €, twice.";
  const auto numbers = extract_textual_numbers(text);
  ASSERT_EQ(numbers.size(), 3u);
  EXPECT_EQ(numbers[0].span_start, 10u);
  expect_faithful_spans(text, numbers);
}

TEST(Extract, RandomTextsKeepSpanInvariants) {
  testing::Rng rng(44);
  const std::vector<std::string> pieces{"one",   "two",    "twice", " ",   "-",    ",",    ".",     "12",  "3.5",
                                        "1/2",  "half",   "forty", "é",   "word", "hundred", "1,000", "x9", "thousand"};
  for (int i = 0; i < 500; ++i) {
    std::string text;
    for (int k = 0; k < 15; ++k) text += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
    expect_faithful_spans(text, extract_textual_numbers(text));
  }
}

TEST(Ambiguity, BabysittingConflictOnFive) {
  const auto report = detect_ambiguity(testing::babysitting_problem());
  ASSERT_TRUE(report.ambiguous);
  ASSERT_EQ(report.conflicts.size(), 1u);
  EXPECT_EQ(report.conflicts[0].value, Rational(5));
  EXPECT_EQ(report.conflicts[0].numbers, (std::vector<std::string>{"q1", "q3", "q4"}));
  EXPECT_EQ(report.conflicts[0].literals.size(), 3u);
}

TEST(Ambiguity, SumProblemConflictOnTwo) {
  const auto report = detect_ambiguity(testing::sum_problem());
  ASSERT_EQ(report.conflicts.size(), 1u);
  EXPECT_EQ(report.conflicts[0].value, Rational(2));
  EXPECT_EQ(report.conflicts[0].numbers, (std::vector<std::string>{"q1", "q7"}));
}

TEST(Ambiguity, DistinctValuesAreUnambiguous) {
  WordProblem p = testing::larger_problem();
  p.text = "The larger of the numbers is 2 more than 4 times the smaller. Their sum is 67.";
  p.numbers = extract_textual_numbers(p.text);
  EXPECT_FALSE(detect_ambiguity(p).ambiguous);
  // The repeated 1 ("one cup", "one bagel") never reaches the equations.
  const auto martin = detect_ambiguity(testing::martin_problem());
  ASSERT_EQ(martin.conflicts.size(), 1u);
  EXPECT_EQ(martin.conflicts[0].value, Rational(2));
}

TEST(AutoAlign, UnambiguousGivesDerivation) {
  WordProblem p = testing::larger_problem();
  p.text = "The larger of the numbers is 2 more than 4 times the smaller. Their sum is 67.";
  p.numbers = extract_textual_numbers(p.text);
  const auto result = auto_align(p);
  ASSERT_TRUE(std::holds_alternative<Derivation>(result));
  const auto& d = std::get<Derivation>(result);
  EXPECT_EQ(render_template(d.tmpl), (std::vector<std::string>{"m-A*n=B", "m+n=C"}));
  EXPECT_EQ(d.alignment.slot_to_number, (std::map<char, std::string>{{'A', "q2"}, {'B', "q1"}, {'C', "q3"}}));
}

TEST(AutoAlign, BabysittingNeedsHuman) {
  const auto result = auto_align(testing::babysitting_problem());
  ASSERT_TRUE(std::holds_alternative<AnnotationTask>(result));
  const auto& task = std::get<AnnotationTask>(result);
  ASSERT_EQ(task.slots.size(), 5u);
  for (std::size_t i : {0u, 2u, 3u}) EXPECT_EQ(task.slots[i].candidates, (std::vector<std::string>{"q1", "q3", "q4"}));
  EXPECT_EQ(task.slots[1].candidates, (std::vector<std::string>{"q2"}));
  EXPECT_EQ(task.slots[2].slot, 'C');
  EXPECT_EQ(task.status, TaskStatus::kPending);
}

TEST(AutoAlign, HalfMatchesPointFive) {
  WordProblem p;
  p.id = "half";
  p.text = "Half of a number is 6.";
  p.numbers = extract_textual_numbers(p.text);
  p.gold_equations = parse_template({"0.5*m=6"});
  p.gold_solution = {12};
  const auto result = auto_align(p);
  ASSERT_TRUE(std::holds_alternative<Derivation>(result));
  EXPECT_EQ(std::get<Derivation>(result).alignment.slot_to_number.at('A'), "q1");
}

TEST(AutoAlign, UncoveredLiteral) {
  WordProblem p;
  p.id = "open";
  p.text = "A number plus 3 is 10.";
  p.numbers = extract_textual_numbers(p.text);
  p.gold_equations = parse_template({"7*m+3=10"});
  p.gold_solution = {1};
  EXPECT_THROW(auto_align(p), UncoveredLiteral);
}

TEST(Induce, Babysitting) {
  const WordProblem p = testing::babysitting_problem();
  LiteralAlignment la;
  const char* ids[] = {"q1", "q2", "q3", "q4", "q5"};
  std::size_t k = 0;
  for (const auto& lit : literals_of(p.gold_equations)) la.numbers[lit.ref] = ids[k++];
  const Derivation d = induce_template(p.gold_equations, la, p.numbers);
  EXPECT_EQ(render_template(d.tmpl), (std::vector<std::string>{"A*m=B*n", "C*m+D*n=E"}));
  EXPECT_EQ(d, p.annotation->derivation);
}

TEST(Induce, DecompositionOfTwentyEight) {
  const WordProblem p = testing::sum_problem();
  LiteralAlignment la;
  la.numbers = {{{0, 0}, "q2"}, {{1, 0}, "q4"}, {{1, 1}, "q7"}};
  la.decompositions[{1, 2}] = Decomposition{{1, 2}, '+', {"q6", "q3"}};
  const Derivation d = induce_template(p.gold_equations, la, p.numbers);
  EXPECT_EQ(render_template(d.tmpl), (std::vector<std::string>{"m+n=A", "B*m-C*n=D+E"}));
  EXPECT_EQ(d.alignment.slot_to_number,
            (std::map<char, std::string>{{'A', "q2"}, {'B', "q4"}, {'C', "q7"}, {'D', "q6"}, {'E', "q3"}}));
}

TEST(Induce, EmptyAlignmentKeepsGroundedSystem) {
  const WordProblem p = testing::babysitting_problem();
  const Derivation d = induce_template(p.gold_equations, {}, p.numbers);
  EXPECT_EQ(d.tmpl, p.gold_equations);
  EXPECT_TRUE(d.tmpl.slots.empty());
}

TEST(Induce, ValueMismatch) {
  const WordProblem p = testing::babysitting_problem();
  LiteralAlignment la;
  la.numbers[{0, 0}] = "q2";
  EXPECT_THROW(induce_template(p.gold_equations, la, p.numbers), Error);
  LiteralAlignment bad_sum;
  bad_sum.decompositions[{1, 2}] = Decomposition{{1, 2}, '+', {"q1", "q2"}};
  EXPECT_THROW(induce_template(p.gold_equations, bad_sum, p.numbers), Error);
}

// Grounding an induced template with its alignment values gives back the
// source equations node for node.
TEST(Induce, InstantiateIsIdentity) {
  testing::Rng rng(19);
  for (int i = 0; i < 60; ++i) {
    const WordProblem p = testing::synthetic_problem(rng, "p").problem;
    const AnnotationTask task = make_task(p);
    LiteralAlignment la;
    for (const auto& s : task.slots) {
      la.numbers[s.literal] = s.candidates[std::uniform_int_distribution<std::size_t>(0, s.candidates.size() - 1)(rng)];
    }
    const Derivation d = induce_template(p.gold_equations, la, p.numbers);
    EXPECT_EQ(testing::ground(d.tmpl, slot_values(d, p.numbers)), p.gold_equations);
    EXPECT_EQ(canonicalize_template(d.tmpl), d.tmpl);
  }
}

TEST(AutoAlign, OnlyUnambiguousProblemsAreAligned) {
  testing::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const WordProblem p = testing::synthetic_problem(rng, "p").problem;
    const bool ambiguous = detect_ambiguity(p).ambiguous;
    try {
      const auto result = auto_align(p);
      EXPECT_EQ(std::holds_alternative<AnnotationTask>(result), ambiguous);
    } catch (const UncoveredLiteral&) {
      EXPECT_FALSE(ambiguous);
    }
  }
}

HumanDecision fig1_decision() {
  HumanDecision d;
  d.task_id = "babysitting";
  d.alignment = {{'A', "q1"}, {'B', "q2"}, {'C', "q3"}, {'D', "q4"}, {'E', "q5"}};
  return d;
}

TEST(HumanDecision, AppliesFullChoice) {
  const WordProblem p = testing::babysitting_problem();
  WordProblem bare = p;
  bare.annotation.reset();
  AnnotationTask task = make_task(bare);
  task.decision = fig1_decision();
  const WordProblem out = apply_human_decision(task, bare);
  ASSERT_TRUE(out.annotation);
  EXPECT_EQ(out.annotation->derivation, p.annotation->derivation);
  EXPECT_FALSE(annotation_inconsistency(out, EquivConfig{}));
}

TEST(HumanDecision, EquivalentNumbersBothScore) {
  WordProblem bare = testing::babysitting_problem();
  bare.annotation.reset();
  AnnotationTask task = make_task(bare);
  task.decision = fig1_decision();
  task.decision->equiv_tnum = {{"q3", "q4"}};
  const WordProblem annotated = apply_human_decision(task, bare);
  Derivation alternative = annotated.annotation->derivation;
  alternative.alignment.slot_to_number['C'] = "q4";
  alternative.alignment.slot_to_number['D'] = "q3";
  EXPECT_TRUE(derivation_accuracy(annotated.annotation->derivation, annotated, MetricConfig{}));
  EXPECT_TRUE(derivation_accuracy(alternative, annotated, MetricConfig{}));
}

void expect_decision_error(const AnnotationTask& task, const WordProblem& p, const std::string& needle) {
  try {
    apply_human_decision(task, p);
    FAIL() << "expected DecisionError containing " << needle;
  } catch (const DecisionError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(HumanDecision, Rejections) {
  WordProblem bare = testing::babysitting_problem();
  bare.annotation.reset();
  const AnnotationTask base = make_task(bare);

  AnnotationTask t = base;
  expect_decision_error(t, bare, "no decision");

  t.decision = fig1_decision();
  t.decision->alignment.erase('D');
  expect_decision_error(t, bare, "slot D unassigned");

  t.decision = fig1_decision();
  t.decision->alignment['Z'] = "q1";
  expect_decision_error(t, bare, "unknown slot Z");

  t.decision = fig1_decision();
  t.decision->alignment['A'] = "q2";
  expect_decision_error(t, bare, "not a candidate");

  t.decision = fig1_decision();
  t.decision->alignment['A'] = "q42";
  expect_decision_error(t, bare, "unknown number");

  t.decision = fig1_decision();
  t.decision->equiv_tnum = {{"q1", "q2"}};
  expect_decision_error(t, bare, "different values");

  t.decision = fig1_decision();
  t.decision->equiv_tnum = {{"q1", "q1"}};
  expect_decision_error(t, bare, "itself");
}

TEST(HumanDecision, OpenLiteralNeedsResolution) {
  WordProblem bare = testing::sum_problem();
  bare.annotation.reset();
  AnnotationTask task = make_task(bare);
  ASSERT_EQ(task.open_literals.size(), 1u);
  EXPECT_EQ(task.open_literals[0].value, Rational(28));
  HumanDecision d;
  d.alignment = {{'A', "q2"}, {'B', "q4"}, {'C', "q7"}};
  task.decision = d;
  expect_decision_error(task, bare, "unresolved");

  task.decision->decompositions = {Decomposition{task.open_literals[0].literal, '+', {"q6", "q3"}}};
  const WordProblem out = apply_human_decision(task, bare);
  EXPECT_EQ(out.annotation->derivation, testing::sum_problem().annotation->derivation);

  task.decision->decompositions.clear();
  task.decision->constants = {task.open_literals[0].literal};
  const WordProblem kept = apply_human_decision(task, bare);
  EXPECT_EQ(render_template(kept.annotation->derivation.tmpl), (std::vector<std::string>{"m+n=A", "B*m-C*n=28"}));

  task.decision->constants.clear();
  task.decision->decompositions = {Decomposition{task.open_literals[0].literal, '+', {"q6", "q2"}}};
  expect_decision_error(task, bare, "");
}

TEST(HumanDecision, InconsistentInstantiationRejected) {
  // Choosing "two" for the coefficient 2 in the larger problem is valid;
  // here the gold solution is tampered so no choice is consistent.
  WordProblem bare = testing::larger_problem();
  bare.annotation.reset();
  bare.gold_solution = {54, 14};
  AnnotationTask task = make_task(bare);
  HumanDecision d;
  d.alignment = {{'A', "q3"}, {'B', "q2"}, {'C', "q4"}};
  task.decision = d;
  expect_decision_error(task, bare, "inconsistent instantiation");
}

TEST(Literal, Format) { EXPECT_EQ(format_literal(LiteralRef{1, 2}), "e2#3"); }

}  // namespace
}  // namespace derivcheck
