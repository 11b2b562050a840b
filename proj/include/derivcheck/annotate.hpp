#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "derivcheck/eqparse.hpp"
#include "derivcheck/model.hpp"

namespace derivcheck {

// Rule-based textual number extraction. Recognizes digit literals ("25",
// "12.75", "1,000", "3/4"), number words one..ninety-nine composed with
// hundred/thousand ("two hundred fifty", "twenty-five"), and the
// multiplicatives twice (2), thrice (3), half (1/2). Ids are q1, q2, ...
std::vector<TextualNumber> extract_textual_numbers(std::string_view text);

struct LiteralConflict {
  Rational value;
  std::vector<std::string> numbers;
  std::vector<LiteralRef> literals;
};

struct AmbiguityReport {
  std::string problem_id;
  bool ambiguous = false;
  std::vector<LiteralConflict> conflicts;
};

// A value conflicts iff at least two textual numbers carry it and it occurs as
// a literal in the gold equations.
AmbiguityReport detect_ambiguity(const WordProblem& problem);

// One literal of the gold equations awaiting a number.
struct SlotSkeleton {
  char slot;
  LiteralRef literal;
  Rational value;
  std::vector<std::string> candidates;  // span order, all valued `value`
};

// A gold literal no textual number carries.
struct OpenLiteral {
  LiteralRef literal;
  Rational value;
};

// The annotator's reading of an open literal as a sum or product of numbers
// (28 = 16 + 12).
struct Decomposition {
  LiteralRef literal;
  char op = '+';  // '+' or '*'
  std::vector<std::string> numbers;
};

struct HumanDecision {
  std::string task_id;
  std::map<char, std::string> alignment;  // skeleton slot -> number id
  std::vector<NumberPair> equiv_tnum;
  std::vector<Decomposition> decompositions;
  std::vector<LiteralRef> constants;  // open literals kept as constants
};

enum class TaskStatus { kPending, kDone };

struct AnnotationTask {
  std::string id;
  WordProblem problem;
  std::vector<SlotSkeleton> slots;
  std::vector<OpenLiteral> open_literals;
  std::optional<HumanDecision> decision;
  TaskStatus status = TaskStatus::kPending;
};

// Which number fills each literal position, and which open positions are
// decomposed. Positions in neither map stay constants.
struct LiteralAlignment {
  std::map<LiteralRef, std::string> numbers;
  std::map<LiteralRef, Decomposition> decompositions;
};

// Aligned literals become slots named A, B, ... in order of appearance.
// Instantiating the result with the alignment reproduces `equations` with each
// decomposed literal written out as its sum or product.
// Throws Error on a position/value mismatch.
Derivation induce_template(const EquationSystem& equations, const LiteralAlignment& alignment,
                           const std::vector<TextualNumber>& numbers);

// Builds the task for a problem regardless of ambiguity.
AnnotationTask make_task(const WordProblem& problem);

using AutoAlignResult = std::variant<Derivation, AnnotationTask>;

// Unambiguous problems with every literal covered get their derivation;
// ambiguous ones a task. Throws UncoveredLiteral when an unambiguous problem
// has a literal no textual number carries.
AutoAlignResult auto_align(const WordProblem& problem);

// Applies task.decision. The returned problem carries an annotation that
// instantiates to a system solving to the gold solution.
// Throws DecisionError with the reason on any invalid decision.
WordProblem apply_human_decision(const AnnotationTask& task, const WordProblem& problem);

std::string format_literal(const LiteralRef& ref);

}  // namespace derivcheck
