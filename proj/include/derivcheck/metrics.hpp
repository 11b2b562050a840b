#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "derivcheck/equiv.hpp"
#include "derivcheck/model.hpp"

namespace derivcheck {

enum class ReferenceMode {
  kFirst,   // first derivation matching the gold equations
  kRandom,  // seeded uniform choice among them
};

struct MetricConfig {
  // Unset: exact for rational predictions, kDecimalTolerance when a
  // prediction writes its solution in decimals.
  std::optional<Rational> tolerance;
  EquivConfig equiv;
  ReferenceMode reference_mode = ReferenceMode::kFirst;
  bool allow_slot_sharing = true;
};

inline const Rational kDecimalTolerance{1, 10000};

Rational effective_tolerance(const MetricConfig& config, bool decimal_solution);

// 1 iff every gold value can be matched to a distinct predicted value within
// `tolerance`. Extra predicted values are not penalized.
// Throws std::invalid_argument for an empty gold solution.
bool solution_accuracy(std::span<const Rational> predicted, std::span<const Rational> gold, const Rational& tolerance);

// Template induced from the gold equations (each literal that some textual
// number carries becomes a slot) with an alignment chosen per `reference_mode`.
std::optional<Derivation> approx_reference_derivation(const WordProblem& problem, const MetricConfig& config);

bool equation_accuracy(const Derivation& pred, const WordProblem& problem, const MetricConfig& config);

// Throws MissingAnnotation.
bool derivation_accuracy(const Derivation& pred, const WordProblem& problem, const MetricConfig& config);

// Reason the problem's annotation fails to reproduce its gold equations and
// solution, if it does.
std::optional<std::string> annotation_inconsistency(const WordProblem& problem, const EquivConfig& config);

struct ProblemVerdict {
  std::string problem_id;
  bool solution_ok = false;
  bool equation_ok = false;
  bool derivation_ok = false;
  bool missing_prediction = false;
  std::vector<std::string> diagnostics;
};

struct MetricsReport {
  std::vector<ProblemVerdict> per_problem;
  double solution_accuracy = 0.0;
  double equation_accuracy = 0.0;
  double derivation_accuracy = 0.0;
  std::uint64_t seed = 0;
  int rounds = 0;
  std::string tolerance;
  ReferenceMode reference_mode = ReferenceMode::kFirst;
  std::vector<std::string> warnings;
};

// Problems are scored in parallel (OpenMP); the report equals
// evaluate_corpus_serial's. Throws Error for duplicate or unresolvable
// prediction ids.
MetricsReport evaluate_corpus(const std::vector<WordProblem>& gold, const std::vector<Prediction>& predictions,
                              const MetricConfig& config);
MetricsReport evaluate_corpus_serial(const std::vector<WordProblem>& gold, const std::vector<Prediction>& predictions,
                                     const MetricConfig& config);

void write_report(const MetricsReport& report, std::ostream& out);
std::string format_table(const MetricsReport& report);

const char* reference_mode_name(ReferenceMode mode);

namespace detail {

struct ScoredProblem {
  ProblemVerdict verdict;
  std::vector<std::string> warnings;
};

// Index of predictions by problem id, validated against the corpus.
std::vector<const Prediction*> match_predictions(const std::vector<WordProblem>& gold,
                                                 const std::vector<Prediction>& predictions);

ScoredProblem score_problem(const WordProblem& problem, const Prediction* prediction, const MetricConfig& config);

MetricsReport aggregate(std::vector<ScoredProblem> scored, const MetricConfig& config);

}  // namespace detail

}  // namespace derivcheck
