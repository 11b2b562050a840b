#include "derivcheck/metrics.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "derivcheck/annotate.hpp"
#include "derivcheck/errors.hpp"

namespace derivcheck {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Rational abs_diff(const Rational& a, const Rational& b) { return a > b ? Rational(a - b) : Rational(b - a); }

// Kuhn's augmenting paths; gold side is the left.
bool try_match(std::size_t g, const std::vector<std::vector<std::size_t>>& edges, std::vector<bool>& seen,
               std::vector<std::ptrdiff_t>& owner) {
  for (std::size_t p : edges[g]) {
    if (seen[p]) continue;
    seen[p] = true;
    if (owner[p] < 0 || try_match(static_cast<std::size_t>(owner[p]), edges, seen, owner)) {
      owner[p] = static_cast<std::ptrdiff_t>(g);
      return true;
    }
  }
  return false;
}

Template ground(const Template& t, const SymbolValues& values) {
  std::vector<Equation> equations;
  std::function<Expr(const Expr&)> sub = [&](const Expr& e) -> Expr {
    switch (e.kind()) {
      case Expr::Kind::kSlot:
        return Expr::number(values.at(e.name()));
      case Expr::Kind::kNumber:
      case Expr::Kind::kUnknown:
        return e;
      case Expr::Kind::kNeg:
        return Expr::negate(sub(e.operand()));
      default:
        return Expr::binary(e.kind(), sub(e.lhs()), sub(e.rhs()));
    }
  };
  for (const auto& eq : t.equations) equations.push_back(Equation{sub(eq.lhs), sub(eq.rhs)});
  return Template::from_equations(std::move(equations));
}

std::string format_values(const std::vector<Rational>& values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_rational(values[i]);
  }
  return out + "}";
}

}  // namespace

Rational effective_tolerance(const MetricConfig& config, bool decimal_solution) {
  if (config.tolerance) return *config.tolerance;
  return decimal_solution ? kDecimalTolerance : Rational(0);
}

bool solution_accuracy(std::span<const Rational> predicted, std::span<const Rational> gold, const Rational& tolerance) {
  if (gold.empty()) throw std::invalid_argument("gold solution is empty");
  if (predicted.size() < gold.size()) return false;
  std::vector<std::vector<std::size_t>> edges(gold.size());
  for (std::size_t g = 0; g < gold.size(); ++g) {
    for (std::size_t p = 0; p < predicted.size(); ++p) {
      if (abs_diff(gold[g], predicted[p]) <= tolerance) edges[g].push_back(p);
    }
    if (edges[g].empty()) return false;
  }
  std::vector<std::ptrdiff_t> owner(predicted.size(), -1);
  for (std::size_t g = 0; g < gold.size(); ++g) {
    std::vector<bool> seen(predicted.size(), false);
    if (!try_match(g, edges, seen, owner)) return false;
  }
  return true;
}

std::optional<Derivation> approx_reference_derivation(const WordProblem& problem, const MetricConfig& config) {
  if (problem.gold_solution.empty()) return std::nullopt;
  const auto lits = literals_of(problem.gold_equations);
  std::vector<LiteralRef> positions;
  std::vector<std::vector<std::string>> candidates;
  for (const auto& l : lits) {
    std::vector<std::string> ids;
    for (const auto& n : problem.numbers) {
      if (n.value == l.value) ids.push_back(n.id);
    }
    if (ids.empty()) continue;  // stays a constant
    positions.push_back(l.ref);
    candidates.push_back(std::move(ids));
  }

  // Every choice reproduces the same grounded equations, so the solution
  // check is shared by all candidate derivations.
  try {
    auto solution = solution_multiset(solve(instantiate(problem.gold_equations, Assignment{})));
    if (!solution || !solution_accuracy(*solution, problem.gold_solution, Rational(0))) return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }

  std::vector<std::size_t> choice(positions.size(), 0);
  const bool random = config.reference_mode == ReferenceMode::kRandom;
  Rng rng = mapping_rng(config.equiv.seed, fnv1a(problem.id));

  if (config.allow_slot_sharing) {
    if (random) {
      for (std::size_t i = 0; i < choice.size(); ++i) {
        choice[i] = std::uniform_int_distribution<std::size_t>(0, candidates[i].size() - 1)(rng);
      }
    }
  } else {
    // Injective alignments by backtracking, span order.
    constexpr std::size_t kCap = 100000;
    std::vector<std::vector<std::size_t>> found;
    std::vector<std::size_t> current(positions.size());
    std::set<std::string> used;
    std::function<bool(std::size_t)> walk = [&](std::size_t i) -> bool {
      if (i == positions.size()) {
        found.push_back(current);
        return !random || found.size() >= kCap;
      }
      for (std::size_t c = 0; c < candidates[i].size(); ++c) {
        if (used.contains(candidates[i][c])) continue;
        used.insert(candidates[i][c]);
        current[i] = c;
        const bool stop = walk(i + 1);
        used.erase(candidates[i][c]);
        if (stop) return true;
      }
      return false;
    };
    walk(0);
    if (found.empty()) return std::nullopt;
    choice = random ? found[std::uniform_int_distribution<std::size_t>(0, found.size() - 1)(rng)] : found.front();
  }

  LiteralAlignment la;
  for (std::size_t i = 0; i < positions.size(); ++i) la.numbers.emplace(positions[i], candidates[i][choice[i]]);
  return induce_template(problem.gold_equations, la, problem.numbers);
}

bool equation_accuracy(const Derivation& pred, const WordProblem& problem, const MetricConfig& config) {
  auto reference = approx_reference_derivation(problem, config);
  if (!reference) return false;
  return derivation_equiv(pred, *reference, EquivTNum{}, config.equiv);
}

bool derivation_accuracy(const Derivation& pred, const WordProblem& problem, const MetricConfig& config) {
  if (!problem.annotation) throw MissingAnnotation("problem " + problem.id + " has no gold derivation");
  return derivation_equiv(pred, problem.annotation->derivation, EquivTNum(problem.annotation->equiv_tnum),
                          config.equiv);
}

std::optional<std::string> annotation_inconsistency(const WordProblem& problem, const EquivConfig& config) {
  if (!problem.annotation) return std::nullopt;
  const Derivation& d = problem.annotation->derivation;
  try {
    SymbolValues values = slot_values(d, problem.numbers);
    auto solution = solution_multiset(solve(instantiate(d.tmpl, values)));
    if (!solution) return std::string("annotation does not determine a unique solution");
    if (!problem.gold_solution.empty() && !solution_accuracy(*solution, problem.gold_solution, Rational(0))) {
      return "annotation solves to " + format_values(*solution) + ", gold solution is " +
             format_values(sorted_values(problem.gold_solution));
    }
    if (templ_equiv(ground(d.tmpl, values), problem.gold_equations, config).empty()) {
      return std::string("instantiated annotation is not equivalent to the gold equations");
    }
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

namespace detail {

std::vector<const Prediction*> match_predictions(const std::vector<WordProblem>& gold,
                                                 const std::vector<Prediction>& predictions) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < gold.size(); ++i) index.emplace(gold[i].id, i);
  std::vector<const Prediction*> out(gold.size(), nullptr);
  for (const auto& p : predictions) {
    auto it = index.find(p.problem_id);
    if (it == index.end()) throw Error("prediction for unknown problem '" + p.problem_id + "'");
    if (out[it->second]) throw Error("duplicate prediction for problem '" + p.problem_id + "'");
    out[it->second] = &p;
  }
  return out;
}

ScoredProblem score_problem(const WordProblem& problem, const Prediction* prediction, const MetricConfig& config) {
  ScoredProblem scored;
  ProblemVerdict& v = scored.verdict;
  v.problem_id = problem.id;
  if (auto note = annotation_inconsistency(problem, config.equiv)) {
    scored.warnings.push_back(problem.id + ": " + *note);
  }
  if (!prediction) {
    v.missing_prediction = true;
    v.diagnostics.push_back("missing prediction");
    return scored;
  }

  std::optional<std::vector<Rational>> solution = prediction->solution;
  bool instantiable = false;
  try {
    SymbolValues values = slot_values(prediction->derivation, problem.numbers);
    auto computed = solution_multiset(solve(instantiate(prediction->derivation.tmpl, values)));
    if (!solution) solution = computed;
    instantiable = true;
  } catch (const DivideByZero&) {
    v.diagnostics.push_back("instantiation: divide by zero");
  } catch (const NonlinearInUnknowns&) {
    v.diagnostics.push_back("instantiation: nonlinear template");
  } catch (const Error& e) {
    v.diagnostics.push_back(std::string("instantiation: ") + e.what());
  }

  if (problem.gold_solution.empty()) {
    v.diagnostics.push_back("solution: gold solution is empty");
  } else if (!solution) {
    v.diagnostics.push_back("solution: none");
  } else {
    v.solution_ok = solution_accuracy(*solution, problem.gold_solution,
                                      effective_tolerance(config, prediction->decimal_solution));
    if (!v.solution_ok) v.diagnostics.push_back("solution: mismatch");
  }
  if (!instantiable) return scored;

  if (auto reference = approx_reference_derivation(problem, config)) {
    auto verdict = compare_derivations(prediction->derivation, *reference, EquivTNum{}, config.equiv);
    v.equation_ok = verdict.equivalent;
    if (!verdict.equivalent) v.diagnostics.push_back(std::string("equation: ") + stage_name(verdict.failed_at));
  } else {
    v.diagnostics.push_back("equation: no reference derivation");
  }

  if (problem.annotation) {
    auto verdict = compare_derivations(prediction->derivation, problem.annotation->derivation,
                                       EquivTNum(problem.annotation->equiv_tnum), config.equiv);
    v.derivation_ok = verdict.equivalent;
    if (!verdict.equivalent) v.diagnostics.push_back(std::string("derivation: ") + stage_name(verdict.failed_at));
  } else {
    v.diagnostics.push_back("derivation: no gold annotation");
    scored.warnings.push_back(problem.id + ": no gold annotation");
  }
  return scored;
}

MetricsReport aggregate(std::vector<ScoredProblem> scored, const MetricConfig& config) {
  MetricsReport report;
  report.seed = config.equiv.seed;
  report.rounds = config.equiv.rounds;
  report.tolerance = config.tolerance ? format_rational(*config.tolerance) : "auto";
  report.reference_mode = config.reference_mode;
  std::size_t sol = 0, eqn = 0, der = 0;
  for (auto& s : scored) {
    sol += s.verdict.solution_ok;
    eqn += s.verdict.equation_ok;
    der += s.verdict.derivation_ok;
    for (auto& w : s.warnings) report.warnings.push_back(std::move(w));
    report.per_problem.push_back(std::move(s.verdict));
  }
  if (!scored.empty()) {
    const double n = static_cast<double>(scored.size());
    report.solution_accuracy = static_cast<double>(sol) / n;
    report.equation_accuracy = static_cast<double>(eqn) / n;
    report.derivation_accuracy = static_cast<double>(der) / n;
  }
  return report;
}

}  // namespace detail

MetricsReport evaluate_corpus(const std::vector<WordProblem>& gold, const std::vector<Prediction>& predictions,
                              const MetricConfig& config) {
  config.equiv.validate();
  const auto matched = detail::match_predictions(gold, predictions);
  std::vector<detail::ScoredProblem> scored(gold.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(gold.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      scored[i] = detail::score_problem(gold[i], matched[i], config);
    } catch (...) {
#pragma omp critical(derivcheck_evaluate)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return detail::aggregate(std::move(scored), config);
}

const char* reference_mode_name(ReferenceMode mode) { return mode == ReferenceMode::kFirst ? "first" : "random"; }

void write_report(const MetricsReport& report, std::ostream& out) {
  nlohmann::ordered_json summary;
  summary["kind"] = "summary";
  summary["problems"] = report.per_problem.size();
  summary["solution_accuracy"] = report.solution_accuracy;
  summary["equation_accuracy"] = report.equation_accuracy;
  summary["derivation_accuracy"] = report.derivation_accuracy;
  summary["config"] = {{"seed", report.seed},
                       {"rounds", report.rounds},
                       {"tolerance", report.tolerance},
                       {"reference_mode", reference_mode_name(report.reference_mode)},
                       {"solution_check", "containment: extra predicted values are not penalized"}};
  out << summary.dump() << '\n';
  for (const auto& v : report.per_problem) {
    nlohmann::ordered_json line;
    line["kind"] = "problem";
    line["problem_id"] = v.problem_id;
    line["solution_ok"] = static_cast<int>(v.solution_ok);
    line["equation_ok"] = static_cast<int>(v.equation_ok);
    line["derivation_ok"] = static_cast<int>(v.derivation_ok);
    line["missing"] = v.missing_prediction;
    line["diagnostics"] = v.diagnostics;
    out << line.dump() << '\n';
  }
  for (const auto& w : report.warnings) {
    out << nlohmann::ordered_json{{"kind", "warning"}, {"message", w}}.dump() << '\n';
  }
}

std::string format_table(const MetricsReport& report) {
  std::size_t width = 10;
  for (const auto& v : report.per_problem) width = std::max(width, v.problem_id.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "problem" << "  soln  eqn  deriv  first failure\n";
  for (const auto& v : report.per_problem) {
    out << std::left << std::setw(static_cast<int>(width)) << v.problem_id << "  " << std::setw(4) << v.solution_ok
        << "  " << std::setw(3) << v.equation_ok << "  " << std::setw(5) << v.derivation_ok << "  "
        << (v.diagnostics.empty() ? "-" : v.diagnostics.front()) << '\n';
  }
  out << std::fixed << std::setprecision(4);
  out << "\nsolution accuracy   " << report.solution_accuracy << "\nequation accuracy   " << report.equation_accuracy
      << "\nderivation accuracy " << report.derivation_accuracy << "\n(" << report.per_problem.size()
      << " problems, seed " << report.seed << ", R=" << report.rounds << ", tol " << report.tolerance << ", ref "
      << reference_mode_name(report.reference_mode) << ")\n";
  if (!report.warnings.empty()) out << report.warnings.size() << " warning(s)\n";
  return out.str();
}

}  // namespace derivcheck
