#include "derivcheck/metrics.hpp"

namespace derivcheck {

MetricsReport evaluate_corpus_serial(const std::vector<WordProblem>& gold, const std::vector<Prediction>& predictions,
                                     const MetricConfig& config) {
  config.equiv.validate();
  const auto matched = detail::match_predictions(gold, predictions);
  std::vector<detail::ScoredProblem> scored;
  scored.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) scored.push_back(detail::score_problem(gold[i], matched[i], config));
  return detail::aggregate(std::move(scored), config);
}

}  // namespace derivcheck
