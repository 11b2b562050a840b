#include "derivcheck/reconcile.hpp"

namespace derivcheck {

ReconcileResult reconcile_templates_serial(const std::vector<Template>& templates, const EquivConfig& config) {
  config.validate();
  const auto pairs = detail::bucket_pairs(templates, config);
  std::vector<char> positive;
  positive.reserve(pairs.size());
  for (const auto& [i, j] : pairs) positive.push_back(detail::pair_equivalent(templates[i], templates[j], config));
  return detail::merge(templates, pairs, positive);
}

}  // namespace derivcheck
