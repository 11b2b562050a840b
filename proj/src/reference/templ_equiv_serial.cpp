#include "derivcheck/equiv.hpp"

namespace derivcheck {

// Reference loop for templ_equiv: same per-mapping kernel, one mapping at a time.
MappingSet templ_equiv_serial(const Template& t1, const Template& t2, const EquivConfig& config) {
  auto pair = detail::prepare(t1, t2, config);
  if (!pair) return {};
  std::vector<detail::MappingOutcome> outcomes;
  outcomes.reserve(pair->images.size());
  for (std::size_t i = 0; i < pair->images.size(); ++i) outcomes.push_back(detail::check_mapping(*pair, i, config));
  return detail::collect(*pair, outcomes);
}

}  // namespace derivcheck
