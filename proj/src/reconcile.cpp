#include "derivcheck/reconcile.hpp"

#include <algorithm>
#include <exception>
#include <map>

#include "derivcheck/errors.hpp"
#include "derivcheck/union_find.hpp"

namespace derivcheck {

namespace detail {

std::vector<std::pair<std::size_t, std::size_t>> bucket_pairs(const std::vector<Template>& templates,
                                                              const EquivConfig& config) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const Template& t = templates[i];
    if (t.slots.size() > config.max_slots) {
      throw CapacityExceeded("template " + std::to_string(i) + " has " + std::to_string(t.slots.size()) +
                             " slots, limit is " + std::to_string(config.max_slots));
    }
    to_linear_form(t);  // surfaces nonlinear templates before any pairing
    buckets[{t.slots.size(), t.unknowns.size()}].push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [key, members] : buckets) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) pairs.emplace_back(members[a], members[b]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

bool pair_equivalent(const Template& a, const Template& b, const EquivConfig& config) {
  try {
    return !templ_equiv(a, b, config).empty();
  } catch (const InconclusiveBudgetExhausted&) {
    return false;
  }
}

ReconcileResult merge(const std::vector<Template>& templates,
                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs, const std::vector<char>& positive) {
  ReconcileResult result;
  UnionFind uf(templates.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!positive[k]) continue;
    uf.Unite(pairs[k].first, pairs[k].second);
    result.merged_pairs.push_back(pairs[k]);
  }
  std::map<std::size_t, std::size_t> class_of_root;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    auto [it, fresh] = class_of_root.emplace(uf.Find(i), result.classes.size());
    if (fresh) {
      result.classes.emplace_back();
      result.representatives.push_back(canonicalize_template(templates[i]));
    }
    result.classes[it->second].push_back(i);
  }
  if (!templates.empty()) {
    result.reduction = 1.0 - static_cast<double>(result.classes.size()) / static_cast<double>(templates.size());
  }
  return result;
}

}  // namespace detail

ReconcileResult reconcile_templates(const std::vector<Template>& templates, const EquivConfig& config) {
  config.validate();
  const auto pairs = detail::bucket_pairs(templates, config);
  std::vector<char> positive(pairs.size(), 0);
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      positive[k] = detail::pair_equivalent(templates[pairs[k].first], templates[pairs[k].second], config);
    } catch (...) {
#pragma omp critical(derivcheck_reconcile)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return detail::merge(templates, pairs, positive);
}

}  // namespace derivcheck
