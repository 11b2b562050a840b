#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "derivcheck/equiv.hpp"

namespace derivcheck {

struct ReconcileResult {
  // Member indices ascending; classes ordered by their first member.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<Template> representatives;  // canonicalized first member
  double reduction = 0.0;                 // 1 - classes/templates
  std::vector<std::pair<std::size_t, std::size_t>> merged_pairs;  // every positive check, i < j
};

// Connected components under pairwise templ_equiv. Only templates with equal
// slot and unknown counts are compared. Pairs whose rounds never become
// conclusive are left unmerged.
// Throws CapacityExceeded, NonlinearInUnknowns.
ReconcileResult reconcile_templates(const std::vector<Template>& templates, const EquivConfig& config);
ReconcileResult reconcile_templates_serial(const std::vector<Template>& templates, const EquivConfig& config);

namespace detail {

// Candidate pairs (i < j) sharing a bucket, in lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> bucket_pairs(const std::vector<Template>& templates,
                                                              const EquivConfig& config);

bool pair_equivalent(const Template& a, const Template& b, const EquivConfig& config);

ReconcileResult merge(const std::vector<Template>& templates,
                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs, const std::vector<char>& positive);

}  // namespace detail

}  // namespace derivcheck
