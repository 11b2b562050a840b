#include "derivcheck/model.hpp"

#include <algorithm>
#include <set>

#include "derivcheck/errors.hpp"

namespace derivcheck {

const TextualNumber* WordProblem::find_number(std::string_view number_id) const {
  for (const auto& n : numbers) {
    if (n.id == number_id) return &n;
  }
  return nullptr;
}

EquivTNum::EquivTNum(const std::vector<NumberPair>& pairs) {
  for (const auto& [a, b] : pairs) {
    parent_.try_emplace(a, a);
    parent_.try_emplace(b, b);
    std::string ra = root(a);
    std::string rb = root(b);
    if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
  }
}

std::string EquivTNum::root(const std::string& id) const {
  std::string cur = id;
  for (auto it = parent_.find(cur); it != parent_.end() && it->second != cur; it = parent_.find(cur)) {
    cur = it->second;
  }
  return cur;
}

bool EquivTNum::equivalent(const std::string& a, const std::string& b) const {
  if (a == b) return true;
  if (!parent_.contains(a) || !parent_.contains(b)) return false;
  return root(a) == root(b);
}

SymbolValues slot_values(const Derivation& d, const std::vector<TextualNumber>& numbers) {
  SymbolValues values;
  for (char slot : d.tmpl.slots) {
    const std::string* id = d.alignment.number_for(slot);
    if (!id) throw Error(std::string("slot ") + slot + " is unaligned");
    auto it = std::find_if(numbers.begin(), numbers.end(), [&](const TextualNumber& n) { return n.id == *id; });
    if (it == numbers.end()) throw Error("alignment names unknown number '" + *id + "'");
    values.emplace(slot, it->value);
  }
  return values;
}

void materialize_irrelevant(Alignment& alignment, const std::vector<TextualNumber>& numbers) {
  std::set<std::string> used;
  for (const auto& [slot, id] : alignment.slot_to_number) used.insert(id);
  alignment.irrelevant.clear();
  for (const auto& n : numbers) {
    if (!used.contains(n.id)) alignment.irrelevant.push_back(n.id);
  }
}

}  // namespace derivcheck
