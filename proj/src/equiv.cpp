#include "derivcheck/equiv.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "derivcheck/errors.hpp"

namespace derivcheck {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in [0, n) by rejection; mt19937_64 output is fixed by the standard,
// so draws are reproducible across standard libraries.
std::uint64_t bounded(Rng& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

std::optional<std::vector<Rational>> solve_instance(const LinearForm& form, const Assignment& assignment) {
  return solution_multiset(solve(instantiate(form, assignment)));
}

}  // namespace

void EquivConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  if (value_low > value_high) throw std::invalid_argument("empty value range");
  if (value_low == 0 && value_high == 0) throw std::invalid_argument("value range is only zero");
  if (max_inconclusive_retries < 0) throw std::invalid_argument("max_inconclusive_retries must be >= 0");
}

char SlotMapping::operator()(char from) const {
  for (const auto& [a, b] : pairs) {
    if (a == from) return b;
  }
  throw std::out_of_range(std::string("slot ") + from + " is not mapped");
}

char SlotMapping::inverse(char to) const {
  for (const auto& [a, b] : pairs) {
    if (b == to) return a;
  }
  throw std::out_of_range(std::string("slot ") + to + " is not an image");
}

SlotMapping SlotMapping::inverted() const {
  SlotMapping out;
  for (const auto& [a, b] : pairs) out.pairs.emplace_back(b, a);
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

Rng mapping_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

Assignment random_assignment(std::span<const char> slots, Rng& rng, const EquivConfig& config) {
  const std::int64_t low = config.value_low;
  const std::int64_t high = config.value_high;
  const bool skip_zero = low <= 0 && 0 <= high;
  const auto count = static_cast<std::uint64_t>(high - low + 1 - (skip_zero ? 1 : 0));
  Assignment out;
  for (char slot : slots) {
    std::int64_t v = low + static_cast<std::int64_t>(bounded(rng, count));
    if (skip_zero && v >= 0) ++v;
    out.emplace(slot, Rational(v));
  }
  return out;
}

namespace detail {

std::optional<PreparedPair> prepare(const Template& t1, const Template& t2, const EquivConfig& config) {
  config.validate();
  if (t1.slots.size() != t2.slots.size()) return std::nullopt;
  const std::size_t k = t1.slots.size();
  if (k > config.max_slots) {
    throw CapacityExceeded("template has " + std::to_string(k) + " slots; mapping enumeration is limited to " +
                           std::to_string(config.max_slots));
  }
  PreparedPair pair{to_linear_form(t1), to_linear_form(t2), {}};
  std::vector<char> image = t2.slots;
  std::sort(image.begin(), image.end());
  do {
    pair.images.push_back(image);
  } while (std::next_permutation(image.begin(), image.end()));
  return pair;
}

MappingOutcome check_mapping(const PreparedPair& pair, std::size_t index, const EquivConfig& config) {
  Rng rng = mapping_rng(config.seed, index);
  const auto& slots = pair.first.slots;
  const auto& image = pair.images[index];
  int conclusive = 0;
  int inconclusive = 0;
  while (conclusive < config.rounds) {
    Assignment v1 = random_assignment(slots, rng, config);
    Assignment v2;
    for (std::size_t i = 0; i < slots.size(); ++i) v2.emplace(image[i], v1.at(slots[i]));

    std::optional<std::vector<Rational>> s1;
    std::optional<std::vector<Rational>> s2;
    bool redraw = false;
    try {
      s1 = solve_instance(pair.first, v1);
      s2 = solve_instance(pair.second, v2);
      redraw = !s1 && !s2;
    } catch (const DivideByZero&) {
      redraw = true;
    }
    if (redraw) {
      if (++inconclusive > config.max_inconclusive_retries) return MappingOutcome::kExhausted;
      continue;
    }
    if (!s1 || !s2 || *s1 != *s2) return MappingOutcome::kRejected;
    ++conclusive;
  }
  return MappingOutcome::kAccepted;
}

MappingSet collect(const PreparedPair& pair, const std::vector<MappingOutcome>& outcomes) {
  MappingSet out;
  bool all_exhausted = !outcomes.empty();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] != MappingOutcome::kExhausted) all_exhausted = false;
    if (outcomes[i] != MappingOutcome::kAccepted) continue;
    SlotMapping m;
    for (std::size_t j = 0; j < pair.first.slots.size(); ++j) m.pairs.emplace_back(pair.first.slots[j], pair.images[i][j]);
    out.push_back(std::move(m));
  }
  if (all_exhausted) {
    throw InconclusiveBudgetExhausted("no mapping produced a conclusive round within the retry budget");
  }
  return out;
}

}  // namespace detail

MappingSet templ_equiv(const Template& t1, const Template& t2, const EquivConfig& config) {
  auto pair = detail::prepare(t1, t2, config);
  if (!pair) return {};
  const auto count = static_cast<std::ptrdiff_t>(pair->images.size());
  std::vector<detail::MappingOutcome> outcomes(pair->images.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16) if (count > 24)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      outcomes[i] = detail::check_mapping(*pair, static_cast<std::size_t>(i), config);
    } catch (...) {
#pragma omp critical(derivcheck_templ_equiv)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return detail::collect(*pair, outcomes);
}

bool align_equiv(const MappingSet& mappings, const Alignment& a1, const Alignment& a2, const EquivTNum& equiv_tnum) {
  auto same = [&](const std::string& q1, const std::string& q2) { return equiv_tnum.equivalent(q1, q2); };
  for (const auto& gamma : mappings) {
    bool ok = true;
    for (const auto& [slot, q1] : a1.slot_to_number) {
      const std::string* q2 = a2.number_for(gamma(slot));
      if (!q2 || !same(q1, *q2)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const auto& [slot, q2] : a2.slot_to_number) {
      const std::string* q1 = a1.number_for(gamma.inverse(slot));
      if (!q1 || !same(*q1, q2)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

DerivationVerdict compare_derivations(const Derivation& pred, const Derivation& gold, const EquivTNum& equiv_tnum,
                                      const EquivConfig& config) {
  if (pred.tmpl.slots.size() != gold.tmpl.slots.size()) {
    return {false, EquivStage::kSlotCount,
            std::to_string(pred.tmpl.slots.size()) + " vs " + std::to_string(gold.tmpl.slots.size()) + " slots"};
  }
  MappingSet gamma;
  try {
    gamma = templ_equiv(pred.tmpl, gold.tmpl, config);
  } catch (const InconclusiveBudgetExhausted& e) {
    return {false, EquivStage::kTemplate, e.what()};
  } catch (const NonlinearInUnknowns& e) {
    return {false, EquivStage::kTemplate, e.what()};
  }
  if (gamma.empty()) return {false, EquivStage::kTemplate, "templates not equivalent"};
  if (!align_equiv(gamma, pred.alignment, gold.alignment, equiv_tnum)) {
    return {false, EquivStage::kAlignment, "no surviving mapping matches the alignments"};
  }
  return {true, EquivStage::kNone, {}};
}

bool derivation_equiv(const Derivation& pred, const Derivation& gold, const EquivTNum& equiv_tnum,
                      const EquivConfig& config) {
  return compare_derivations(pred, gold, equiv_tnum, config).equivalent;
}

const char* stage_name(EquivStage stage) {
  switch (stage) {
    case EquivStage::kNone:
      return "none";
    case EquivStage::kSlotCount:
      return "slot count";
    case EquivStage::kTemplate:
      return "template";
    case EquivStage::kAlignment:
      return "alignment";
  }
  return "?";
}

}  // namespace derivcheck
