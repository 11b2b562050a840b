#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "derivcheck/eqparse.hpp"
#include "derivcheck/linsolve.hpp"
#include "derivcheck/model.hpp"

namespace derivcheck {

inline constexpr std::uint64_t kDefaultSeed = 20170403;

using Rng = std::mt19937_64;

struct EquivConfig {
  int rounds = 10;
  std::uint64_t seed = kDefaultSeed;
  // Slot values are uniform nonzero integers in [value_low, value_high].
  int value_low = -99;
  int value_high = 99;
  // Redraw budget per mapping for rounds that decide nothing.
  int max_inconclusive_retries = 100;
  // k! mappings are enumerated; 8! = 40320.
  std::size_t max_slots = 8;

  // Throws std::invalid_argument.
  void validate() const;
};

// Bijection C(T1) -> C(T2), listed in T1's slot order.
struct SlotMapping {
  std::vector<std::pair<char, char>> pairs;

  char operator()(char from) const;
  char inverse(char to) const;
  SlotMapping inverted() const;

  friend bool operator==(const SlotMapping&, const SlotMapping&) = default;
};

using MappingSet = std::vector<SlotMapping>;

// Independent stream for mapping `index` under `seed`.
Rng mapping_rng(std::uint64_t seed, std::uint64_t index);

// One draw per slot, in slot order.
Assignment random_assignment(std::span<const char> slots, Rng& rng, const EquivConfig& config);

// All mappings under which the templates produced equal solution multisets in
// `rounds` conclusive random rounds. Empty when slot counts differ.
// Throws CapacityExceeded, InconclusiveBudgetExhausted, NonlinearInUnknowns.
// Mappings are checked in parallel (OpenMP); the result equals templ_equiv_serial.
MappingSet templ_equiv(const Template& t1, const Template& t2, const EquivConfig& config);
MappingSet templ_equiv_serial(const Template& t1, const Template& t2, const EquivConfig& config);

bool align_equiv(const MappingSet& mappings, const Alignment& a1, const Alignment& a2, const EquivTNum& equiv_tnum);

enum class EquivStage { kNone, kSlotCount, kTemplate, kAlignment };

struct DerivationVerdict {
  bool equivalent = false;
  EquivStage failed_at = EquivStage::kNone;
  std::string detail;
};

// Evaluates `pred` against `gold`. Templates whose rounds never become
// conclusive, or that are nonlinear, fail at the template stage.
// Throws CapacityExceeded.
DerivationVerdict compare_derivations(const Derivation& pred, const Derivation& gold, const EquivTNum& equiv_tnum,
                                      const EquivConfig& config);
bool derivation_equiv(const Derivation& pred, const Derivation& gold, const EquivTNum& equiv_tnum,
                      const EquivConfig& config);

const char* stage_name(EquivStage stage);

namespace detail {

enum class MappingOutcome { kAccepted, kRejected, kExhausted };

struct PreparedPair {
  LinearForm first;
  LinearForm second;
  std::vector<std::vector<char>> images;  // images[i][j] = gamma_i(first.slots[j])
};

// Returns std::nullopt when the slot counts differ.
std::optional<PreparedPair> prepare(const Template& t1, const Template& t2, const EquivConfig& config);

MappingOutcome check_mapping(const PreparedPair& pair, std::size_t index, const EquivConfig& config);

MappingSet collect(const PreparedPair& pair, const std::vector<MappingOutcome>& outcomes);

}  // namespace detail

}  // namespace derivcheck
