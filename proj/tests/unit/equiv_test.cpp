#include "derivcheck/equiv.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "derivcheck/errors.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracle.hpp"

namespace derivcheck {
namespace {

SlotMapping mapping(std::initializer_list<std::pair<char, char>> pairs) { return SlotMapping{pairs}; }

bool contains(const MappingSet& set, const SlotMapping& m) { return std::find(set.begin(), set.end(), m) != set.end(); }

EquivConfig seeded(std::uint64_t seed) {
  EquivConfig c;
  c.seed = seed;
  return c;
}

const Template kEq2 = parse_template({"m=A+B*n", "m=C-n"});
const Template kEq3 = parse_template({"m+n=A", "m-C*n=B"});

TEST(RandomAssignment, DeterministicNonzeroInRange) {
  const std::vector<char> slots{'A', 'B', 'C'};
  EquivConfig config;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng r1 = mapping_rng(seed, 0), r2 = mapping_rng(seed, 0);
    const Assignment a = random_assignment(slots, r1, config);
    EXPECT_EQ(a, random_assignment(slots, r2, config));
    for (const auto& [slot, v] : a) {
      EXPECT_NE(v, 0);
      EXPECT_GE(v, -99);
      EXPECT_LE(v, 99);
    }
  }
  Rng r = mapping_rng(1, 0);
  EXPECT_TRUE(random_assignment({}, r, config).empty());
}

TEST(RandomAssignment, NarrowRange) {
  EquivConfig config;
  config.value_low = -1;
  config.value_high = 1;
  Rng r = mapping_rng(3, 0);
  const std::vector<char> slots{'A', 'B', 'C', 'D', 'E', 'F'};
  for (const auto& [slot, v] : random_assignment(slots, r, config)) EXPECT_TRUE(v == 1 || v == -1);
}

TEST(EquivConfig, Validation) {
  EquivConfig c;
  c.rounds = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EquivConfig{};
  c.value_low = 0;
  c.value_high = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = EquivConfig{};
  c.value_low = 5;
  c.value_high = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_NO_THROW(EquivConfig{}.validate());
}

TEST(TemplEquiv, CyclicRenaming) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MappingSet gamma = templ_equiv(kEq2, kEq3, seeded(seed));
    EXPECT_TRUE(contains(gamma, mapping({{'A', 'B'}, {'B', 'C'}, {'C', 'A'}}))) << seed;
    EXPECT_EQ(gamma.size(), 1u);
  }
}

TEST(TemplEquiv, Reflexive) {
  const Template babysitting = parse_template({"A*m=B*n", "C*m+D*n=E"});
  const MappingSet gamma = templ_equiv(babysitting, babysitting, EquivConfig{});
  EXPECT_TRUE(contains(gamma, mapping({{'A', 'A'}, {'B', 'B'}, {'C', 'C'}, {'D', 'D'}, {'E', 'E'}})));
}

TEST(TemplEquiv, KeepsAutomorphisms) {
  const Template t = parse_template({"A*m+B*n=C", "D*m+E*n=F"});
  const MappingSet gamma = templ_equiv(t, t, EquivConfig{});
  // Identity, the equation swap, and the m/n role swap (solutions are
  // compared as multisets), alone and combined.
  EXPECT_EQ(gamma.size(), 4u);
  EXPECT_TRUE(contains(gamma, mapping({{'A', 'B'}, {'B', 'A'}, {'C', 'C'}, {'D', 'E'}, {'E', 'D'}, {'F', 'F'}})));
  EXPECT_TRUE(contains(gamma, mapping({{'A', 'D'}, {'B', 'E'}, {'C', 'F'}, {'D', 'A'}, {'E', 'B'}, {'F', 'C'}})));

  const Template sum = parse_template({"m+n=A", "B*m-C*n=D+E"});
  EXPECT_EQ(templ_equiv(sum, sum, EquivConfig{}).size(), 2u);  // D and E commute
}

TEST(TemplEquiv, DistinctTemplates) {
  const Template a = parse_template({"m+n=A", "m-n=B"});
  const Template b = parse_template({"m+n=A", "m+2*n=B"});
  for (std::uint64_t seed = 1; seed <= 5; ++seed) EXPECT_TRUE(templ_equiv(a, b, seeded(seed)).empty());
}

TEST(TemplEquiv, SlotCountMismatchIsEmpty) {
  EXPECT_TRUE(templ_equiv(parse_template({"A*m=B*n", "A*m+A*n=C"}), parse_template({"A*m=B*n", "C*m+D*n=E"}),
                          EquivConfig{})
                  .empty());
}

TEST(TemplEquiv, DefinitionGapIsKept) {
  // Equivalent by some slot assignment, but not under equal values.
  EXPECT_TRUE(templ_equiv(parse_template({"m=A"}), parse_template({"m=2*A"}), EquivConfig{}).empty());
}

TEST(TemplEquiv, GroundedSystems) {
  EXPECT_EQ(templ_equiv(parse_template({"5*m=15*n", "5*m+5*n=100"}), parse_template({"m=3*n", "m+n=20"}),
                        EquivConfig{})
                .size(),
            1u);
  EXPECT_TRUE(templ_equiv(parse_template({"m=3*n", "m+n=20"}), parse_template({"m=n", "m+n=20"}), EquivConfig{})
                  .empty());
}

TEST(TemplEquiv, OneSidedDegeneracyIsMismatch) {
  // The second is always underdetermined; the first never is.
  EXPECT_TRUE(templ_equiv(parse_template({"m+n=A", "m-n=B"}), parse_template({"m+n=A", "2*m+2*n=2*B"}),
                          EquivConfig{})
                  .empty());
}

TEST(TemplEquiv, AlwaysDegenerateExhaustsBudget) {
  const Template t = parse_template({"m+n=A", "m+n=B"});
  EquivConfig c;
  c.max_inconclusive_retries = 5;
  c.value_low = 1;
  c.value_high = 1;  // A == B, always underdetermined on both sides
  EXPECT_THROW(templ_equiv(t, t, c), InconclusiveBudgetExhausted);
}

TEST(TemplEquiv, CapacityGuard) {
  const Template t = parse_template({"A*m+B*n+C+D+E+F+G+H+I=0", "m-n=0"});
  EXPECT_THROW(templ_equiv(t, t, EquivConfig{}), CapacityExceeded);
}

TEST(TemplEquiv, NonlinearPropagates) {
  EXPECT_THROW(templ_equiv(parse_template({"m*n=A"}), parse_template({"m*n=A"}), EquivConfig{}), NonlinearInUnknowns);
}

TEST(TemplEquiv, DivisionByZeroRedraws) {
  const Template t = parse_template({"m=A/(B-C)"});
  EquivConfig c;
  c.value_low = 1;
  c.value_high = 3;  // B == C in a third of the draws
  EXPECT_FALSE(templ_equiv(t, t, c).empty());
}

TEST(TemplEquiv, SymmetricWithInverseMappings) {
  testing::Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto spec = testing::random_linear_spec(rng, 1 + i % 3, 4);
    const Template t1 = testing::to_template(spec);
    const Template t2 = testing::to_template(i % 2 ? testing::rearrange(spec, rng) : testing::perturb(spec, rng));
    const MappingSet forward = templ_equiv(t1, t2, EquivConfig{});
    const MappingSet backward = templ_equiv(t2, t1, EquivConfig{});
    ASSERT_EQ(forward.empty(), backward.empty()) << i;
    const auto normalized = [](MappingSet set) {
      std::vector<std::vector<std::pair<char, char>>> out;
      for (auto& m : set) {
        std::sort(m.pairs.begin(), m.pairs.end());
        out.push_back(m.pairs);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    MappingSet inverted;
    for (const auto& m : forward) inverted.push_back(m.inverted());
    EXPECT_EQ(normalized(inverted), normalized(backward)) << i;
  }
}

TEST(TemplEquiv, ParallelMatchesSerial) {
  testing::Rng rng(4);
  for (int i = 0; i < 30; ++i) {
    const auto spec = testing::random_linear_spec(rng, 2 + i % 2, 6);
    const Template t1 = testing::to_template(spec);
    const Template t2 = testing::to_template(testing::rearrange(spec, rng));
    for (std::uint64_t seed : {1u, 99u}) {
      EXPECT_EQ(templ_equiv(t1, t2, seeded(seed)), templ_equiv_serial(t1, t2, seeded(seed)));
    }
  }
}

TEST(TemplEquiv, RepeatableAcrossCalls) {
  const Template t = parse_template({"A*m+B*n=C", "D*m+E*n=F"});
  const auto first = templ_equiv(t, t, seeded(17));
  for (int i = 0; i < 5; ++i) EXPECT_EQ(templ_equiv(t, t, seeded(17)), first);
}

TEST(TemplEquiv, CanonicalizationPreservesEquivalence) {
  testing::Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const Template t = testing::to_template(testing::rearrange(testing::random_linear_spec(rng, 2, 5), rng));
    const Template c = canonicalize_template(t);
    SlotMapping renaming;
    for (std::size_t k = 0; k < t.slots.size(); ++k) renaming.pairs.emplace_back(t.slots[k], c.slots[k]);
    EXPECT_TRUE(contains(templ_equiv(t, c, EquivConfig{}), renaming)) << i;
  }
}

TEST(SlotMapping, InverseAndApply) {
  const SlotMapping m = mapping({{'A', 'B'}, {'B', 'C'}, {'C', 'A'}});
  EXPECT_EQ(m('A'), 'B');
  EXPECT_EQ(m.inverse('A'), 'C');
  EXPECT_EQ(m.inverted(), mapping({{'A', 'C'}, {'B', 'A'}, {'C', 'B'}}));
}

Alignment align(std::map<char, std::string> m) { return Alignment{std::move(m), {}}; }

TEST(AlignEquiv, EquivalentNumbers) {
  const MappingSet gamma{mapping({{'A', 'B'}, {'B', 'C'}, {'C', 'A'}})};
  const Alignment a1 = align({{'A', "1"}, {'B', "3"}, {'C', "4"}});
  EXPECT_TRUE(align_equiv(gamma, a1, align({{'B', "1"}, {'C', "3"}, {'A', "4"}}), EquivTNum{}));
  EXPECT_FALSE(align_equiv(gamma, a1, align({{'A', "1"}, {'B', "3"}, {'C', "4"}}), EquivTNum{}));
}

TEST(AlignEquiv, EquivTNumAndClosure) {
  const MappingSet identity{mapping({{'A', 'A'}})};
  EXPECT_FALSE(align_equiv(identity, align({{'A', "q1"}}), align({{'A', "q3"}}), EquivTNum{}));
  EXPECT_TRUE(align_equiv(identity, align({{'A', "q1"}}), align({{'A', "q3"}}), EquivTNum(std::vector<NumberPair>{{"q1", "q3"}})));
  EXPECT_TRUE(align_equiv(identity, align({{'A', "q3"}}), align({{'A', "q1"}}), EquivTNum(std::vector<NumberPair>{{"q1", "q3"}})));
  EXPECT_TRUE(align_equiv(identity, align({{'A', "q1"}}), align({{'A', "q4"}}),
                          EquivTNum({{"q1", "q3"}, {"q3", "q4"}})));
}

TEST(AlignEquiv, EmptyGammaIsFalse) {
  EXPECT_FALSE(align_equiv({}, align({}), align({}), EquivTNum{}));
}

TEST(DerivationEquiv, WrongTemplateFailsSlotCount) {
  const WordProblem p = testing::babysitting_problem();
  const Derivation pred =
      testing::make_derivation({"A*m=B*n", "A*m+A*n=C"}, {{'A', "q1"}, {'B', "q2"}, {'C', "q5"}}, p.numbers);
  const auto verdict = compare_derivations(pred, p.annotation->derivation, EquivTNum{}, EquivConfig{});
  EXPECT_FALSE(verdict.equivalent);
  EXPECT_EQ(verdict.failed_at, EquivStage::kSlotCount);
}

TEST(DerivationEquiv, Reflexive) {
  for (const WordProblem& p : {testing::babysitting_problem(), testing::sum_problem(), testing::larger_problem(),
                               testing::martin_problem()}) {
    EXPECT_TRUE(derivation_equiv(p.annotation->derivation, p.annotation->derivation, EquivTNum{}, EquivConfig{}))
        << p.id;
  }
}

TEST(DerivationEquiv, MisalignedSumProblem) {
  const WordProblem p = testing::sum_problem();
  const Derivation pred = testing::make_derivation(
      {"m+n=A", "B*m-C*n=D+E"}, {{'A', "q2"}, {'B', "q1"}, {'C', "q5"}, {'D', "q7"}, {'E', "q3"}}, p.numbers);
  const auto verdict = compare_derivations(pred, p.annotation->derivation, EquivTNum{}, EquivConfig{});
  EXPECT_FALSE(verdict.equivalent);
  EXPECT_EQ(verdict.failed_at, EquivStage::kAlignment);
}

TEST(DerivationEquiv, TemplateStageFailure) {
  const WordProblem p = testing::larger_problem();
  const Derivation pred =
      testing::make_derivation({"m+A*n=B", "m+n=C"}, {{'A', "q3"}, {'B', "q2"}, {'C', "q4"}}, p.numbers);
  const auto verdict = compare_derivations(pred, p.annotation->derivation, EquivTNum{}, EquivConfig{});
  EXPECT_EQ(verdict.failed_at, EquivStage::kTemplate);
}

TEST(DerivationEquiv, NonlinearPredictionFailsTemplateStage) {
  const WordProblem p = testing::larger_problem();
  const Derivation pred =
      testing::make_derivation({"m*n=A", "m+B*n=C"}, {{'A', "q3"}, {'B', "q2"}, {'C', "q4"}}, p.numbers);
  const auto verdict = compare_derivations(pred, p.annotation->derivation, EquivTNum{}, EquivConfig{});
  EXPECT_EQ(verdict.failed_at, EquivStage::kTemplate);
}

TEST(DerivationEquiv, RenamingInvariance) {
  testing::Rng rng(31);
  const WordProblem p = testing::martin_problem();
  const Derivation& gold = p.annotation->derivation;
  std::string letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  for (int i = 0; i < 20; ++i) {
    std::shuffle(letters.begin(), letters.end(), rng);
    std::map<char, char> slots;
    for (char s : gold.tmpl.slots) slots[s] = letters[static_cast<std::size_t>(s - 'A')];
    Derivation renamed{rename_template(gold.tmpl, slots, {{'m', 'x'}, {'n', 'y'}}), {}};
    for (const auto& [s, q] : gold.alignment.slot_to_number) renamed.alignment.slot_to_number[slots.at(s)] = q;
    EXPECT_TRUE(derivation_equiv(renamed, gold, EquivTNum{}, EquivConfig{}));

    // Same renaming applied to a wrong prediction keeps it wrong.
    Derivation wrong = renamed;
    wrong.alignment.slot_to_number[slots.at('D')] = "q2";
    EXPECT_FALSE(derivation_equiv(wrong, gold, EquivTNum{}, EquivConfig{}));
  }
}

TEST(DerivationEquiv, EquivTNumAcceptsAlternative) {
  const WordProblem p = testing::babysitting_problem();
  Derivation pred = p.annotation->derivation;
  pred.alignment.slot_to_number['A'] = "q3";
  pred.alignment.slot_to_number['C'] = "q1";
  EXPECT_FALSE(derivation_equiv(pred, p.annotation->derivation, EquivTNum{}, EquivConfig{}));
  EXPECT_TRUE(derivation_equiv(pred, p.annotation->derivation, EquivTNum(std::vector<NumberPair>{{"q1", "q3"}}), EquivConfig{}));
}

}  // namespace
}  // namespace derivcheck
