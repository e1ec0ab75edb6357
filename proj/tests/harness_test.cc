// Copyright 2026 The klss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "klss/equilibrium.h"
#include "klss/error.h"
#include "klss/games.h"
#include "klss/harness.h"
#include "klss/safety.h"

namespace klss {
namespace {

HarnessConfig Config(double tolerance) {
  HarnessConfig h;
  h.solver.tolerance = tolerance;
  return h;
}

TEST(Counterexample, BlueprintLosesFourOverN) {
  for (int n : {5, 10, 40}) {
    const Game g = HiddenMatchingPennies(n);
    EXPECT_NEAR(PlusExploitability(g, CounterexampleBlueprint(g, n)), 4.0 / n, 1e-12);
  }
}

TEST(Counterexample, NestingEverywhereLosesEverything) {
  const SuiteReport r = CounterexampleSuite(10, Config(1e-6));
  EXPECT_TRUE(r.passed);
  for (const std::string& line : r.lines) EXPECT_EQ(line.rfind("FAIL", 0), std::string::npos) << line;
}

TEST(Nested, KuhnComposesAValidStrategy) {
  const Game g = Kuhn();
  const HarnessConfig h = Config(1e-6);
  const SequenceFormStrategy bp = EpsilonUniformBlueprint(g, 0.25, h.solver);
  const NestedResult r = NestedKlssEverywhere(g, bp, h);
  EXPECT_NO_THROW(ValidateStrategy(g, r.composed));
  EXPECT_NEAR(r.blueprint_exploitability, PlusExploitability(g, bp), 1e-12);
  EXPECT_NEAR(r.exploitability, PlusExploitability(g, r.composed), 1e-12);
  EXPECT_LT(r.exploitability, r.blueprint_exploitability);
  ASSERT_FALSE(r.records.empty());
  EXPECT_EQ(r.records.front().depth, 0);
  for (const SolveRecord& rec : r.records) {
    EXPECT_GE(rec.value, -rec.tolerance) << rec.infoset;
    EXPECT_LE(rec.gap, rec.tolerance) << rec.infoset;
  }
}

TEST(Allocation, EmptySetKeepsTheBlueprint) {
  const Game g = Kuhn();
  const HarnessConfig h = Config(1e-6);
  const SequenceFormStrategy bp = EpsilonUniformBlueprint(g, 0.25, h.solver);
  const std::vector<bool> none(g.view(Player::kPlus).num_infosets(), false);
  const NestedResult r = AllocationPlay(g, bp, none, h);
  EXPECT_TRUE(r.records.empty());
  for (std::size_t i = 0; i < bp.size(); ++i) EXPECT_NEAR(r.composed[i], bp[i], 1e-12);
  EXPECT_THROW(AllocationPlay(g, bp, std::vector<bool>{true}, h), Error);
}

TEST(Allocation, NeverWorseThanTheBlueprint) {
  for (const char* name : {"kuhn", "goofspiel3-inc", "hidden-mp-8"}) {
    const Game g = MakeGame(name);
    const HarnessConfig h = Config(1e-6);
    const SequenceFormStrategy bp = std::string(name).rfind("hidden", 0) == 0
                                        ? CounterexampleBlueprint(g, 8)
                                        : EpsilonUniformBlueprint(g, 0.25, h.solver);
    const double before = PlusExploitability(g, bp);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const NestedResult r = AllocationPlay(g, bp, seed, h);
      EXPECT_LE(r.exploitability, before + 5e-6) << name << " seed " << seed;
    }
  }
}

TEST(UpdateSchedule, ExploitabilityNeverRises) {
  const Game g = Kuhn();
  const HarnessConfig h = Config(1e-6);
  const SequenceFormStrategy bp = EpsilonUniformBlueprint(g, 0.25, h.solver);
  const PlayerView& v = g.view(Player::kPlus);
  std::vector<int> schedule;
  for (int i = 0; i < v.num_infosets(); ++i) {
    if (v.infoset(i).parent_sequence == 0) schedule.push_back(i);
  }
  const UpdateTrace t = BlueprintUpdateSchedule(g, bp, schedule, h);
  ASSERT_EQ(t.exploitability.size(), schedule.size() + 1);
  ASSERT_EQ(t.blueprints.size(), schedule.size() + 1);
  for (std::size_t s = 1; s < t.exploitability.size(); ++s) {
    EXPECT_LE(t.exploitability[s], t.exploitability[s - 1] + 5e-6);
    EXPECT_NEAR(t.exploitability[s], PlusExploitability(g, t.blueprints[s]), 1e-12);
  }
  EXPECT_LT(t.exploitability.back(), t.exploitability.front());
}

TEST(Affine, EquilibriumScoresZeroOthersDoNot) {
  const Game g = Kuhn();
  SolverConfig c;
  c.tolerance = 1e-9;
  const SequenceFormStrategy ne = Solve(g, {}, c).x;
  const std::vector<SequenceFormStrategy> samples = SampleEquilibria(g, 4, 7, 1e-6);
  EXPECT_LE(AffineCheck(g, ne, samples), 1e-5);
  BehaviorStrategy always_first = UniformBehavior(g, Player::kPlus);
  const PlayerView& v = g.view(Player::kPlus);
  for (int i = 0; i < v.num_infosets(); ++i) {
    const DecisionInfoset& info = v.infoset(i);
    for (int a = 0; a < info.num_actions(); ++a) always_first.probs[info.first_sequence + a] = a == 0;
  }
  EXPECT_GT(AffineCheck(g, BehaviorToSequence(g, always_first), samples), 1e-2);
}

TEST(Table1, RowNamesAndDefaults) {
  const std::vector<Table1Spec> rows = DefaultTable1();
  EXPECT_EQ(rows.size(), 10u);
  EXPECT_EQ(RowName({"kuhn", "bet"}), "kuhn(eps-bet)");
  EXPECT_EQ(RowName({"mp-100", ""}), "mp-100");
}

TEST(Table1, CsvIsReproducible) {
  const HarnessConfig h = Config(1e-6);
  const Table1Row a = RunTable1Row({"kuhn", ""}, 0.25, h);
  const Table1Row b = RunTable1Row({"kuhn", ""}, 0.25, h);
  EXPECT_TRUE(a.error.empty()) << a.error;
  EXPECT_GT(a.ratio, 1.0);
  const std::string csv = Table1Csv({a});
  EXPECT_EQ(csv, Table1Csv({b}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "game,epsilon,blueprint_expl,post_expl,ratio,seed,solver_iters,wallclock_ms");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Suites, DefaultsAndTolerance) {
  EXPECT_EQ(DefaultTolerance(Kuhn()), 1e-6);
  EXPECT_EQ(DefaultTolerance(MakeGame("goofspiel4-random")), 1e-4);
  EXPECT_FALSE(DefaultSuiteGames("thm1").empty());
  EXPECT_EQ(DefaultSuiteGames("eps0"), CatalogNames());
}

}  // namespace
}  // namespace klss
