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

#include <random>

#include "klss/equilibrium.h"
#include "klss/error.h"
#include "klss/games.h"
#include "klss/harness.h"
#include "oracles.h"

namespace klss {
namespace {

TEST(BestResponse, MatchesPureStrategyEnumeration) {
  std::mt19937_64 rng(29);
  for (const char* name : {"kuhn", "fig1", "mp-4"}) {
    const Game g = MakeGame(name);
    for (int t = 0; t < 4; ++t) {
      const BehaviorStrategy bx = testing::RandomBehavior(g, Player::kPlus, rng);
      const BehaviorStrategy by = testing::RandomBehavior(g, Player::kMinus, rng);
      const BestResponseResult down =
          BestResponse(g, PayoffAddends{}, BehaviorToSequence(g, bx), Player::kMinus);
      const BestResponseResult up =
          BestResponse(g, PayoffAddends{}, BehaviorToSequence(g, by), Player::kPlus);
      EXPECT_NEAR(down.value, testing::WorstCaseAgainst(g, bx), 1e-12) << name;
      EXPECT_NEAR(up.value, testing::BestAgainst(g, by), 1e-12) << name;
      // The returned strategy attains the value.
      EXPECT_NEAR(ExpectedValue(g, BehaviorToSequence(g, bx), down.strategy), down.value,
                  1e-12);
    }
  }
}

TEST(Exploitability, IsValueMinusWorstCase) {
  std::mt19937_64 rng(31);
  const Game g = MakeGame("kuhn");
  const double v = GameValue(g).value;
  for (int t = 0; t < 4; ++t) {
    const BehaviorStrategy bx = testing::RandomBehavior(g, Player::kPlus, rng);
    const double e = PlusExploitability(g, BehaviorToSequence(g, bx));
    EXPECT_NEAR(e, v - testing::WorstCaseAgainst(g, bx), 1e-8);
    EXPECT_GE(e, -1e-8);
  }
}

class SolverCertificate : public ::testing::TestWithParam<RegretScheme> {};

TEST_P(SolverCertificate, GapIsCertifiedByBestResponses) {
  for (const char* name : {"kuhn", "fig1", "mp-10", "hidden-mp-5", "goofspiel3-inc"}) {
    const Game g = MakeGame(name);
    SolverConfig c;
    c.scheme = GetParam();
    const SolveResult r = Solve(g, PayoffAddends{}, c);
    ASSERT_TRUE(r.converged) << name;
    EXPECT_LE(r.gap(), c.tolerance);
    EXPECT_LE(r.best_minus, r.value + 1e-12);
    EXPECT_GE(r.best_plus, r.value - 1e-12);
    const BestResponseResult down = BestResponse(g, PayoffAddends{}, r.x, Player::kMinus);
    const BestResponseResult up = BestResponse(g, PayoffAddends{}, r.y, Player::kPlus);
    EXPECT_NEAR(up.value - down.value, r.gap(), 1e-12) << name;
    EXPECT_NO_THROW(ValidateStrategy(g, r.x, 1e-9));
    EXPECT_NO_THROW(ValidateStrategy(g, r.y, 1e-9));
  }
}

INSTANTIATE_TEST_SUITE_P(Schemes, SolverCertificate,
                         ::testing::Values(RegretScheme::kPredictiveCfrPlus,
                                           RegretScheme::kCfrPlus));

TEST(Solver, ReportsNonConvergence) {
  SolverConfig c;
  c.max_iterations = 20;
  c.tolerance = 1e-12;
  const SolveResult r = Solve(MakeGame("kuhn"), PayoffAddends{}, c);
  EXPECT_FALSE(r.converged);
  try {
    RequireConverged(r);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDidNotConverge);
    EXPECT_EQ(e.iterations(), 20);
  }
}

TEST(Solver, SameSeedSameOutput) {
  SolverConfig c;
  c.random_start = true;
  c.seed = 9;
  const Game g = MakeGame("kuhn");
  EXPECT_EQ(Solve(g, PayoffAddends{}, c).x.values, Solve(g, PayoffAddends{}, c).x.values);
}

TEST(Restriction, UniformFloorHoldsAtEveryInfoset) {
  const Game g = MakeGame("kuhn");
  SolverConfig c;
  const SequenceFormStrategy x = EpsilonUniformBlueprint(g, 0.25, c);
  const BehaviorStrategy b = SequenceToBehavior(g, x);
  for (const DecisionInfoset& info : g.view(Player::kPlus).infosets()) {
    for (int a = 0; a < info.num_actions(); ++a) {
      EXPECT_GE(b[info.first_sequence + a], 0.25 / info.num_actions() - 1e-12);
    }
  }
  // Kuhn's published blueprint column.
  EXPECT_NEAR(PlusExploitability(g, x), 0.0124, 1e-3);
}

TEST(Restriction, ActionFloorAndExemptions) {
  const Game g = MakeGame("kuhn");
  const PlayerView& v = g.view(Player::kPlus);
  SolverConfig c;
  c.plus_restriction = Restriction::OnAction("b", 0.3);
  c.plus_restriction.exempt = {0};
  const SolveResult r = Solve(g, PayoffAddends{}, c);
  ASSERT_TRUE(r.converged);
  const BehaviorStrategy b = SequenceToBehavior(g, r.x);
  for (int i = 1; i < v.num_infosets(); ++i) {
    const DecisionInfoset& info = v.infoset(i);
    for (int a = 0; a < info.num_actions(); ++a) {
      if (info.actions[a] == "b") EXPECT_GE(b[info.first_sequence + a], 0.3 - 1e-12);
    }
  }
  const std::vector<double> floors = SequenceFloors(g, Player::kPlus, c.plus_restriction);
  const DecisionInfoset& exempt = v.infoset(0);
  for (int a = 0; a < exempt.num_actions(); ++a) {
    EXPECT_EQ(floors[exempt.first_sequence + a], 0.0);
  }
}

TEST(CounterfactualValues, WorkedExampleUnderUniformPlay) {
  const Game g = MakeGame("fig1");
  const PlayerView& mv = g.view(Player::kMinus);
  const CounterfactualValues cbv = ComputeCounterfactualValues(
      g, PayoffAddends{}, UniformStrategy(g, Player::kPlus));
  EXPECT_DOUBLE_EQ(cbv.value(*mv.FindByString("/C0'")), 0.5);
  EXPECT_DOUBLE_EQ(cbv.value(*mv.FindByString("/C4'")), 0.5);
  // Two nodes, both actions worth (2 + 3) / 4.
  EXPECT_DOUBLE_EQ(cbv.value(*mv.FindByString("/C2'")), 1.25);
}

TEST(CounterfactualValues, InfosetTakesItsBestAction) {
  std::mt19937_64 rng(37);
  for (const char* name : {"kuhn", "leduc3"}) {
    const Game g = MakeGame(name);
    const SequenceFormStrategy x =
        BehaviorToSequence(g, testing::RandomBehavior(g, Player::kPlus, rng));
    const PlayerView& mv = g.view(Player::kMinus);
    for (CbvOrientation o : {CbvOrientation::kMin, CbvOrientation::kMax}) {
      const CounterfactualValues cbv = ComputeCounterfactualValues(g, PayoffAddends{}, x, o);
      for (const DecisionInfoset& info : mv.infosets()) {
        if (!cbv.defined(info.entry)) continue;
        double best = o == CbvOrientation::kMin ? 1e300 : -1e300;
        for (int child : mv.entry(info.entry).children) {
          if (!mv.entry(child).is_action()) continue;
          best = o == CbvOrientation::kMin ? std::min(best, cbv.raw[child])
                                           : std::max(best, cbv.raw[child]);
        }
        EXPECT_NEAR(cbv.raw[info.entry], best, 1e-12) << name;
      }
    }
  }
}

double Spread(const std::vector<SequenceFormStrategy>& ys) {
  double spread = 0;
  for (const auto& y : ys) {
    for (int s = 0; s < y.size(); ++s) spread = std::max(spread, std::abs(y[s] - ys[0][s]));
  }
  return spread;
}

TEST(SampleEquilibria, ExampleGameSamplesAreDistinctEquilibria) {
  const Game g = MakeGame("fig1");
  const auto ys = SampleEquilibria(g, 6, 1, 1e-6);
  ASSERT_EQ(ys.size(), 6u);
  for (const auto& y : ys) EXPECT_LE(MinusExploitability(g, y), 1e-6);
  EXPECT_GT(Spread(ys), 1e-2);
}

TEST(SampleEquilibria, KuhnSecondPlayerEquilibriumIsUnique) {
  const Game g = MakeGame("kuhn");
  const auto ys = SampleEquilibria(g, 6, 1, 1e-6);
  for (const auto& y : ys) EXPECT_LE(MinusExploitability(g, y), 1e-6);
  EXPECT_LT(Spread(ys), 1e-4);
}

}  // namespace
}  // namespace klss
