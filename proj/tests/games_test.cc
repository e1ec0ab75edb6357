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

#include "klss/equilibrium.h"
#include "klss/error.h"
#include "klss/games.h"
#include "klss/harness.h"
#include "oracles.h"

namespace klss {
namespace {

struct Shape {
  const char* name;
  int nodes;
  int infosets;
};

class CatalogShape : public ::testing::TestWithParam<Shape> {};

TEST_P(CatalogShape, MatchesPublishedCounts) {
  const Game g = MakeGame(GetParam().name);
  EXPECT_EQ(g.num_nodes(), GetParam().nodes);
  EXPECT_EQ(g.num_decision_infosets(), GetParam().infosets);
}

INSTANTIATE_TEST_SUITE_P(
    Games, CatalogShape,
    ::testing::Values(Shape{"kuhn", 58, 12}, Shape{"leduc3", 9457, 936},
                      Shape{"goofspiel4-random", 26773, 3608},
                      Shape{"goofspiel4-inc", 1077, 162},
                      Shape{"liars-dice5", 51181, 5120},
                      Shape{"dark-hex-2x2", 471, 94}, Shape{"mp-100", 701, 101},
                      // Hand count of the example figure: root, four plus
                      // nodes, eight minus nodes, 16 + 1 terminals.
                      Shape{"fig1", 30, 5}),
    [](const auto& info) {
      std::string s = info.param.name;
      for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
      }
      return s;
    });

TEST(Catalog, BadParameters) {
  EXPECT_THROW(Leduc(1), Error);
  EXPECT_THROW(Goofspiel(1), Error);
  EXPECT_THROW(LiarsDice(1), Error);
  EXPECT_THROW(MatchingPennies(1), Error);
  EXPECT_THROW(HiddenMatchingPennies(1), Error);
  EXPECT_THROW(AbruptDarkHex(3, 3), Error);
  try {
    MakeGame("chess");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownGame);
  }
}

TEST(Catalog, RewardsAreNormalized) {
  for (const std::string& name : CatalogNames()) {
    if (name == "fig1") continue;  // the worked example keeps its raw payoffs
    const Game g = MakeGame(name);
    for (NodeId z : g.terminals()) {
      EXPECT_LE(std::abs(g.node(z).utility), 1.0 + 1e-12) << name;
    }
  }
}

// Certifies a value by brute-force best responses to both solver outputs.
void ExpectValue(const Game& g, double expected, double tol) {
  SolverConfig c;
  c.tolerance = 1e-8;
  const SolveResult r = Solve(g, PayoffAddends{}, c);
  ASSERT_TRUE(r.converged);
  const double floor = testing::WorstCaseAgainst(g, SequenceToBehavior(g, r.x));
  const double ceiling = testing::BestAgainst(g, SequenceToBehavior(g, r.y));
  EXPECT_LE(floor, expected + tol);
  EXPECT_GE(ceiling, expected - tol);
  EXPECT_NEAR(floor, expected, tol);
  EXPECT_NEAR(ceiling, expected, tol);
}

TEST(CatalogValue, KuhnIsMinusOneThirtySixth) { ExpectValue(Kuhn(), -1.0 / 36, 1e-6); }

TEST(CatalogValue, TwoMatchingPenniesIsMinusOneHalf) {
  // Raw: n=1 pays 1 on either match, n=2 pays 2 on heads only; minus sees
  // nothing, so always-tails holds plus to 1/2 of the range [0, 2].
  ExpectValue(MatchingPennies(2), -0.5, 1e-6);
}

TEST(CatalogValue, HiddenPenniesIsZero) { ExpectValue(HiddenMatchingPennies(4), 0.0, 1e-6); }

TEST(CatalogValue, SmallSymmetricGoofspielIsZero) {
  EXPECT_NEAR(GameValue(Goofspiel(2, PrizeOrder::kIncreasing)).value, 0.0, 1e-8);
}

TEST(CatalogValue, TwoFaceLiarsDiceSolves) {
  const Game g = LiarsDice(2);
  SolverConfig c;
  const SolveResult r = Solve(g, PayoffAddends{}, c);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(PlusExploitability(g, r.x), 1e-6);
  EXPECT_LE(MinusExploitability(g, r.y), 1e-6);
  EXPECT_NEAR(testing::WorstCaseAgainst(g, SequenceToBehavior(g, r.x)),
              GameValue(g).value - PlusExploitability(g, r.x), 1e-9);
}

TEST(Counterexample, BlueprintLosesFourOverN) {
  for (int n : {4, 8, 20}) {
    const Game g = HiddenMatchingPennies(n);
    const SequenceFormStrategy x = CounterexampleBlueprint(g, n);
    // Minus always plays heads and matches with probability 1/2 + 2/n.
    const double worst = testing::WorstCaseAgainst(g, SequenceToBehavior(g, x));
    EXPECT_NEAR(-worst, 4.0 / n, 1e-12);
    EXPECT_NEAR(PlusExploitability(g, x), 4.0 / n, 1e-8);
  }
}

}  // namespace
}  // namespace klss
