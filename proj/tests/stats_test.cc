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

#include "klss/games.h"
#include "klss/harness.h"
#include "klss/stats.h"

namespace klss {
namespace {

TEST(Stats, KuhnRow) {
  const GameStats s = ComputeStats(MakeGame("kuhn"));
  EXPECT_EQ(s.nodes, 58);
  EXPECT_EQ(s.infosets, 12);
  EXPECT_EQ(s.diameter, 3);
  // Frozen regression baseline for the decision-node convention.
  EXPECT_NEAR(s.avg_knowledge[0], 2.0, 1e-9);
  EXPECT_NEAR(s.avg_knowledge[1], 4.0, 1e-9);
  EXPECT_NEAR(s.avg_knowledge[4], 6.0, 1e-9);
}

TEST(Stats, AveragesGrowWithOrder) {
  for (const char* name : {"fig1", "dark-hex-2x2", "mp-30", "goofspiel4-inc"}) {
    for (SamplingConvention c :
         {SamplingConvention::kDecisionNodes, SamplingConvention::kAllNodesLastMover}) {
      const GameStats s = ComputeStats(MakeGame(name), c);
      for (int k = 1; k < 5; ++k) {
        EXPECT_LE(s.avg_knowledge[k - 1], s.avg_knowledge[k] + 1e-12) << name;
      }
    }
  }
}

TEST(Stats, MatchingPenniesDiameter) {
  EXPECT_EQ(ComputeStats(MakeGame("mp-100")).diameter, 99);
  EXPECT_EQ(ComputeStats(MakeGame("mp-10")).diameter, 9);
}

TEST(Stats, Table2CsvShape) {
  const std::string csv =
      Table2Csv(RunTable2({"kuhn", "fig1"}, SamplingConvention::kDecisionNodes));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "game,nodes,infosets,diameter,k1,k2,k3,k4,kinf");
  EXPECT_NE(csv.find("\nkuhn,58,12,3,2.00,4.00,6.00,6.00,6.00\n"), std::string::npos) << csv;
}

}  // namespace
}  // namespace klss
