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

#ifndef KLSS_HARNESS_H_
#define KLSS_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "klss/equilibrium.h"
#include "klss/game.h"
#include "klss/stats.h"
#include "klss/strategy.h"
#include "klss/subgame.h"

namespace klss {

struct HarnessConfig {
  SolverConfig solver;
  // Applied inside every gadget except at the gadget's root infoset.
  Restriction restriction;
  SubgameOptions options;
  bool use_resolve = false;
  int jobs = 1;
  // A gadget reached with plus probability r is solved to tolerance / r;
  // past this bound the infoset keeps the enclosing solution instead.
  double max_gadget_tolerance = 1e-2;
};

// Least exploitable plus strategy inside the restricted polytope.
SequenceFormStrategy RestrictedBlueprint(const Game& game,
                                         const Restriction& restriction,
                                         const SolverConfig& solver);
SequenceFormStrategy EpsilonUniformBlueprint(const Game& game, double epsilon,
                                             const SolverConfig& solver);

struct SolveRecord {
  std::string infoset;  // full-game plus path
  int depth = 0;        // nesting level, 0 = solved from the full game
  GadgetKind kind = GadgetKind::kMaxmargin;
  int gadget_nodes = 0;
  int branches = 0;
  double value = 0.0;  // gadget value: the smallest margin in branch units
  double gap = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
};

struct NestedResult {
  SequenceFormStrategy composed;
  std::vector<SolveRecord> records;
  double blueprint_exploitability = 0.0;
  double exploitability = 0.0;
  long long solver_iterations = 0;
};

// Nested 1-KLSS at every plus infoset the current solution reaches.
NestedResult NestedKlssEverywhere(const Game& game,
                                  const SequenceFormStrategy& blueprint,
                                  const HarnessConfig& config);

// Nested 1-KLSS restricted to `chosen` (full-game plus infosets); below an
// infoset outside the set, play continues with the last solution.
NestedResult AllocationPlay(const Game& game,
                            const SequenceFormStrategy& blueprint,
                            const std::vector<bool>& chosen,
                            const HarnessConfig& config);

// Samples the independent set from `seed` and runs AllocationPlay.
NestedResult AllocationPlay(const Game& game,
                            const SequenceFormStrategy& blueprint,
                            std::uint64_t seed, const HarnessConfig& config);

struct UpdateTrace {
  std::vector<SequenceFormStrategy> blueprints;  // initial one first
  std::vector<double> exploitability;
};

// Re-solves each scheduled infoset from the full game and the current
// blueprint, overwriting the blueprint below it.
UpdateTrace BlueprintUpdateSchedule(const Game& game,
                                    const SequenceFormStrategy& blueprint,
                                    const std::vector<int>& schedule,
                                    const HarnessConfig& config);

// Largest |u(x, y) - v*| over the samples.
double AffineCheck(const Game& game, const SequenceFormStrategy& x,
                   const std::vector<SequenceFormStrategy>& samples);

// The blueprint of the counterexample: heads with probability 1/2 + 2/N.
SequenceFormStrategy CounterexampleBlueprint(const Game& game, int n);

struct Table1Row {
  std::string game;
  std::string variant;  // "", "bet" or "fold"
  double epsilon = 0.0;
  double blueprint_expl = 0.0;
  double post_expl = 0.0;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  long long solver_iters = 0;
  long long wallclock_ms = 0;
  std::string error;
  std::vector<SolveRecord> records;
};

struct Table1Spec {
  std::string game;
  std::string variant;
};
std::vector<Table1Spec> DefaultTable1();
// Display name: game plus the restricted action, e.g. "kuhn(eps-bet)".
std::string RowName(const Table1Spec& spec);

Table1Row RunTable1Row(const Table1Spec& spec, double epsilon,
                       const HarnessConfig& config);
std::vector<Table1Row> RunTable1(const std::vector<Table1Spec>& specs,
                                 double epsilon, const HarnessConfig& config);
// wallclock_ms is written as 0 unless `timing`, so reruns compare equal.
std::string Table1Csv(const std::vector<Table1Row>& rows, bool timing = false);

struct Table2Row {
  std::string game;
  GameStats stats;
  long long wallclock_ms = 0;
};
std::vector<Table2Row> RunTable2(const std::vector<std::string>& games,
                                 SamplingConvention convention);
std::string Table2Csv(const std::vector<Table2Row>& rows);

}  // namespace klss

#endif  // KLSS_HARNESS_H_
