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

#ifndef KLSS_SAFETY_H_
#define KLSS_SAFETY_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "klss/harness.h"

namespace klss {

struct SuiteReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;  // one per checked case
  long long wallclock_ms = 0;
};

// Solver tolerance used for whole-game solves of a catalog game: 1e-6 up to
// 10^4 nodes, 1e-4 beyond.
double DefaultTolerance(const Game& game);

// Games each suite runs on when none are named.
std::vector<std::string> DefaultSuiteGames(std::string_view suite);

// Nested 1-KLSS everywhere on the counterexample raises exploitability from
// 4/N to 1 and ends up playing tails everywhere.
SuiteReport CounterexampleSuite(int n, const HarnessConfig& config);

// Blueprint-update schedules (shuffled infoset order per seed) never raise
// exploitability by more than 5 tolerances.
SuiteReport UpdateScheduleSuite(const std::vector<std::string>& games, int seeds,
                          double epsilon, const HarnessConfig& config);

// Allocation play stays within the blueprint's exploitability plus 5
// tolerances.
SuiteReport AllocationSuite(const std::vector<std::string>& games, int seeds,
                          double epsilon, const HarnessConfig& config);

// From an equilibrium blueprint, nested 1-KLSS everywhere earns the game
// value against every sampled minus equilibrium.
SuiteReport AffineEquilibriumSuite(const std::vector<std::string>& games, int samples,
                          const HarnessConfig& config);

// From an equilibrium blueprint, nested 1-KLSS everywhere stays an
// equilibrium.
SuiteReport EpsilonZeroSuite(const std::vector<std::string>& games,
                             const HarnessConfig& config);

}  // namespace klss

#endif  // KLSS_SAFETY_H_
