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

#ifndef KLSS_EQUILIBRIUM_H_
#define KLSS_EQUILIBRIUM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "klss/game.h"
#include "klss/payoff.h"
#include "klss/strategy.h"

namespace klss {

// Per-infoset floor on behavior probabilities.
struct Restriction {
  enum class Kind { kNone, kUniform, kAction };
  Kind kind = Kind::kNone;
  // kUniform: every action gets at least epsilon / (number of actions).
  // kAction: the action labelled `action` gets at least epsilon.
  double epsilon = 0.0;
  std::string action;
  // Decision infosets (by index) left unrestricted.
  std::vector<int> exempt;

  static Restriction Uniform(double epsilon) {
    return {Kind::kUniform, epsilon, "", {}};
  }
  static Restriction OnAction(std::string action, double epsilon) {
    return {Kind::kAction, epsilon, std::move(action), {}};
  }
  bool active() const { return kind != Kind::kNone && epsilon > 0.0; }
};

// Lower bound per sequence implied by a restriction (0 for the empty one).
std::vector<double> SequenceFloors(const Game& game, Player player,
                                   const Restriction& restriction);

enum class RegretScheme { kCfrPlus, kPredictiveCfrPlus };

struct SolverConfig {
  double tolerance = 1e-6;
  int max_iterations = 1000000;
  std::uint64_t seed = 0;
  Restriction plus_restriction;
  Restriction minus_restriction;
  RegretScheme scheme = RegretScheme::kPredictiveCfrPlus;
  // Weight of iterate t in the average is t^averaging_power.
  int averaging_power = 2;
  int check_every = 10;
  // Start from random regrets instead of uniform play.
  bool random_start = false;
  // Entries of the payoff matrix are jittered by up to this much.
  double perturbation = 0.0;
  // Called with (iteration, gap) whenever the gap is measured.
  std::function<void(int, double)> trace;
};

struct SolveResult {
  SequenceFormStrategy x;
  SequenceFormStrategy y;
  double value = 0.0;      // u(x, y)
  double best_plus = 0.0;  // max over plus's (restricted) strategies vs y
  double best_minus = 0.0; // min over minus's (restricted) strategies vs x
  int iterations = 0;
  bool converged = false;

  double gap() const { return best_plus - best_minus; }
  // Exploitability of each side inside the solved (restricted) game,
  // measured against the midpoint value estimate.
  double plus_exploitability() const { return value - best_minus; }
  double minus_exploitability() const { return best_plus - value; }
};

SolveResult Solve(const Game& game, const PayoffAddends& addends,
                  const SolverConfig& config);
// Throws ConvergenceError when the result did not reach the tolerance.
void RequireConverged(const SolveResult& result);

struct BestResponseResult {
  SequenceFormStrategy strategy;
  double value = 0.0;
};

// Pure best response of `responder` to the opponent's strategy, optionally
// restricted by per-sequence floors (empty span: unrestricted).
BestResponseResult BestResponse(const Game& game, const PayoffAddends& addends,
                                const SequenceFormStrategy& opponent,
                                Player responder,
                                std::span<const double> floors = {});

enum class CbvOrientation { kMin, kMax };

// Counterfactual best-response values of minus against a fixed plus
// strategy, for every minus observation sequence.
struct CounterfactualValues {
  std::vector<double> mass;  // sum of p(h) x(h) over the entry's nodes
  std::vector<double> raw;   // minus's best total value below the entry
  // Normalized value; only meaningful when mass > 0.
  double value(int entry) const { return raw[entry] / mass[entry]; }
  bool defined(int entry) const { return mass[entry] > 0.0; }
};

CounterfactualValues ComputeCounterfactualValues(
    const Game& game, const PayoffAddends& addends,
    const SequenceFormStrategy& x,
    CbvOrientation orientation = CbvOrientation::kMin);

// Game value without addends, solved once per game and cached.
struct ValueEstimate {
  double value = 0.0;
  double gap = 0.0;
};
ValueEstimate GameValue(const Game& game);

// v* - min_y u(x, y).
double PlusExploitability(const Game& game, const SequenceFormStrategy& x);
// max_x u(x, y) - v*.
double MinusExploitability(const Game& game, const SequenceFormStrategy& y);

// Minus equilibrium strategies from distinct seeds with tiny payoff
// perturbations, each re-verified on the exact game.
std::vector<SequenceFormStrategy> SampleEquilibria(const Game& game, int count,
                                                   std::uint64_t seed,
                                                   double tolerance = 1e-6);

}  // namespace klss

#endif  // KLSS_EQUILIBRIUM_H_
