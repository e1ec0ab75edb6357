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

#include "klss/safety.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "klss/error.h"
#include "klss/games.h"
#include "klss/rng.h"

namespace klss {
namespace {

using Clock = std::chrono::steady_clock;

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

void Note(SuiteReport& report, bool ok, std::string line) {
  report.passed = report.passed && ok;
  report.lines.push_back((ok ? "ok   " : "FAIL ") + line);
}

void Finish(SuiteReport& report, Clock::time_point start) {
  report.wallclock_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

bool IsCounterexample(const std::string& name) {
  return name.rfind("hidden-mp-", 0) == 0;
}

SolverConfig WithTolerance(const HarnessConfig& config, double tolerance) {
  SolverConfig s = config.solver;
  s.tolerance = tolerance;
  return s;
}

// The counterexample blueprint for hidden-mp games, the eps-uniform
// blueprint otherwise.
SequenceFormStrategy SuiteBlueprint(const std::string& name, const Game& game,
                                    double epsilon, const SolverConfig& solver) {
  if (IsCounterexample(name)) {
    return CounterexampleBlueprint(game, std::stoi(name.substr(10)));
  }
  return EpsilonUniformBlueprint(game, epsilon, solver);
}

}  // namespace

double DefaultTolerance(const Game& game) {
  return game.num_nodes() <= 10000 ? 1e-6 : 1e-4;
}

std::vector<std::string> DefaultSuiteGames(std::string_view suite) {
  if (suite == "thm1") return {"kuhn", "hidden-mp-20", "dark-hex-2x2"};
  if (suite == "thm2") return {"kuhn", "fig1", "hidden-mp-20"};
  if (suite == "thm3") return {"kuhn", "fig1"};
  if (suite == "eps0") return CatalogNames();
  Fail(ErrorCode::kInvalidArgument, "unknown suite " + std::string(suite));
}

SuiteReport CounterexampleSuite(int n, const HarnessConfig& config) {
  const auto start = Clock::now();
  SuiteReport report;
  report.name = "prop1";
  const Game game = HiddenMatchingPennies(n);
  const SequenceFormStrategy blueprint = CounterexampleBlueprint(game, n);
  HarnessConfig nested = config;
  nested.solver.tolerance = std::min(config.solver.tolerance, 1e-7);
  nested.restriction = Restriction{};
  const NestedResult result = NestedKlssEverywhere(game, blueprint, nested);
  Note(report, std::abs(result.blueprint_exploitability - 4.0 / n) <= 1e-6,
       Format("hidden-mp-%d blueprint exploitability %.9f (expected %.9f)", n,
              result.blueprint_exploitability, 4.0 / n));
  Note(report, std::abs(result.exploitability - 1.0) <= 1e-6,
       Format("hidden-mp-%d exploitability after nested 1-KLSS %.9f (expected 1)",
              n, result.exploitability));
  const BehaviorStrategy b = SequenceToBehavior(game, result.composed);
  double least_tails = 1.0;
  for (const DecisionInfoset& info : game.view(Player::kPlus).infosets()) {
    for (int a = 0; a < info.num_actions(); ++a) {
      if (info.actions[a] == "t") {
        least_tails = std::min(least_tails, b.probs[info.first_sequence + a]);
      }
    }
  }
  Note(report, least_tails >= 1 - 1e-6,
       Format("smallest tails probability %.9f", least_tails));
  Finish(report, start);
  return report;
}

SuiteReport UpdateScheduleSuite(const std::vector<std::string>& games, int seeds,
                          double epsilon, const HarnessConfig& config) {
  const auto start = Clock::now();
  SuiteReport report;
  report.name = "thm1";
  for (const std::string& name : games) {
    const Game game = MakeGame(name);
    const double tol = std::min(config.solver.tolerance, DefaultTolerance(game));
    HarnessConfig run = config;
    run.solver.tolerance = tol;
    const SequenceFormStrategy blueprint =
        SuiteBlueprint(name, game, epsilon, WithTolerance(config, tol));
    const int infosets = game.view(Player::kPlus).num_infosets();
    for (int s = 0; s < seeds; ++s) {
      std::vector<int> schedule(infosets);
      std::iota(schedule.begin(), schedule.end(), 0);
      std::mt19937_64 rng = Substream(config.solver.seed + s, "schedule");
      for (int i = infosets - 1; i > 0; --i) {
        int j = std::min<int>(i, static_cast<int>(UnitUniform(rng) * (i + 1)));
        std::swap(schedule[i], schedule[j]);
      }
      const PlayerView& pv = game.view(Player::kPlus);
      // Drop infosets the evolving blueprint stops reaching; they cannot
      // be scheduled.
      UpdateTrace trace;
      trace.exploitability.push_back(PlusExploitability(game, blueprint));
      SequenceFormStrategy current = blueprint;
      for (int infoset : schedule) {
        if (!(current[pv.infoset(infoset).parent_sequence] > 0)) continue;
        UpdateTrace step = BlueprintUpdateSchedule(game, current, {infoset}, run);
        current = step.blueprints.back();
        trace.exploitability.push_back(step.exploitability.back());
      }
      double worst = -1e300;
      for (std::size_t t = 1; t < trace.exploitability.size(); ++t) {
        worst = std::max(worst, trace.exploitability[t] - trace.exploitability[t - 1]);
      }
      Note(report, worst <= 5 * tol,
           Format("%s seed %d: %zu updates, exploitability %.6g -> %.6g, "
                  "largest step increase %.3g (slack %.1g)",
                  name.c_str(), s, trace.exploitability.size() - 1,
                  trace.exploitability.front(), trace.exploitability.back(),
                  std::max(worst, 0.0), 5 * tol));
    }
  }
  Finish(report, start);
  return report;
}

SuiteReport AllocationSuite(const std::vector<std::string>& games, int seeds,
                          double epsilon, const HarnessConfig& config) {
  const auto start = Clock::now();
  SuiteReport report;
  report.name = "thm2";
  for (const std::string& name : games) {
    const Game game = MakeGame(name);
    const double tol = std::min(config.solver.tolerance, DefaultTolerance(game));
    HarnessConfig run = config;
    run.solver.tolerance = tol;
    const SequenceFormStrategy blueprint =
        SuiteBlueprint(name, game, epsilon, WithTolerance(config, tol));
    for (int s = 0; s < seeds; ++s) {
      const NestedResult r = AllocationPlay(game, blueprint, config.solver.seed + s, run);
      Note(report, r.exploitability <= r.blueprint_exploitability + 5 * tol,
           Format("%s seed %d: %zu solves, exploitability %.6g (blueprint %.6g)",
                  name.c_str(), s, r.records.size(), r.exploitability,
                  r.blueprint_exploitability));
    }
  }
  Finish(report, start);
  return report;
}

SuiteReport AffineEquilibriumSuite(const std::vector<std::string>& games, int samples,
                          const HarnessConfig& config) {
  const auto start = Clock::now();
  SuiteReport report;
  report.name = "thm3";
  for (const std::string& name : games) {
    const Game game = MakeGame(name);
    SolverConfig exact = config.solver;
    exact.tolerance = 1e-9;
    exact.plus_restriction = Restriction{};
    const SolveResult ne = Solve(game, PayoffAddends{}, exact);
    RequireConverged(ne);
    HarnessConfig run = config;
    run.restriction = Restriction{};
    run.solver.tolerance = std::min(config.solver.tolerance, 1e-7);
    const NestedResult nested = NestedKlssEverywhere(game, ne.x, run);
    const std::vector<SequenceFormStrategy> ys =
        SampleEquilibria(game, samples, config.solver.seed, 1e-6);
    const double deviation = AffineCheck(game, nested.composed, ys);
    const double blueprint_deviation = AffineCheck(game, ne.x, ys);
    Note(report, deviation <= 1e-4 && blueprint_deviation <= 2e-6,
         Format("%s: %d minus equilibria, max |u(x',y*) - v*| = %.3g "
                "(blueprint %.3g), composed exploitability %.3g",
                name.c_str(), samples, deviation, blueprint_deviation,
                nested.exploitability));
  }
  Finish(report, start);
  return report;
}

SuiteReport EpsilonZeroSuite(const std::vector<std::string>& games,
                             const HarnessConfig& config) {
  const auto start = Clock::now();
  SuiteReport report;
  report.name = "eps0";
  for (const std::string& name : games) {
    const Game game = MakeGame(name);
    const double tol = std::max(config.solver.tolerance, DefaultTolerance(game));
    HarnessConfig run = config;
    run.solver.tolerance = tol;
    run.restriction = Restriction{};
    // A blueprint only as accurate as the gadget tolerance leaves the gadget
    // degenerate and the solver stalls right at the tolerance.
    const SequenceFormStrategy blueprint =
        RestrictedBlueprint(game, Restriction{}, WithTolerance(config, tol / 10));
    const NestedResult r = NestedKlssEverywhere(game, blueprint, run);
    Note(report, r.exploitability <= 5 * tol,
         Format("%s: %zu solves, exploitability %.3g -> %.3g (bound %.1g)",
                name.c_str(), r.records.size(), r.blueprint_exploitability,
                r.exploitability, 5 * tol));
  }
  Finish(report, start);
  return report;
}

}  // namespace klss
