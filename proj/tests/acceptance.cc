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

// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "klss/equilibrium.h"
#include "klss/games.h"
#include "klss/harness.h"
#include "klss/safety.h"
#include "klss/stats.h"
#include "klss/subgame.h"

namespace klss {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Criterion {
 public:
  explicit Criterion(int number) : number_(number), start_(Clock::now()) {}

  void Expect(bool ok, const std::string& what) {
    if (!ok) {
      passed_ = false;
      std::printf("  FAIL %s\n", what.c_str());
    } else {
      std::printf("  ok   %s\n", what.c_str());
    }
    std::fflush(stdout);
  }

  bool Finish(const char* title) const {
    std::printf("criterion %d: %s (%s, %.1fs)\n", number_, passed_ ? "PASS" : "FAIL", title,
                Seconds(start_));
    std::fflush(stdout);
    return passed_;
  }

  double elapsed() const { return Seconds(start_); }

 private:
  int number_;
  Clock::time_point start_;
  bool passed_ = true;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

HarnessConfig Config(double tolerance) {
  HarnessConfig h;
  h.solver.tolerance = tolerance;
  return h;
}

struct StatsBaseline {
  const char* game;
  int nodes, infosets, diameter;
  std::array<double, 5> avg;  // frozen sampling convention
};

bool Table2Structure() {
  Criterion c(1);
  const std::vector<StatsBaseline> rows = {
      {"kuhn", 58, 12, 3, {2.00, 4.00, 6.00, 6.00, 6.00}},
      {"leduc3", 9457, 936, 3, {4.05, 16.43, 20.48, 20.48, 20.48}},
      {"goofspiel4-random", 26773, 3608, 4, {5.13, 18.08, 23.20, 23.58, 23.58}},
      {"goofspiel4-inc", 1077, 162, 4, {5.10, 17.46, 22.31, 22.67, 22.67}},
      {"liars-dice5", 51181, 5120, 2, {5.00, 25.00, 25.00, 25.00, 25.00}},
      {"dark-hex-2x2", 471, 94, 13, {3.80, 8.88, 16.38, 19.43, 27.80}},
      {"mp-100", 701, 101, 99, {3.33, 6.60, 9.86, 13.07, 166.67}},
  };
  std::vector<std::string> names;
  for (const StatsBaseline& r : rows) names.push_back(r.game);
  const std::vector<Table2Row> got = RunTable2(names, SamplingConvention::kDecisionNodes);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const StatsBaseline& want = rows[i];
    const GameStats& s = got[i].stats;
    c.Expect(s.nodes == want.nodes && s.infosets == want.infosets &&
                 s.diameter == want.diameter,
             Fmt("%s counts %d/%d/%d (want %d/%d/%d)", want.game, s.nodes, s.infosets,
                 s.diameter, want.nodes, want.infosets, want.diameter));
    double worst = 0;
    for (int k = 0; k < 5; ++k) worst = std::max(worst, std::abs(s.avg_knowledge[k] - want.avg[k]));
    c.Expect(worst <= 0.01 + 1e-9, Fmt("%s avg |I^k| within 0.01 of the frozen baseline (%.4f)",
                                       want.game, worst));
  }
  c.Expect(c.elapsed() <= 60.0, Fmt("runtime %.1fs <= 60s", c.elapsed()));
  return c.Finish("game structure statistics");
}

bool Table1Blueprints() {
  Criterion c(2);
  const std::vector<std::pair<const char*, double>> rows = {
      {"kuhn", 0.0124},          {"leduc3", 0.0207},       {"dark-hex-2x2", 0.0683},
      {"goofspiel4-random", 0.171}, {"goofspiel4-inc", 0.17}, {"liars-dice5", 0.181},
      {"mp-100", 0.0013}};
  for (const auto& [name, want] : rows) {
    const Game g = MakeGame(name);
    SolverConfig solver;
    solver.tolerance = DefaultTolerance(g);
    const double got = PlusExploitability(g, EpsilonUniformBlueprint(g, 0.25, solver));
    c.Expect(std::abs(got - want) <= 1e-3,
             Fmt("%s eps=0.25 blueprint %.5f (want %.4f +- 1e-3)", name, got, want));
  }
  c.Expect(c.elapsed() <= 1800.0, Fmt("runtime %.1fs <= 1800s", c.elapsed()));
  return c.Finish("blueprint exploitability");
}

bool Table1PostSolve() {
  Criterion c(3);
  for (const Table1Spec& spec : DefaultTable1()) {
    HarnessConfig h = Config(DefaultTolerance(MakeGame(spec.game)));
    const Table1Row r = RunTable1Row(spec, 0.25, h);
    const std::string name = RowName(spec);
    if (!r.error.empty()) {
      c.Expect(false, name + " failed: " + r.error);
      continue;
    }
    const std::string numbers =
        Fmt("blueprint %.5f post %.5f ratio %.3f", r.blueprint_expl, r.post_expl, r.ratio);
    if (spec.game == "mp-100") {
      c.Expect(r.ratio < 1.0, name + " ratio < 1: " + numbers);
    } else {
      c.Expect(r.ratio >= 1.0, name + " ratio >= 1: " + numbers);
    }
    if (name == "kuhn") c.Expect(r.post_expl <= 0.004, "kuhn post <= 0.004: " + numbers);
    if (name == "goofspiel4-inc") {
      c.Expect(r.post_expl <= 1e-3, "goofspiel4-inc post <= 1e-3: " + numbers);
    }
  }
  c.Expect(c.elapsed() <= 1800.0, Fmt("runtime %.1fs <= 1800s", c.elapsed()));
  return c.Finish("nested solving after the blueprint");
}

bool Counterexample() {
  Criterion c(4);
  const int n = 100;
  const Game g = HiddenMatchingPennies(n);
  const SequenceFormStrategy bp = CounterexampleBlueprint(g, n);
  HarnessConfig h = Config(1e-7);
  const NestedResult r = NestedKlssEverywhere(g, bp, h);
  c.Expect(std::abs(r.blueprint_exploitability - 0.04) <= 1e-6,
           Fmt("blueprint exploitability %.9f (want 0.04 +- 1e-6)", r.blueprint_exploitability));
  c.Expect(std::abs(r.exploitability - 1.0) <= 1e-6,
           Fmt("nested exploitability %.9f (want 1 +- 1e-6)", r.exploitability));
  const BehaviorStrategy b = SequenceToBehavior(g, r.composed);
  const PlayerView& v = g.view(Player::kPlus);
  double tails = 1.0;
  for (const DecisionInfoset& info : v.infosets()) {
    for (int a = 0; a < info.num_actions(); ++a) {
      if (info.actions[a] == "t") tails = std::min(tails, b.probs[info.first_sequence + a]);
    }
  }
  c.Expect(tails >= 1 - 1e-6, Fmt("smallest tails probability %.9f >= 1-1e-6", tails));
  return c.Finish("nesting everywhere can lose everything");
}

bool WorkedExample() {
  Criterion c(5);
  using Cell = std::pair<std::string, std::string>;
  const Game g = Fig1();
  const PlayerView& pv = g.view(Player::kPlus);
  const int root = pv.entry(*pv.FindByString("/R1")).infoset;
  const SequenceFormStrategy x = UniformStrategy(g, Player::kPlus);
  auto matrix = [](const GadgetGame& gadget) {
    std::map<Cell, double> out;
    for (const BilinearEntry& e : PayoffMatrix(gadget.game, PayoffAddends{})) {
      if (e.value == 0) continue;
      out[{SequenceName(gadget.game.view(Player::kPlus), e.plus_sequence),
           SequenceName(gadget.game.view(Player::kMinus), e.minus_sequence)}] = e.value;
    }
    return out;
  };
  auto close = [](const std::map<Cell, double>& got, const std::map<Cell, double>& want) {
    if (got.size() != want.size()) return false;
    for (const auto& [cell, value] : want) {
      auto it = got.find(cell);
      if (it == got.end() || std::abs(it->second - value) > 1e-12) return false;
    }
    return true;
  };
  const GadgetGame closure = MakeSubgame(g, {}, x, root, Order::Infinite());
  c.Expect(close(matrix(closure), {{{"R1h", "C0h"}, 1},
                                   {{"R1t", "C0t"}, 4},
                                   {{"R1h", "C2h"}, 1},
                                   {{"R1t", "C2t"}, 1.5},
                                   {{"R3h", "C2h"}, 1.5},
                                   {{"R3t", "C2t"}, 1},
                                   {{"R3h", "C4h"}, 4},
                                   {{"R3t", "C4t"}, 1}}),
           "common-knowledge gadget matrix");
  const GadgetGame one = MakeSubgame(g, {}, x, root, Order::Finite(1));
  c.Expect(close(matrix(one), {{{"R1h", "C0h"}, 1},
                               {{"R1t", "C0t"}, 4},
                               {{"R1h", "C2h"}, 2},
                               {{"R1t", "C2t"}, 3}}),
           "order-1 gadget matrix");
  const PlayerView& mv = one.game.view(Player::kMinus);
  std::map<std::string, double> fold_in;
  for (const auto& [key, value] : one.addends.entries()) {
    const int prefix = mv.entry(key.second).prefix_sequence;
    if (key.first == 0 && prefix != 0) fold_in[SequenceName(mv, prefix)] += value;
  }
  c.Expect(std::abs(fold_in["C2h"] - 1.5) <= 1e-12,
           Fmt("fold-in B[empty,C2h] = %.17g (want 3/2)", fold_in["C2h"]));
  c.Expect(std::abs(fold_in["C2t"] - 1.0) <= 1e-12,
           Fmt("fold-in B[empty,C2t] = %.17g (want 1)", fold_in["C2t"]));
  return c.Finish("worked example gadgets");
}

bool Report(Criterion& c, const SuiteReport& r, const std::string& bound) {
  for (const std::string& line : r.lines) std::printf("    %s\n", line.c_str());
  c.Expect(r.passed, r.name + ": " + bound);
  return r.passed;
}

bool Safety() {
  Criterion c(6);
  const HarnessConfig h = Config(1e-6);
  Report(c, UpdateScheduleSuite(DefaultSuiteGames("thm1"), 5, 0.25, h),
         "5 seeds x 3 games, each step within 5 x tolerance");
  Report(c, AllocationSuite(DefaultSuiteGames("thm2"), 20, 0.25, h),
         "20 seeds, within blueprint exploitability + 5 x tolerance");
  Report(c, AffineEquilibriumSuite({"kuhn", "fig1"}, 25, h),
         "25 minus equilibria on kuhn and fig1, deviation <= 1e-4");
  Report(c, EpsilonZeroSuite(CatalogNames(), h),
         "every catalog game, post exploitability <= 5 x tolerance");
  c.Expect(c.elapsed() <= 1200.0, Fmt("runtime %.1fs <= 1200s", c.elapsed()));
  return c.Finish("safety properties");
}

bool SolverCertificates() {
  Criterion c(7);
  for (const std::string& name : CatalogNames()) {
    const Game g = MakeGame(name);
    SolverConfig solver;
    solver.tolerance = DefaultTolerance(g);
    const SolveResult r = Solve(g, {}, solver);
    // Certified from scratch by exact best responses.
    const double best_plus = BestResponse(g, {}, r.y, Player::kPlus).value;
    const double best_minus = BestResponse(g, {}, r.x, Player::kMinus).value;
    const double gap = best_plus - best_minus;
    c.Expect(gap <= solver.tolerance,
             Fmt("%s certified gap %.3g <= %.0e", name.c_str(), gap, solver.tolerance));
  }
  return c.Finish("solver certificates");
}

}  // namespace
}  // namespace klss

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  app.add_option("criteria", only, "Criteria to run (default: all)")->check(CLI::Range(1, 7));
  CLI11_PARSE(app, argc, argv);
  if (only.empty()) only = {1, 2, 3, 4, 5, 6, 7};
  bool ok = true;
  for (int n : only) {
    switch (n) {
      case 1: ok &= klss::Table2Structure(); break;
      case 2: ok &= klss::Table1Blueprints(); break;
      case 3: ok &= klss::Table1PostSolve(); break;
      case 4: ok &= klss::Counterexample(); break;
      case 5: ok &= klss::WorkedExample(); break;
      case 6: ok &= klss::Safety(); break;
      case 7: ok &= klss::SolverCertificates(); break;
    }
  }
  return ok ? 0 : 1;
}
