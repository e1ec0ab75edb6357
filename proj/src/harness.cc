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

#include "klss/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "klss/error.h"
#include "klss/games.h"
#include "klss/knowledge.h"
#include "klss/rng.h"

namespace klss {
namespace {

using Clock = std::chrono::steady_clock;

long long MillisSince(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
      .count();
}

// Nearest plus decision infoset above each infoset, -1 at the top.
std::vector<int> ParentInfosets(const Game& game) {
  const PlayerView& v = game.view(Player::kPlus);
  std::vector<int> out(v.num_infosets(), -1);
  for (int i = 0; i < v.num_infosets(); ++i) {
    const int seq = v.infoset(i).parent_sequence;
    out[i] = seq == 0 ? -1 : v.sequence_infoset(seq);
  }
  return out;
}

// Copies local behavior of `from` at infoset `i` of `game` to infoset `to`
// of the full game, matching actions by label.
void CopyBehavior(const Game& game, const BehaviorStrategy& from, int i,
                  const Game& full, int to, BehaviorStrategy& composed) {
  const DecisionInfoset& src = game.view(Player::kPlus).infoset(i);
  const DecisionInfoset& dst = full.view(Player::kPlus).infoset(to);
  Check(src.actions.size() == dst.actions.size(), ErrorCode::kInvalidTree,
        "spliced infoset changed its actions");
  for (int a = 0; a < dst.num_actions(); ++a) {
    int b = a;
    if (src.actions[a] != dst.actions[a]) {
      b = static_cast<int>(std::find(src.actions.begin(), src.actions.end(),
                                     dst.actions[a]) -
                           src.actions.begin());
      Check(b < src.num_actions(), ErrorCode::kInvalidTree,
            "spliced infoset lost action " + dst.actions[a]);
    }
    composed.probs[dst.first_sequence + a] = from.probs[src.first_sequence + b];
  }
}

class Nester {
 public:
  Nester(const Game& full, const SequenceFormStrategy& blueprint,
         const HarnessConfig& config, const std::vector<bool>* chosen)
      : full_(full),
        config_(config),
        chosen_(chosen),
        composed_(SequenceToBehavior(full, blueprint)) {}

  void Run(const SequenceFormStrategy& blueprint) {
    const PlayerView& v = full_.view(Player::kPlus);
    std::vector<int> identity(v.num_infosets());
    for (int i = 0; i < v.num_infosets(); ++i) identity[i] = i;
    const BehaviorStrategy behavior = SequenceToBehavior(full_, blueprint);
    const PayoffAddends none;
    const std::vector<int> parents = ParentInfosets(full_);
    std::vector<int> tops;
    for (int i = 0; i < v.num_infosets(); ++i) {
      if (parents[i] < 0) tops.push_back(i);
    }
    auto visit = [&](int i) {
      Visit(full_, none, blueprint, behavior, identity, parents, i, 0,
            config_.solver.tolerance);
    };
    const int jobs = std::max(1, std::min<int>(config_.jobs, tops.size()));
    if (jobs == 1) {
      for (int i : tops) visit(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t k; (k = next++) < tops.size();) {
          try {
            visit(tops[k]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  const BehaviorStrategy& composed() const { return composed_; }
  std::vector<SolveRecord> TakeRecords() {
    std::sort(records_.begin(), records_.end(),
              [](const SolveRecord& a, const SolveRecord& b) {
                return std::tie(a.depth, a.infoset) < std::tie(b.depth, b.infoset);
              });
    return std::move(records_);
  }
  long long iterations() const { return iterations_; }

 private:
  // Hands the subtree below `infoset` over to `behavior`.
  void CopyBelow(const Game& game, const BehaviorStrategy& behavior,
                 const std::vector<int>& to_full,
                 const std::vector<int>& parents, int infoset) {
    for (int k = 0; k < static_cast<int>(parents.size()); ++k) {
      int a = k;
      while (a >= 0 && a != infoset) a = parents[a];
      if (a == infoset && to_full[k] >= 0) {
        CopyBehavior(game, behavior, k, full_, to_full[k], composed_);
      }
    }
  }

  void Visit(const Game& game, const PayoffAddends& addends,
             const SequenceFormStrategy& x, const BehaviorStrategy& behavior,
             const std::vector<int>& to_full, const std::vector<int>& parents,
             int infoset, int depth, double tolerance) {
    const int full_infoset = to_full[infoset];
    if (full_infoset < 0) return;
    if (chosen_ && !(*chosen_)[full_infoset]) {
      CopyBelow(game, behavior, to_full, parents, infoset);
      return;
    }
    GadgetGame gadget;
    try {
      gadget = MakeSubgame(game, addends, x, infoset, Order::Finite(1), config_.options);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnreachableInfoset) return;
      throw;
    }
    if (config_.use_resolve) gadget = MaxmarginToResolve(gadget);
    SolverConfig solver = config_.solver;
    solver.tolerance = tolerance;
    solver.plus_restriction = config_.restriction;
    solver.plus_restriction.exempt = {gadget.root_infoset};
    solver.minus_restriction = Restriction{};
    const SolveResult result = Solve(gadget.game, gadget.addends, solver);
    iterations_ += result.iterations;
    {
      SolveRecord rec;
      rec.infoset = full_.view(Player::kPlus).PathString(
          full_.view(Player::kPlus).infoset(full_infoset).entry);
      rec.depth = depth;
      rec.kind = gadget.kind;
      rec.gadget_nodes = gadget.game.num_nodes();
      rec.branches = static_cast<int>(gadget.branches.size());
      rec.value = result.value;
      rec.gap = result.gap();
      rec.iterations = result.iterations;
      rec.tolerance = tolerance;
      std::lock_guard<std::mutex> lock(mu_);
      records_.push_back(std::move(rec));
    }
    RequireConverged(result);

    const BehaviorStrategy solved = SequenceToBehavior(gadget.game, result.x);
    std::vector<int> gadget_to_full = SourceInfosets(gadget, game);
    for (int& i : gadget_to_full) i = i < 0 ? -1 : to_full[i];
    CopyBehavior(gadget.game, solved, gadget.root_infoset, full_,
                 full_infoset, composed_);
    const std::vector<int> gadget_parents = ParentInfosets(gadget.game);
    const PlayerView& gv = gadget.game.view(Player::kPlus);
    for (int j = 0; j < gv.num_infosets(); ++j) {
      if (gadget_parents[j] != gadget.root_infoset) continue;
      const double reach = result.x[gv.infoset(j).parent_sequence];
      if (!(reach > 0)) continue;
      // Gadget payoffs are scaled up by 1/reach, so is the tolerance. Where
      // that makes the solve meaningless, the current solution stays.
      const double child_tolerance = tolerance / reach;
      if (child_tolerance > config_.max_gadget_tolerance) {
        CopyBelow(gadget.game, solved, gadget_to_full, gadget_parents, j);
        continue;
      }
      Visit(gadget.game, gadget.addends, result.x, solved, gadget_to_full,
            gadget_parents, j, depth + 1, child_tolerance);
    }
  }

  const Game& full_;
  const HarnessConfig& config_;
  const std::vector<bool>* chosen_;
  BehaviorStrategy composed_;
  std::mutex mu_;
  std::vector<SolveRecord> records_;
  std::atomic<long long> iterations_{0};
};

NestedResult RunNested(const Game& game, const SequenceFormStrategy& blueprint,
                       const HarnessConfig& config,
                       const std::vector<bool>* chosen) {
  ValidateStrategy(game, blueprint, 1e-6);
  Nester nester(game, blueprint, config, chosen);
  nester.Run(blueprint);
  NestedResult out;
  out.composed = BehaviorToSequence(game, nester.composed());
  out.records = nester.TakeRecords();
  out.solver_iterations = nester.iterations();
  out.blueprint_exploitability = PlusExploitability(game, blueprint);
  out.exploitability = PlusExploitability(game, out.composed);
  return out;
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SequenceFormStrategy RestrictedBlueprint(const Game& game,
                                         const Restriction& restriction,
                                         const SolverConfig& solver) {
  SolverConfig config = solver;
  config.plus_restriction = restriction;
  config.minus_restriction = Restriction{};
  SolveResult r = Solve(game, PayoffAddends{}, config);
  RequireConverged(r);
  return r.x;
}

SequenceFormStrategy EpsilonUniformBlueprint(const Game& game, double epsilon,
                                             const SolverConfig& solver) {
  return RestrictedBlueprint(game, Restriction::Uniform(epsilon), solver);
}

NestedResult NestedKlssEverywhere(const Game& game,
                                  const SequenceFormStrategy& blueprint,
                                  const HarnessConfig& config) {
  return RunNested(game, blueprint, config, nullptr);
}

NestedResult AllocationPlay(const Game& game,
                            const SequenceFormStrategy& blueprint,
                            const std::vector<bool>& chosen,
                            const HarnessConfig& config) {
  Check(static_cast<int>(chosen.size()) == game.view(Player::kPlus).num_infosets(),
        ErrorCode::kDimensionMismatch, "independent set size mismatch");
  return RunNested(game, blueprint, config, &chosen);
}

NestedResult AllocationPlay(const Game& game,
                            const SequenceFormStrategy& blueprint,
                            std::uint64_t seed, const HarnessConfig& config) {
  const IndependentSetPlan plan(game);
  std::mt19937_64 rng = Substream(seed, "independent-set");
  return AllocationPlay(game, blueprint, plan.Sample(rng), config);
}

UpdateTrace BlueprintUpdateSchedule(const Game& game,
                                    const SequenceFormStrategy& blueprint,
                                    const std::vector<int>& schedule,
                                    const HarnessConfig& config) {
  UpdateTrace trace;
  trace.blueprints.push_back(blueprint);
  trace.exploitability.push_back(PlusExploitability(game, blueprint));
  SequenceFormStrategy current = blueprint;
  for (int infoset : schedule) {
    const PlayerView& pv = game.view(Player::kPlus);
    const double reach = current[pv.infoset(infoset).parent_sequence];
    Check(reach > 0, ErrorCode::kUnreachableInfoset,
          "schedule reaches " + pv.PathString(pv.infoset(infoset).entry) +
              " with probability 0");
    const double tolerance = config.solver.tolerance / reach;
    if (tolerance > config.max_gadget_tolerance) {
      trace.blueprints.push_back(current);
      trace.exploitability.push_back(trace.exploitability.back());
      continue;
    }
    GadgetGame gadget =
        MakeSubgame(game, PayoffAddends{}, current, infoset, Order::Finite(1),
                    config.options);
    if (config.use_resolve) gadget = MaxmarginToResolve(gadget);
    SolverConfig solver = config.solver;
    solver.tolerance = tolerance;
    solver.plus_restriction = config.restriction;
    solver.plus_restriction.exempt = {gadget.root_infoset};
    solver.minus_restriction = Restriction{};
    const SolveResult result = Solve(gadget.game, gadget.addends, solver);
    RequireConverged(result);
    const BehaviorStrategy solved = SequenceToBehavior(gadget.game, result.x);
    BehaviorStrategy updated = SequenceToBehavior(game, current);
    const std::vector<int> to_full = SourceInfosets(gadget, game);
    for (int i = 0; i < static_cast<int>(to_full.size()); ++i) {
      if (to_full[i] >= 0) CopyBehavior(gadget.game, solved, i, game, to_full[i], updated);
    }
    current = BehaviorToSequence(game, updated);
    trace.blueprints.push_back(current);
    trace.exploitability.push_back(PlusExploitability(game, current));
  }
  return trace;
}

double AffineCheck(const Game& game, const SequenceFormStrategy& x,
                   const std::vector<SequenceFormStrategy>& samples) {
  const double v = GameValue(game).value;
  double worst = 0;
  for (const SequenceFormStrategy& y : samples) {
    worst = std::max(worst, std::abs(ExpectedValue(game, x, y) - v));
  }
  return worst;
}

SequenceFormStrategy CounterexampleBlueprint(const Game& game, int n) {
  Check(n >= 2, ErrorCode::kBadParameter, "N must be at least 2");
  BehaviorStrategy b = UniformBehavior(game, Player::kPlus);
  const PlayerView& v = game.view(Player::kPlus);
  const double heads = 0.5 + 2.0 / n;
  for (const DecisionInfoset& info : v.infosets()) {
    for (int a = 0; a < info.num_actions(); ++a) {
      b.probs[info.first_sequence + a] = info.actions[a] == "h" ? heads : 1.0 - heads;
    }
  }
  return BehaviorToSequence(game, b);
}

std::vector<Table1Spec> DefaultTable1() {
  return {{"dark-hex-2x2", ""}, {"goofspiel4-random", ""}, {"goofspiel4-inc", ""},
          {"kuhn", ""},         {"kuhn", "bet"},           {"leduc3", ""},
          {"leduc3", "fold"},   {"leduc3", "bet"},         {"liars-dice5", ""},
          {"mp-100", ""}};
}

std::string RowName(const Table1Spec& spec) {
  return spec.variant.empty() ? spec.game : spec.game + "(eps-" + spec.variant + ")";
}

namespace {

Restriction VariantRestriction(const Table1Spec& spec, double epsilon) {
  if (spec.variant.empty()) return Restriction::Uniform(epsilon);
  const bool kuhn = spec.game.rfind("kuhn", 0) == 0;
  const bool leduc = spec.game.rfind("leduc", 0) == 0;
  Check(kuhn || leduc, ErrorCode::kBadParameter,
        "bet/fold variants exist for kuhn and leduc only");
  if (spec.variant == "bet") return Restriction::OnAction(kuhn ? "b" : "r", epsilon);
  Check(spec.variant == "fold" && leduc, ErrorCode::kBadParameter,
        "unknown variant '" + spec.variant + "' for " + spec.game);
  return Restriction::OnAction("f", epsilon);
}

}  // namespace

Table1Row RunTable1Row(const Table1Spec& spec, double epsilon,
                       const HarnessConfig& config) {
  const auto start = Clock::now();
  Table1Row row;
  row.game = RowName(spec);
  row.variant = spec.variant;
  row.epsilon = epsilon;
  row.seed = config.solver.seed;
  try {
    const Game game = MakeGame(spec.game);
    const Restriction restriction = VariantRestriction(spec, epsilon);
    const SequenceFormStrategy blueprint =
        RestrictedBlueprint(game, restriction, config.solver);
    HarnessConfig nested = config;
    nested.restriction = restriction;
    NestedResult result = NestedKlssEverywhere(game, blueprint, nested);
    row.blueprint_expl = result.blueprint_exploitability;
    row.post_expl = result.exploitability;
    const double floor = 2 * config.solver.tolerance;
    row.ratio = row.post_expl <= floor ? std::numeric_limits<double>::infinity()
                                       : row.blueprint_expl / row.post_expl;
    row.solver_iters = result.solver_iterations;
    row.records = std::move(result.records);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wallclock_ms = MillisSince(start);
  return row;
}

std::vector<Table1Row> RunTable1(const std::vector<Table1Spec>& specs,
                                 double epsilon, const HarnessConfig& config) {
  std::vector<Table1Row> rows;
  for (const Table1Spec& spec : specs) rows.push_back(RunTable1Row(spec, epsilon, config));
  return rows;
}

std::string Table1Csv(const std::vector<Table1Row>& rows, bool timing) {
  std::ostringstream out;
  out << "game,epsilon,blueprint_expl,post_expl,ratio,seed,solver_iters,wallclock_ms\n";
  for (const Table1Row& r : rows) {
    out << r.game << ',' << FormatDouble(r.epsilon) << ',';
    if (r.error.empty()) {
      out << FormatDouble(r.blueprint_expl) << ',' << FormatDouble(r.post_expl)
          << ',' << FormatDouble(r.ratio);
    } else {
      out << "error,error,error";
    }
    out << ',' << r.seed << ',' << r.solver_iters << ','
        << (timing ? r.wallclock_ms : 0) << '\n';
  }
  return out.str();
}

std::vector<Table2Row> RunTable2(const std::vector<std::string>& games,
                                 SamplingConvention convention) {
  std::vector<Table2Row> rows;
  for (const std::string& name : games) {
    const auto start = Clock::now();
    Table2Row row;
    row.game = name;
    row.stats = ComputeStats(MakeGame(name), convention);
    row.wallclock_ms = MillisSince(start);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Table2Csv(const std::vector<Table2Row>& rows) {
  std::ostringstream out;
  out << "game,nodes,infosets,diameter,k1,k2,k3,k4,kinf\n";
  for (const Table2Row& r : rows) {
    out << r.game << ',' << r.stats.nodes << ',' << r.stats.infosets << ','
        << r.stats.diameter;
    for (double v : r.stats.avg_knowledge) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace klss
