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

#include <map>
#include <set>

#include "klss/equilibrium.h"
#include "klss/error.h"
#include "klss/game_io.h"
#include "klss/games.h"
#include "klss/subgame.h"

namespace klss {
namespace {

using Cell = std::pair<std::string, std::string>;

std::map<Cell, double> NamedMatrix(const GadgetGame& g) {
  std::map<Cell, double> out;
  for (const BilinearEntry& e : PayoffMatrix(g.game, PayoffAddends{})) {
    if (e.value == 0) continue;
    out[{SequenceName(g.game.view(Player::kPlus), e.plus_sequence),
         SequenceName(g.game.view(Player::kMinus), e.minus_sequence)}] = e.value;
  }
  return out;
}

// Top-row addends named by the minus sequence they pay through, or by the
// entry label when that sequence is empty.
std::map<std::string, double> TopRow(const GadgetGame& g) {
  const PlayerView& mv = g.game.view(Player::kMinus);
  std::map<std::string, double> out;
  for (const auto& [key, value] : g.addends.entries()) {
    EXPECT_EQ(key.first, 0);
    const TrieEntry& e = mv.entry(key.second);
    out[e.prefix_sequence == 0 ? mv.Label(key.second) : SequenceName(mv, e.prefix_sequence)] +=
        value;
  }
  return out;
}

int PlusInfoset(const Game& g, const std::string& path) {
  const PlayerView& v = g.view(Player::kPlus);
  return v.entry(*v.FindByString(path)).infoset;
}

GadgetGame ExampleGadget(Order order, SubgameOptions options = {}) {
  const Game g = Fig1();
  return MakeSubgame(g, PayoffAddends{}, UniformStrategy(g, Player::kPlus),
                     PlusInfoset(g, "/R1"), order, options);
}

TEST(WorkedExample, CommonKnowledgeGadgetMatrix) {
  const GadgetGame g = ExampleGadget(Order::Infinite());
  const std::map<Cell, double> expected = {
      {{"R1h", "C0h"}, 1},   {{"R1t", "C0t"}, 4}, {{"R1h", "C2h"}, 1},
      {{"R1t", "C2t"}, 1.5}, {{"R3h", "C2h"}, 1.5}, {{"R3t", "C2t"}, 1},
      {{"R3h", "C4h"}, 4},   {{"R3t", "C4t"}, 1}};
  EXPECT_EQ(NamedMatrix(g), expected);
  ASSERT_EQ(g.branches.size(), 3u);
  // Alternates in branch units; C2' averages its two nodes.
  const std::map<std::string, double> top = TopRow(g);
  EXPECT_DOUBLE_EQ(top.at("C0'"), -0.5);
  EXPECT_DOUBLE_EQ(top.at("C2'"), -1.25);
  EXPECT_DOUBLE_EQ(top.at("C4'"), -0.5);
}

TEST(WorkedExample, OrderOneGadgetMatrixAndFoldIn) {
  const GadgetGame g = ExampleGadget(Order::Finite(1));
  const std::map<Cell, double> expected = {{{"R1h", "C0h"}, 1},
                                           {{"R1t", "C0t"}, 4},
                                           {{"R1h", "C2h"}, 2},
                                           {{"R1t", "C2t"}, 3}};
  EXPECT_EQ(NamedMatrix(g), expected);
  ASSERT_EQ(g.branches.size(), 2u);
  const std::map<std::string, double> top = TopRow(g);
  // Node 3 lies outside the knowledge set; its payoffs under the fixed
  // uniform play land on minus's C2 sequences.
  EXPECT_NEAR(top.at("C2h"), 1.5, 1e-12);
  EXPECT_NEAR(top.at("C2t"), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(top.at("C0'"), -0.5);
}

TEST(WorkedExample, GadgetsSolveToZeroMargin) {
  for (Order order : {Order::Finite(1), Order::Infinite()}) {
    const GadgetGame g = ExampleGadget(order);
    SolverConfig c;
    c.tolerance = 1e-9;
    const SolveResult r = Solve(g.game, g.addends, c);
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 0.0, 1e-8);
  }
}

TEST(MakeSubgame, RejectsBadRequests) {
  const Game g = Kuhn();
  const SequenceFormStrategy x = UniformStrategy(g, Player::kPlus);
  auto code = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidTree;
  };
  EXPECT_EQ(code([&] { MakeSubgame(g, {}, x, 0, Order::Finite(2)); }), ErrorCode::kBadOrder);
  SubgameOptions merge;
  merge.merge_transpositions = true;
  EXPECT_EQ(code([&] { MakeSubgame(g, {}, x, 0, Order::Finite(3), merge); }),
            ErrorCode::kBadParameter);
  // Always bet first: the follow-up decision is never reached.
  BehaviorStrategy b = UniformBehavior(g, Player::kPlus);
  const PlayerView& v = g.view(Player::kPlus);
  int follow_up = -1;
  for (int i = 0; i < v.num_infosets(); ++i) {
    const DecisionInfoset& info = v.infoset(i);
    if (info.parent_sequence != 0) {
      follow_up = i;
      continue;
    }
    for (int a = 0; a < info.num_actions(); ++a) {
      b.probs[info.first_sequence + a] = info.actions[a] == "b" ? 1.0 : 0.0;
    }
  }
  EXPECT_EQ(code([&] {
              MakeSubgame(g, {}, BehaviorToSequence(g, b), follow_up, Order::Finite(1));
            }),
            ErrorCode::kUnreachableInfoset);
}

TEST(Resolve, RoundTripIsExact) {
  for (Order order : {Order::Finite(1), Order::Infinite()}) {
    const GadgetGame g = ExampleGadget(order);
    const GadgetGame r = MaxmarginToResolve(g);
    EXPECT_EQ(r.kind, GadgetKind::kResolve);
    EXPECT_THROW(MaxmarginToResolve(r), Error);
    const GadgetGame back = ResolveToMaxmargin(r);
    EXPECT_EQ(WriteGameText(back.game), WriteGameText(g.game));
    EXPECT_EQ(back.addends.entries(), g.addends.entries());
    EXPECT_THROW(ResolveToMaxmargin(back), Error);
  }
}

TEST(Resolve, GadgetSolves) {
  const GadgetGame r = MaxmarginToResolve(ExampleGadget(Order::Finite(1)));
  SolverConfig c;
  const SolveResult s = Solve(r.game, r.addends, c);
  EXPECT_TRUE(s.converged);
}

TEST(Sidecar, RoundTrips) {
  SubgameOptions options;
  options.reach = true;
  const GadgetGame g = ExampleGadget(Order::Finite(1), options);
  const GadgetGame back = ReadGadget(WriteGameText(g.game), WriteGadgetSidecar(g));
  EXPECT_EQ(WriteGadgetSidecar(back), WriteGadgetSidecar(g));
  EXPECT_EQ(back.addends.entries(), g.addends.entries());
  EXPECT_EQ(back.root_infoset, g.root_infoset);
  ASSERT_EQ(back.branches.size(), g.branches.size());
  for (std::size_t i = 0; i < g.branches.size(); ++i) {
    EXPECT_EQ(back.branches[i].alternate, g.branches[i].alternate);
    EXPECT_EQ(back.branches[i].members, g.branches[i].members);
  }
  EXPECT_THROW(ReadGadget(WriteGameText(g.game), "{}"), Error);
}

// Copies the gadget's plus behavior back over the source strategy.
SequenceFormStrategy Splice(const Game& source, const SequenceFormStrategy& x,
                            const GadgetGame& gadget, const SequenceFormStrategy& solved) {
  BehaviorStrategy out = SequenceToBehavior(source, x);
  const BehaviorStrategy in = SequenceToBehavior(gadget.game, solved);
  const std::vector<int> map = SourceInfosets(gadget, source);
  const PlayerView& gv = gadget.game.view(Player::kPlus);
  const PlayerView& sv = source.view(Player::kPlus);
  for (int j = 0; j < gv.num_infosets(); ++j) {
    if (map[j] < 0) continue;
    const DecisionInfoset& from = gv.infoset(j);
    const DecisionInfoset& to = sv.infoset(map[j]);
    for (int a = 0; a < to.num_actions(); ++a) {
      out.probs[to.first_sequence + a] = in.probs[from.first_sequence + a];
    }
  }
  return BehaviorToSequence(source, out);
}

TEST(Margins, ZeroWhenNothingChanges) {
  const Game g = Kuhn();
  const SequenceFormStrategy x = UniformStrategy(g, Player::kPlus);
  for (const Margin& m : Margins(g, {}, x, x, 0, Order::Finite(1))) {
    EXPECT_EQ(m.value, 0.0);
    EXPECT_EQ(m.branch_units, 0.0);
  }
}

// The gadget's guaranteed value is the smallest branch margin of the
// spliced strategy, and no branch loses more than that.
TEST(Margins, GadgetValueIsTheSmallestBranchMargin) {
  for (const char* name : {"kuhn", "fig1", "leduc2"}) {
    const Game g = MakeGame(name);
    SolverConfig c;
    c.plus_restriction = Restriction::Uniform(0.3);
    c.tolerance = 1e-9;
    const SequenceFormStrategy x = Solve(g, {}, c).x;
    const PlayerView& v = g.view(Player::kPlus);
    for (int i = 0; i < v.num_infosets(); ++i) {
      if (v.infoset(i).parent_sequence != 0) continue;
      const GadgetGame gadget = MakeSubgame(g, {}, x, i, Order::Finite(1));
      SolverConfig gc;
      gc.tolerance = 1e-6;
      const SolveResult r = Solve(gadget.game, gadget.addends, gc);
      ASSERT_TRUE(r.converged);
      EXPECT_GE(r.best_minus, -1e-6) << name;
      const SequenceFormStrategy refined = Splice(g, x, gadget, r.x);
      std::set<int> branch_entries;
      for (const GadgetBranch& b : gadget.branches) branch_entries.insert(b.source_entry);
      double smallest = 1e300;
      for (const Margin& m : Margins(g, {}, refined, x, i, Order::Finite(1))) {
        if (branch_entries.count(m.minus_entry)) smallest = std::min(smallest, m.branch_units);
      }
      EXPECT_NEAR(smallest, r.best_minus, 1e-9) << name << " infoset " << i;
    }
  }
}

// Nature deals one of three plus nodes that plus cannot tell apart; the
// first two have identical futures, the third pays double.
Game PlantedTranspositions() {
  GameDescription d;
  NodeSpec root;
  root.kind = NodeKind::kNature;
  const NodeId r = d.Add(root);
  for (int k = 0; k < 3; ++k) {
    NodeSpec p;
    p.kind = NodeKind::kPlus;
    p.obs = {"x", "m" + std::to_string(k)};
    const NodeId pn = d.AddChild(r, "d" + std::to_string(k), p, 1.0 / 3);
    const double scale = k == 2 ? 2.0 : 1.0;
    for (const char* a : {"L", "R"}) {
      NodeSpec m;
      m.kind = NodeKind::kMinus;
      const NodeId mn = d.AddChild(pn, a, m);
      for (const char* b : {"l", "r"}) {
        NodeSpec t;
        t.utility = (a[0] == 'L') == (b[0] == 'l') ? scale * 0.5 : 0.0;
        d.AddChild(mn, b, t);
      }
    }
  }
  return Game::Build(std::move(d));
}

TEST(Transpositions, KeysFollowFutures) {
  const Game g = PlantedTranspositions();
  const TranspositionKeys keys(g);
  const auto& kids = g.node(g.root()).children;
  EXPECT_TRUE(keys.transposed(kids[0], kids[1]));
  EXPECT_FALSE(keys.transposed(kids[0], kids[2]));
}

TEST(Transpositions, MergeDropsOneBranch) {
  const Game g = PlantedTranspositions();
  const SequenceFormStrategy x = UniformStrategy(g, Player::kPlus);
  const GadgetGame plain = MakeSubgame(g, {}, x, 0, Order::Finite(1));
  EXPECT_EQ(plain.branches.size(), 3u);
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    SubgameOptions options;
    options.merge_transpositions = true;
    options.seed = seed;
    const GadgetGame merged = MakeSubgame(g, {}, x, 0, Order::Finite(1), options);
    EXPECT_EQ(merged.branches.size(), 2u);
    EXPECT_EQ(merged.merged_entries.size(), 1u);
    const GadgetGame again = MakeSubgame(g, {}, x, 0, Order::Finite(1), options);
    EXPECT_EQ(WriteGadgetSidecar(again), WriteGadgetSidecar(merged));
    SolverConfig c;
    EXPECT_TRUE(Solve(merged.game, merged.addends, c).converged);
  }
}

TEST(Transpositions, KuhnQueenHasNone) {
  const Game g = Kuhn();
  SubgameOptions options;
  options.merge_transpositions = true;
  const GadgetGame gadget = MakeSubgame(g, {}, UniformStrategy(g, Player::kPlus),
                                        PlusInfoset(g, "/Q/"), Order::Finite(1), options);
  EXPECT_TRUE(gadget.merged_entries.empty());
  EXPECT_EQ(gadget.branches.size(), 2u);
}

TEST(Nesting, GadgetOfAGadgetBuildsAndSolves) {
  const Game g = Kuhn();
  const SequenceFormStrategy x = UniformStrategy(g, Player::kPlus);
  const GadgetGame top = MakeSubgame(g, {}, x, PlusInfoset(g, "/Q/"), Order::Finite(1));
  SolverConfig c;
  const SolveResult r = Solve(top.game, top.addends, c);
  ASSERT_TRUE(r.converged);
  const PlayerView& gv = top.game.view(Player::kPlus);
  int child = -1;
  for (int j = 0; j < gv.num_infosets(); ++j) {
    if (j != top.root_infoset && r.x[gv.infoset(j).parent_sequence] > 0) child = j;
  }
  ASSERT_GE(child, 0);
  const GadgetGame inner = MakeSubgame(top.game, top.addends, r.x, child, Order::Finite(1));
  const SolveResult s = Solve(inner.game, inner.addends, c);
  EXPECT_TRUE(s.converged);
  EXPECT_GE(s.value, -1e-6);
  EXPECT_EQ(SourceInfosets(inner, top.game)[inner.root_infoset], child);
}

}  // namespace
}  // namespace klss
