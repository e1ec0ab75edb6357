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

#ifndef KLSS_SUBGAME_H_
#define KLSS_SUBGAME_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "klss/equilibrium.h"
#include "klss/game.h"
#include "klss/knowledge.h"
#include "klss/payoff.h"
#include "klss/strategy.h"

namespace klss {

enum class GadgetKind { kMaxmargin, kResolve };
std::string_view GadgetKindName(GadgetKind kind);

struct SubgameOptions {
  // Lower each alternate value by the opponent's estimated gift.
  bool reach = false;
  // Drop branches whose lone entry node is a transposition of a kept one.
  // Only meaningful for order 1.
  bool merge_transpositions = false;
  std::uint64_t seed = 0;
};

// One minus observation sequence of the source game that the gadget root
// lets minus pick.
struct GadgetBranch {
  int source_entry = -1;        // minus trie entry in the source game
  std::string label;            // root action label
  double mass = 0.0;            // chance * plus reach over the copied nodes
  double source_mass = 0.0;     // the same over every node of the entry
  double alternate = 0.0;       // subtracted value, in branch units
  double gift = 0.0;            // normalized gift estimate (0 without reach)
  std::vector<NodeId> members;  // copied source nodes
  NodeId nature = -1;           // branch nature node in the gadget
};

struct GadgetProvenance {
  std::uint64_t source_fingerprint = 0;
  std::string infoset;  // plus path string in the source game
  Order order = Order::Finite(1);
  SubgameOptions options;
};

struct GadgetGame {
  Game game;
  PayoffAddends addends;
  GadgetKind kind = GadgetKind::kMaxmargin;
  std::vector<GadgetBranch> branches;
  // Source entries dropped as transpositions of kept branches.
  std::vector<int> merged_entries;
  GadgetProvenance provenance;
  // Source node of every gadget node, -1 for nodes the gadget added.
  std::vector<NodeId> source_node;
  // Plus decision infoset of the gadget that copies the solved infoset.
  int root_infoset = -1;
  // Addends before the resolve rescaling, kept so the conversion inverts
  // exactly.
  std::optional<PayoffAddends> maxmargin_addends;
};

// Builds the maxmargin gadget for plus infoset `infoset` of `source`
// (which may itself be a gadget carrying `source_addends`), with plus's
// strategy fixed to `x` outside the order-k knowledge set.
GadgetGame MakeSubgame(const Game& source, const PayoffAddends& source_addends,
                       const SequenceFormStrategy& x, int infoset, Order order,
                       const SubgameOptions& options = {});

GadgetGame MaxmarginToResolve(const GadgetGame& gadget);
GadgetGame ResolveToMaxmargin(const GadgetGame& gadget);

// Source plus decision infoset for every gadget plus decision infoset, -1
// where the gadget infoset has no source nodes.
std::vector<int> SourceInfosets(const GadgetGame& gadget, const Game& source);

// Canonical ids of node futures: two nodes get the same id exactly when
// their subtrees agree on node kinds, actions, both players' observations,
// chance probabilities and utilities. The observations at the nodes
// themselves are not part of the key.
class TranspositionKeys {
 public:
  explicit TranspositionKeys(const Game& game);
  int key(NodeId node) const { return key_[node]; }
  bool transposed(NodeId a, NodeId b) const { return key_[a] == key_[b]; }

 private:
  std::vector<int> key_;
};

struct Margin {
  int minus_entry = -1;
  double value = 0.0;         // normalized over the whole entry
  double branch_units = 0.0;  // normalized over the knowledge-set part
};

// Change of minus's counterfactual value at every minus entry meeting the
// knowledge set, from `blueprint` to `refined`. Entries with no reach are
// left out.
std::vector<Margin> Margins(const Game& game, const PayoffAddends& addends,
                            const SequenceFormStrategy& refined,
                            const SequenceFormStrategy& blueprint, int infoset,
                            Order order);

// Readable sequence name: owner label followed by the action.
std::string SequenceName(const PlayerView& view, int sequence);

// Sidecar document carrying everything but the tree.
std::string WriteGadgetSidecar(const GadgetGame& gadget);
GadgetGame ReadGadget(std::string_view game_text, std::string_view sidecar);

}  // namespace klss

#endif  // KLSS_SUBGAME_H_
