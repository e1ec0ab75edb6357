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

#ifndef KLSS_GAME_H_
#define KLSS_GAME_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace klss {

enum class NodeKind : std::uint8_t { kNature, kPlus, kMinus, kTerminal };

// Plus maximizes the stored utility, minus minimizes it.
enum class Player : std::uint8_t { kPlus = 0, kMinus = 1 };

inline constexpr std::array<Player, 2> kPlayers = {Player::kPlus,
                                                   Player::kMinus};

constexpr int Index(Player p) { return static_cast<int>(p); }
constexpr Player Opponent(Player p) {
  return p == Player::kPlus ? Player::kMinus : Player::kPlus;
}
constexpr bool Owns(Player p, NodeKind kind) {
  return (p == Player::kPlus && kind == NodeKind::kPlus) ||
         (p == Player::kMinus && kind == NodeKind::kMinus);
}
std::string_view PlayerName(Player p);
std::string_view NodeKindName(NodeKind kind);

using NodeId = int;

struct NodeSpec {
  NodeKind kind = NodeKind::kTerminal;
  std::array<std::string, 2> obs;  // indexed by Index(player)
  std::vector<std::string> actions;
  std::vector<NodeId> children;
  std::vector<double> probs;  // nature nodes only
  double utility = 0.0;       // terminal nodes only
};

struct Token {
  enum class Kind : std::uint8_t { kObservation, kAction };
  Kind kind = Kind::kObservation;
  std::string text;

  static Token Obs(std::string text) {
    return {Kind::kObservation, std::move(text)};
  }
  static Token Act(std::string text) { return {Kind::kAction, std::move(text)}; }
  bool is_action() const { return kind == Kind::kAction; }
  friend auto operator<=>(const Token&, const Token&) = default;
};

// A player's observation sequence: one observation token per node on the
// path, with an action token after every node the player moved at.
using SequencePath = std::vector<Token>;

struct GameDescription {
  std::vector<NodeSpec> nodes;
  NodeId root = 0;
  // Sequences that exist in the sequence form without any node behind them.
  std::array<std::vector<SequencePath>, 2> phantom;

  NodeId Add(NodeSpec spec) {
    nodes.push_back(std::move(spec));
    return static_cast<NodeId>(nodes.size()) - 1;
  }
  // Appends `child` under `parent` with the given action label.
  NodeId AddChild(NodeId parent, std::string action, NodeSpec child,
                  double prob = 0.0);
};

struct TrieEntry {
  int parent = -1;
  Token token;
  int depth = 0;
  std::vector<NodeId> nodes;
  std::vector<int> children;
  int infoset = -1;         // set when this entry is a decision infoset
  int sequence = -1;        // set on action entries
  int prefix_sequence = 0;  // sequence spelled by the action tokens so far

  bool is_action() const { return token.is_action(); }
};

struct DecisionInfoset {
  int entry = -1;
  int parent_sequence = 0;
  int first_sequence = 0;
  std::vector<std::string> actions;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

// One player's side of the game: the trie of observation sequences, the
// decision infosets in parent-first order and the sequence numbering.
// Sequence 0 is the empty sequence; the actions of one infoset occupy a
// contiguous range starting at first_sequence.
class PlayerView {
 public:
  Player player() const { return player_; }

  int num_entries() const { return static_cast<int>(entries_.size()); }
  const TrieEntry& entry(int id) const { return entries_[id]; }
  std::span<const TrieEntry> entries() const { return entries_; }
  int node_entry(NodeId node) const { return node_entry_[node]; }

  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  const DecisionInfoset& infoset(int id) const { return infosets_[id]; }
  std::span<const DecisionInfoset> infosets() const { return infosets_; }

  int num_sequences() const { return static_cast<int>(seq_infoset_.size()); }
  int sequence_infoset(int seq) const { return seq_infoset_[seq]; }
  int sequence_action(int seq) const { return seq - FirstOf(seq); }
  int sequence_entry(int seq) const { return seq_entry_[seq]; }

  // Sequence reached at `node` (the player's last action before it).
  int node_sequence(NodeId node) const {
    return entries_[node_entry_[node]].prefix_sequence;
  }
  // Decision infoset the node belongs to, -1 when the player is not to move.
  int node_infoset(NodeId node) const {
    return entries_[node_entry_[node]].infoset;
  }

  std::optional<int> Find(const SequencePath& path) const;
  std::optional<int> FindChild(int parent, const Token& token) const;
  SequencePath Path(int entry) const;
  // Last non-empty observation on the path, unwrapping copied sequences.
  std::string Label(int entry) const;
  std::string PathString(int entry) const;
  std::optional<int> FindByString(std::string_view text) const;
  // True when `entry` extends `ancestor` (or equals it).
  bool Extends(int entry, int ancestor) const;
  // True when sequence `seq` equals `ancestor` or passes through it.
  bool SequenceExtends(int seq, int ancestor) const;

 private:
  friend class Game;
  int FirstOf(int seq) const {
    return seq == 0 ? 0 : infosets_[seq_infoset_[seq]].first_sequence;
  }

  Player player_ = Player::kPlus;
  std::vector<TrieEntry> entries_;
  std::vector<int> node_entry_;
  std::vector<DecisionInfoset> infosets_;
  std::vector<int> seq_infoset_;
  std::vector<int> seq_entry_;
};

// Immutable, validated game tree with both players' infoset structure.
class Game {
 public:
  static Game Build(GameDescription description);

  int num_nodes() const { return static_cast<int>(desc_.nodes.size()); }
  NodeId root() const { return desc_.root; }
  const NodeSpec& node(NodeId id) const { return desc_.nodes[id]; }
  NodeKind kind(NodeId id) const { return desc_.nodes[id].kind; }
  NodeId parent(NodeId id) const { return parent_[id]; }
  // Index of `id` among its parent's children.
  int action_in_parent(NodeId id) const { return action_in_parent_[id]; }
  int depth(NodeId id) const { return depth_[id]; }
  double chance_reach(NodeId id) const { return chance_reach_[id]; }
  std::span<const NodeId> preorder() const { return preorder_; }
  std::span<const NodeId> terminals() const { return terminals_; }

  const PlayerView& view(Player p) const { return views_[Index(p)]; }
  int num_decision_infosets() const {
    return views_[0].num_infosets() + views_[1].num_infosets();
  }

  const GameDescription& description() const { return desc_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  void BuildView(Player p);

  GameDescription desc_;
  std::vector<NodeId> parent_;
  std::vector<int> action_in_parent_;
  std::vector<int> depth_;
  std::vector<double> chance_reach_;
  std::vector<NodeId> preorder_;
  std::vector<NodeId> terminals_;
  std::array<PlayerView, 2> views_;
  std::uint64_t fingerprint_ = 0;
};

std::string TokenString(const Token& token);
std::string PathToString(const SequencePath& path);

}  // namespace klss

#endif  // KLSS_GAME_H_
