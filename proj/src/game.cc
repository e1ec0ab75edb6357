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

#include "klss/game.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>

#include "klss/error.h"

namespace klss {
namespace {

constexpr double kDistributionTolerance = 1e-12;

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;
  void Bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  }
  void Str(std::string_view s) {
    Bytes(s.data(), s.size());
    Bytes("\0", 1);
  }
  template <typename T>
  void Pod(const T& v) {
    Bytes(&v, sizeof(v));
  }
};

std::string ChildKey(int parent, const Token& token) {
  std::string key = std::to_string(parent);
  key += token.is_action() ? '\x01' : '\x02';
  key += token.text;
  return key;
}

}  // namespace

std::string_view PlayerName(Player p) {
  return p == Player::kPlus ? "plus" : "minus";
}

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kNature:
      return "nature";
    case NodeKind::kPlus:
      return "plus";
    case NodeKind::kMinus:
      return "minus";
    case NodeKind::kTerminal:
      return "terminal";
  }
  return "?";
}

NodeId GameDescription::AddChild(NodeId parent, std::string action,
                                 NodeSpec child, double prob) {
  NodeId id = Add(std::move(child));
  NodeSpec& p = nodes[parent];
  p.actions.push_back(std::move(action));
  p.children.push_back(id);
  if (p.kind == NodeKind::kNature) p.probs.push_back(prob);
  return id;
}

std::string TokenString(const Token& token) {
  return token.is_action() ? "!" + token.text : token.text;
}

std::string PathToString(const SequencePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += '/';
    out += TokenString(path[i]);
  }
  return out;
}

std::optional<int> PlayerView::FindChild(int parent, const Token& token) const {
  if (parent < 0) {
    if (!entries_.empty() && entries_[0].token == token) return 0;
    return std::nullopt;
  }
  for (int c : entries_[parent].children) {
    if (entries_[c].token == token) return c;
  }
  return std::nullopt;
}

std::optional<int> PlayerView::Find(const SequencePath& path) const {
  int cur = -1;
  for (const Token& t : path) {
    auto next = FindChild(cur, t);
    if (!next) return std::nullopt;
    cur = *next;
  }
  if (cur < 0) return std::nullopt;
  return cur;
}

SequencePath PlayerView::Path(int entry) const {
  SequencePath path;
  for (int e = entry; e >= 0; e = entries_[e].parent) {
    path.push_back(entries_[e].token);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::string PlayerView::Label(int entry) const {
  for (int e = entry; e >= 0; e = entries_[e].parent) {
    const Token& t = entries_[e].token;
    if (t.is_action() || t.text.empty()) continue;
    if (t.text.front() == '@') {
      auto hash = t.text.rfind('#');
      return t.text.substr(1, hash == std::string::npos ? std::string::npos
                                                        : hash - 1);
    }
    return t.text;
  }
  return "";
}

std::string PlayerView::PathString(int entry) const {
  return PathToString(Path(entry));
}

std::optional<int> PlayerView::FindByString(std::string_view text) const {
  SequencePath path;
  std::size_t start = 0;
  while (true) {
    std::size_t slash = text.find('/', start);
    std::string_view piece = text.substr(
        start, slash == std::string_view::npos ? std::string_view::npos
                                               : slash - start);
    if (!piece.empty() && piece.front() == '!') {
      path.push_back(Token::Act(std::string(piece.substr(1))));
    } else {
      path.push_back(Token::Obs(std::string(piece)));
    }
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return Find(path);
}

bool PlayerView::Extends(int entry, int ancestor) const {
  if (entry < 0 || ancestor < 0) return false;
  int target_depth = entries_[ancestor].depth;
  while (entry >= 0 && entries_[entry].depth > target_depth) {
    entry = entries_[entry].parent;
  }
  return entry == ancestor;
}

bool PlayerView::SequenceExtends(int seq, int ancestor) const {
  if (ancestor == 0) return true;
  if (seq == 0) return false;
  return Extends(seq_entry_[seq], seq_entry_[ancestor]);
}

Game Game::Build(GameDescription description) {
  Game g;
  g.desc_ = std::move(description);
  const int n = g.num_nodes();
  Check(n > 0, ErrorCode::kInvalidTree, "empty node list");
  Check(g.desc_.root >= 0 && g.desc_.root < n, ErrorCode::kInvalidTree,
        "root out of range");

  g.parent_.assign(n, -1);
  g.action_in_parent_.assign(n, -1);
  for (NodeId id = 0; id < n; ++id) {
    const NodeSpec& s = g.desc_.nodes[id];
    const std::string where = "node " + std::to_string(id);
    if (s.kind == NodeKind::kTerminal) {
      Check(s.children.empty() && s.actions.empty(), ErrorCode::kInvalidTree,
            where + ": terminal with children");
      Check(std::isfinite(s.utility), ErrorCode::kInvalidTree,
            where + ": non-finite utility");
      continue;
    }
    Check(!s.children.empty(), ErrorCode::kInvalidTree,
          where + ": non-terminal without children");
    Check(s.actions.size() == s.children.size(), ErrorCode::kInvalidTree,
          where + ": action/child count mismatch");
    {
      std::vector<std::string> sorted = s.actions;
      std::sort(sorted.begin(), sorted.end());
      Check(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            ErrorCode::kInvalidTree, where + ": duplicate action label");
    }
    if (s.kind == NodeKind::kNature) {
      Check(s.probs.size() == s.children.size(), ErrorCode::kBadDistribution,
            where + ": probability count mismatch");
      double total = 0;
      for (double p : s.probs) {
        Check(p >= 0 && std::isfinite(p), ErrorCode::kBadDistribution,
              where + ": negative probability");
        total += p;
      }
      Check(std::abs(total - 1.0) <= kDistributionTolerance,
            ErrorCode::kBadDistribution, where + ": probabilities sum to " +
                                             std::to_string(total));
    } else {
      Check(s.probs.empty(), ErrorCode::kBadDistribution,
            where + ": probabilities on a player node");
    }
    for (std::size_t a = 0; a < s.children.size(); ++a) {
      NodeId c = s.children[a];
      Check(c >= 0 && c < n, ErrorCode::kInvalidTree,
            where + ": child out of range");
      Check(c != g.desc_.root, ErrorCode::kInvalidTree,
            where + ": root has a parent");
      Check(g.parent_[c] < 0, ErrorCode::kInvalidTree,
            "node " + std::to_string(c) + " has two parents");
      g.parent_[c] = id;
      g.action_in_parent_[c] = static_cast<int>(a);
    }
  }

  g.depth_.assign(n, 0);
  g.chance_reach_.assign(n, 0.0);
  g.preorder_.reserve(n);
  std::vector<NodeId> stack = {g.desc_.root};
  g.chance_reach_[g.desc_.root] = 1.0;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    g.preorder_.push_back(id);
    const NodeSpec& s = g.desc_.nodes[id];
    if (s.kind == NodeKind::kTerminal) g.terminals_.push_back(id);
    for (std::size_t a = s.children.size(); a-- > 0;) {
      NodeId c = s.children[a];
      g.depth_[c] = g.depth_[id] + 1;
      g.chance_reach_[c] =
          g.chance_reach_[id] * (s.kind == NodeKind::kNature ? s.probs[a] : 1.0);
      stack.push_back(c);
    }
  }
  Check(static_cast<int>(g.preorder_.size()) == n, ErrorCode::kInvalidTree,
        "orphan nodes not reachable from the root");

  g.BuildView(Player::kPlus);
  g.BuildView(Player::kMinus);

  Fnv f;
  f.Pod(n);
  f.Pod(g.desc_.root);
  for (const NodeSpec& s : g.desc_.nodes) {
    f.Pod(s.kind);
    f.Str(s.obs[0]);
    f.Str(s.obs[1]);
    f.Pod(s.utility);
    for (std::size_t a = 0; a < s.children.size(); ++a) {
      f.Str(s.actions[a]);
      f.Pod(s.children[a]);
      if (!s.probs.empty()) f.Pod(s.probs[a]);
    }
  }
  for (const auto& paths : g.desc_.phantom) {
    f.Pod(paths.size());
    for (const auto& path : paths) f.Str(PathToString(path));
  }
  g.fingerprint_ = f.h;
  return g;
}

void Game::BuildView(Player p) {
  PlayerView& v = views_[Index(p)];
  v.player_ = p;
  const int pi = Index(p);
  std::unordered_map<std::string, int> lookup;
  lookup.reserve(static_cast<std::size_t>(num_nodes()) * 2);

  auto intern = [&](int parent, Token token) {
    std::string key = ChildKey(parent, token);
    auto it = lookup.find(key);
    if (it != lookup.end()) return std::pair{it->second, false};
    int id = static_cast<int>(v.entries_.size());
    TrieEntry e;
    e.parent = parent;
    e.token = std::move(token);
    e.depth = parent < 0 ? 0 : v.entries_[parent].depth + 1;
    v.entries_.push_back(std::move(e));
    if (parent >= 0) v.entries_[parent].children.push_back(id);
    lookup.emplace(std::move(key), id);
    return std::pair{id, true};
  };

  // Owned entries remember the action list of their first member.
  std::vector<int> owner_node;
  v.node_entry_.assign(num_nodes(), -1);
  for (NodeId id : preorder_) {
    const NodeSpec& s = desc_.nodes[id];
    int parent_entry = -1;
    if (id != desc_.root) {
      NodeId par = parent_[id];
      parent_entry = v.node_entry_[par];
      if (Owns(p, desc_.nodes[par].kind)) {
        parent_entry = intern(parent_entry,
                              Token::Act(desc_.nodes[par].actions[action_in_parent_[id]]))
                           .first;
      }
    }
    auto [entry, fresh] = intern(parent_entry, Token::Obs(s.obs[pi]));
    v.node_entry_[id] = entry;
    if (static_cast<int>(owner_node.size()) < v.num_entries()) {
      owner_node.resize(v.num_entries(), -1);
    }
    TrieEntry& e = v.entries_[entry];
    const bool owned = Owns(p, s.kind);
    if (!e.nodes.empty()) {
      const bool first_owned = Owns(p, desc_.nodes[e.nodes.front()].kind);
      Check(first_owned == owned, ErrorCode::kObservationMoverMismatch,
            std::string(PlayerName(p)) + " cannot tell whether it moves at " +
                v.PathString(entry));
      if (owned) {
        Check(desc_.nodes[owner_node[entry]].actions == s.actions,
              ErrorCode::kImperfectRecall,
              "members of infoset " + v.PathString(entry) +
                  " expose different actions");
      }
    } else if (owned) {
      owner_node[entry] = id;
      for (const std::string& a : s.actions) intern(entry, Token::Act(a));
    }
    (void)fresh;
    v.entries_[entry].nodes.push_back(id);
  }

  // Phantom sequences.
  for (const SequencePath& path : desc_.phantom[pi]) {
    Check(!path.empty() && !path.front().is_action() &&
              path.front() == v.entries_[0].token,
          ErrorCode::kInvalidArgument,
          "phantom sequence does not start at the root observation");
    int cur = 0;
    for (std::size_t i = 1; i < path.size(); ++i) {
      const Token& t = path[i];
      const TrieEntry& here = v.entries_[cur];
      if (t.is_action()) {
        Check(!here.is_action(), ErrorCode::kInvalidArgument,
              "two consecutive action tokens in a phantom sequence");
        if (!here.nodes.empty()) {
          const NodeSpec& member = desc_.nodes[here.nodes.front()];
          Check(Owns(p, member.kind), ErrorCode::kObservationMoverMismatch,
                "phantom action at a non-decision observation sequence " +
                    v.PathString(cur));
          Check(std::find(member.actions.begin(), member.actions.end(),
                          t.text) != member.actions.end(),
                ErrorCode::kInvalidArgument,
                "phantom action '" + t.text + "' is not legal at " +
                    v.PathString(cur));
        }
      }
      cur = intern(cur, t).first;
    }
  }

  // Decision infosets in entry order, which is parent-first.
  v.seq_infoset_ = {-1};
  v.seq_entry_ = {-1};
  for (int id = 0; id < v.num_entries(); ++id) {
    TrieEntry& e = v.entries_[id];
    if (e.is_action()) continue;
    bool decision = false;
    if (!e.nodes.empty()) {
      decision = Owns(p, desc_.nodes[e.nodes.front()].kind);
    } else {
      for (int c : e.children) decision |= v.entries_[c].is_action();
    }
    if (!decision) continue;
    DecisionInfoset info;
    info.entry = id;
    info.first_sequence = static_cast<int>(v.seq_infoset_.size());
    e.infoset = v.num_infosets();
    for (int c : e.children) {
      if (!v.entries_[c].is_action()) continue;
      info.actions.push_back(v.entries_[c].token.text);
      v.entries_[c].sequence = static_cast<int>(v.seq_infoset_.size());
      v.seq_infoset_.push_back(e.infoset);
      v.seq_entry_.push_back(c);
    }
    v.infosets_.push_back(std::move(info));
  }
  for (int id = 0; id < v.num_entries(); ++id) {
    TrieEntry& e = v.entries_[id];
    if (e.is_action()) {
      e.prefix_sequence = e.sequence;
    } else {
      e.prefix_sequence = e.parent < 0 ? 0 : v.entries_[e.parent].prefix_sequence;
    }
    if (e.is_action() && e.sequence < 0) {
      Fail(ErrorCode::kInvalidArgument,
           "action token below a non-decision sequence " + v.PathString(id));
    }
  }
  for (DecisionInfoset& info : v.infosets_) {
    info.parent_sequence = v.entries_[info.entry].prefix_sequence;
  }
}

}  // namespace klss
