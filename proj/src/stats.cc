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

#include "klss/stats.h"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace klss {
namespace {

bool IsDecision(NodeKind kind) {
  return kind == NodeKind::kPlus || kind == NodeKind::kMinus;
}

// Breadth-first search over the infoset hypergraph with scratch buffers that
// are reset between runs, so that many small searches stay cheap.
class HypergraphSearch {
 public:
  explicit HypergraphSearch(const Game& game)
      : game_(game), dist_(game.num_nodes(), -1) {
    for (Player p : kPlayers) {
      seen_[Index(p)].assign(game.view(p).num_entries(), 0);
    }
  }

  // Runs from `sources`; returns the reached nodes in BFS order.
  const std::vector<NodeId>& Run(std::span<const NodeId> sources) {
    Reset();
    std::deque<NodeId> queue;
    for (NodeId v : sources) {
      if (dist_[v] >= 0) continue;
      dist_[v] = 0;
      order_.push_back(v);
      queue.push_back(v);
    }
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      for (Player p : kPlayers) {
        const PlayerView& view = game_.view(p);
        int e = view.node_entry(v);
        auto& seen = seen_[Index(p)];
        if (seen[e]) continue;
        seen[e] = 1;
        touched_[Index(p)].push_back(e);
        for (NodeId w : view.entry(e).nodes) {
          if (dist_[w] >= 0) continue;
          dist_[w] = dist_[v] + 1;
          order_.push_back(w);
          queue.push_back(w);
        }
      }
    }
    return order_;
  }

  int distance(NodeId v) const { return dist_[v]; }

 private:
  void Reset() {
    for (NodeId v : order_) dist_[v] = -1;
    order_.clear();
    for (int p = 0; p < 2; ++p) {
      for (int e : touched_[p]) seen_[p][e] = 0;
      touched_[p].clear();
    }
  }

  const Game& game_;
  std::vector<int> dist_;
  std::vector<NodeId> order_;
  std::array<std::vector<char>, 2> seen_;
  std::array<std::vector<int>, 2> touched_;
};

}  // namespace

GameStats ComputeStats(const Game& game, SamplingConvention convention) {
  GameStats stats;
  stats.nodes = game.num_nodes();
  stats.infosets = game.num_decision_infosets();
  HypergraphSearch search(game);

  for (NodeId s = 0; s < game.num_nodes(); ++s) {
    if (!IsDecision(game.kind(s))) continue;
    NodeId one[1] = {s};
    for (NodeId v : search.Run(one)) {
      if (IsDecision(game.kind(v))) {
        stats.diameter = std::max(stats.diameter, search.distance(v));
      }
    }
  }

  // Sizes of I^k depend only on the sampled class, so cache per entry.
  std::map<std::pair<int, int>, std::array<double, 5>> cache;
  auto sizes = [&](Player p, int entry) {
    auto key = std::pair(Index(p), entry);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::array<double, 5> out{};
    const auto& reached = search.Run(game.view(p).entry(entry).nodes);
    for (NodeId v : reached) {
      int d = search.distance(v);
      for (int k = 1; k <= 4; ++k) {
        if (d <= k - 1) out[k - 1] += 1;
      }
      out[4] += 1;
    }
    cache.emplace(key, out);
    return out;
  };

  std::array<double, 5> total{};
  double samples = 0;
  for (NodeId v = 0; v < game.num_nodes(); ++v) {
    std::optional<Player> who;
    if (game.kind(v) == NodeKind::kPlus) who = Player::kPlus;
    if (game.kind(v) == NodeKind::kMinus) who = Player::kMinus;
    if (!who) {
      if (convention == SamplingConvention::kDecisionNodes) continue;
      who = Player::kPlus;
      for (NodeId a = game.parent(v); a >= 0; a = game.parent(a)) {
        if (game.kind(a) == NodeKind::kPlus) {
          who = Player::kPlus;
          break;
        }
        if (game.kind(a) == NodeKind::kMinus) {
          who = Player::kMinus;
          break;
        }
      }
    }
    auto s = sizes(*who, game.view(*who).node_entry(v));
    for (int i = 0; i < 5; ++i) total[i] += s[i];
    samples += 1;
  }
  if (samples > 0) {
    for (int i = 0; i < 5; ++i) stats.avg_knowledge[i] = total[i] / samples;
  }
  return stats;
}

}  // namespace klss
