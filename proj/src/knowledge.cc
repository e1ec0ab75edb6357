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

#include "klss/knowledge.h"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "klss/error.h"

namespace klss {
namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int Find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void Join(int a, int b) { parent[Find(a)] = Find(b); }
};

bool TryColor(const CollapsedGraph& g, std::span<const int> vs, int k,
              std::vector<int>& color, int i) {
  if (i == static_cast<int>(vs.size())) return true;
  // Symmetry breaking: vertex i may open at most one new color.
  int used = 0;
  for (int j = 0; j < i; ++j) used = std::max(used, color[j] + 1);
  for (int c = 0; c < std::min(k, used + 1); ++c) {
    bool ok = true;
    for (int j = 0; j < i && ok; ++j) {
      if (color[j] == c && g.adjacent(vs[i], vs[j])) ok = false;
    }
    if (!ok) continue;
    color[i] = c;
    if (TryColor(g, vs, k, color, i + 1)) return true;
  }
  color[i] = -1;
  return false;
}

}  // namespace

Order Order::Parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return Infinite();
  std::size_t used = 0;
  int k = 0;
  try {
    k = std::stoi(text, &used);
  } catch (const std::exception&) {
    Fail(ErrorCode::kBadOrder, "cannot parse order '" + text + "'");
  }
  Check(used == text.size() && k >= 1, ErrorCode::kBadOrder,
        "order must be a positive integer or inf, got '" + text + "'");
  return Finite(k);
}

bool KnowledgeSet::Contains(NodeId node) const {
  return std::binary_search(members.begin(), members.end(), node);
}

KnowledgeSet MakeKnowledgeSet(const Game& game, std::span<const NodeId> nodes,
                              Order order) {
  Check(!nodes.empty(), ErrorCode::kEmptySet, "empty generating set");
  KnowledgeSet ks;
  ks.order = order;
  ks.generators.assign(nodes.begin(), nodes.end());
  std::sort(ks.generators.begin(), ks.generators.end());
  ks.generators.erase(std::unique(ks.generators.begin(), ks.generators.end()),
                      ks.generators.end());

  std::unordered_map<NodeId, int> dist;
  std::array<std::unordered_set<int>, 2> seen_entries;
  std::vector<NodeId> frontier = ks.generators;
  for (NodeId v : frontier) dist.emplace(v, 0);
  const int max_layer = order.infinite() ? -1 : order.k() - 1;
  for (int layer = 0; !frontier.empty() && layer != max_layer; ++layer) {
    std::vector<NodeId> next;
    for (NodeId v : frontier) {
      for (Player p : kPlayers) {
        const PlayerView& view = game.view(p);
        int e = view.node_entry(v);
        if (!seen_entries[Index(p)].insert(e).second) continue;
        for (NodeId w : view.entry(e).nodes) {
          if (dist.emplace(w, layer + 1).second) next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  ks.members.reserve(dist.size());
  for (const auto& [v, d] : dist) ks.members.push_back(v);
  std::sort(ks.members.begin(), ks.members.end());
  ks.distance.reserve(ks.members.size());
  for (NodeId v : ks.members) ks.distance.push_back(dist[v]);
  return ks;
}

KnowledgeSet CommonKnowledgeClosure(const Game& game,
                                    std::span<const NodeId> nodes) {
  return MakeKnowledgeSet(game, nodes, Order::Infinite());
}

std::vector<NodeId> InfosetNodes(const Game& game, Player player, int infoset) {
  const PlayerView& v = game.view(player);
  return v.entry(v.infoset(infoset).entry).nodes;
}

CollapsedGraph::CollapsedGraph(const Game& game) {
  const PlayerView& plus = game.view(Player::kPlus);
  const PlayerView& minus = game.view(Player::kMinus);
  const int n = plus.num_infosets();
  adjacency_.assign(n, {});
  for (const TrieEntry& e : minus.entries()) {
    std::vector<int> touched;
    for (NodeId v : e.nodes) {
      int i = plus.node_infoset(v);
      if (i >= 0) touched.push_back(i);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t a = 0; a < touched.size(); ++a) {
      for (std::size_t b = a + 1; b < touched.size(); ++b) {
        adjacency_[touched[a]].push_back(touched[b]);
        adjacency_[touched[b]].push_back(touched[a]);
      }
    }
  }
  for (auto& row : adjacency_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  // Group vertices by the common-knowledge closure of their nodes.
  UnionFind uf(game.num_nodes());
  for (Player p : kPlayers) {
    for (const TrieEntry& e : game.view(p).entries()) {
      for (std::size_t i = 1; i < e.nodes.size(); ++i) {
        uf.Join(e.nodes[0], e.nodes[i]);
      }
    }
  }
  component_.assign(n, -1);
  std::unordered_map<int, int> ids;
  for (int i = 0; i < n; ++i) {
    int root = uf.Find(plus.entry(plus.infoset(i).entry).nodes.front());
    auto [it, fresh] = ids.emplace(root, num_components_);
    if (fresh) ++num_components_;
    component_[i] = it->second;
  }
}

bool CollapsedGraph::adjacent(int a, int b) const {
  const auto& row = adjacency_[a];
  return std::binary_search(row.begin(), row.end(), b);
}

int CollapsedGraph::num_edges() const {
  int total = 0;
  for (const auto& row : adjacency_) total += static_cast<int>(row.size());
  return total / 2;
}

std::vector<int> CollapsedGraph::ComponentVertices(int component) const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v) {
    if (component_[v] == component) out.push_back(v);
  }
  return out;
}

int ChromaticNumberExact(const CollapsedGraph& graph,
                         std::span<const int> vertices) {
  if (vertices.empty()) return 0;
  std::vector<int> color(vertices.size(), -1);
  for (int k = 1;; ++k) {
    if (TryColor(graph, vertices, k, color, 0)) return k;
  }
}

std::vector<int> ColorVertices(const CollapsedGraph& graph,
                               std::span<const int> vertices) {
  const int n = static_cast<int>(vertices.size());
  std::vector<int> color(n, -1);
  if (n == 0) return color;
  if (n <= 12) {
    for (int k = 1;; ++k) {
      if (TryColor(graph, vertices, k, color, 0)) return color;
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto degree = [&](int i) {
    int d = 0;
    for (int j = 0; j < n; ++j) d += graph.adjacent(vertices[i], vertices[j]);
    return d;
  };
  std::vector<int> deg(n);
  for (int i = 0; i < n; ++i) deg[i] = degree(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return deg[a] > deg[b]; });
  for (int i : order) {
    std::vector<bool> taken(n + 1, false);
    for (int j = 0; j < n; ++j) {
      if (color[j] >= 0 && graph.adjacent(vertices[i], vertices[j])) {
        taken[color[j]] = true;
      }
    }
    int c = 0;
    while (taken[c]) ++c;
    color[i] = c;
  }
  return color;
}

IndependentSetPlan::IndependentSetPlan(const Game& game)
    : game_(&game), graph_(game) {
  const PlayerView& plus = game.view(Player::kPlus);
  const int n = graph_.num_vertices();
  color_.assign(n, 0);
  colors_.assign(graph_.num_components(), 1);
  for (int c = 0; c < graph_.num_components(); ++c) {
    std::vector<int> vs = graph_.ComponentVertices(c);
    std::vector<int> col = ColorVertices(graph_, vs);
    int used = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      color_[vs[i]] = col[i];
      used = std::max(used, col[i] + 1);
    }
    colors_[c] = std::max(used, 1);
  }
  parent_infoset_.assign(n, -1);
  probability_.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    int seq = plus.infoset(i).parent_sequence;
    parent_infoset_[i] = seq == 0 ? -1 : plus.sequence_infoset(seq);
    double p = 1.0 / colors_[graph_.component_of()[i]];
    if (parent_infoset_[i] >= 0) p *= probability_[parent_infoset_[i]];
    probability_[i] = p;
  }
}

std::vector<bool> IndependentSetPlan::Sample(std::mt19937_64& rng) const {
  std::vector<int> pick(colors_.size());
  for (std::size_t c = 0; c < colors_.size(); ++c) {
    // Not uniform_int_distribution: its output differs between standard
    // libraries.
    pick[c] = static_cast<int>(rng() % static_cast<std::uint64_t>(colors_[c]));
  }
  const int n = graph_.num_vertices();
  std::vector<bool> chosen(n, false);
  // Parents precede children in infoset order.
  for (int i = 0; i < n; ++i) {
    bool ok = color_[i] == pick[graph_.component_of()[i]];
    if (ok && parent_infoset_[i] >= 0) ok = chosen[parent_infoset_[i]];
    chosen[i] = ok;
  }
  return chosen;
}

bool IndependentSetPlan::IsIndependent(const std::vector<bool>& chosen) const {
  for (int v = 0; v < graph_.num_vertices(); ++v) {
    if (!chosen[v]) continue;
    for (int w : graph_.neighbors(v)) {
      if (chosen[w]) return false;
    }
  }
  return true;
}

bool IndependentSetPlan::IsAncestorClosed(const std::vector<bool>& chosen) const {
  for (int v = 0; v < graph_.num_vertices(); ++v) {
    if (chosen[v] && parent_infoset_[v] >= 0 && !chosen[parent_infoset_[v]]) {
      return false;
    }
  }
  return true;
}

}  // namespace klss
