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

#ifndef KLSS_KNOWLEDGE_H_
#define KLSS_KNOWLEDGE_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "klss/game.h"

namespace klss {

// Order of a knowledge set: a positive integer or infinity.
class Order {
 public:
  static Order Finite(int k) { return Order(k); }
  static Order Infinite() { return Order(0); }
  // Parses "3" or "inf".
  static Order Parse(const std::string& text);

  bool infinite() const { return k_ == 0; }
  int k() const { return k_; }
  std::string ToString() const {
    return infinite() ? "inf" : std::to_string(k_);
  }
  friend bool operator==(Order, Order) = default;

 private:
  explicit Order(int k) : k_(k) {}
  int k_;
};

struct KnowledgeSet {
  std::vector<NodeId> generators;  // sorted
  Order order = Order::Finite(1);
  std::vector<NodeId> members;     // sorted
  // Hypergraph distance of each member from the generators, parallel to
  // `members`.
  std::vector<int> distance;

  bool Contains(NodeId node) const;
  int size() const { return static_cast<int>(members.size()); }
};

// Nodes within hypergraph distance k-1 of `nodes`; two nodes are adjacent
// when they share an infoset of either player (every observation sequence
// counts, including ones at nature and terminal nodes).
KnowledgeSet MakeKnowledgeSet(const Game& game, std::span<const NodeId> nodes,
                              Order order);
KnowledgeSet CommonKnowledgeClosure(const Game& game,
                                    std::span<const NodeId> nodes);

// Members of a plus decision infoset (by index).
std::vector<NodeId> InfosetNodes(const Game& game, Player player, int infoset);

// Plus decision infosets joined when they contain nodes sharing a minus
// infoset.
class CollapsedGraph {
 public:
  explicit CollapsedGraph(const Game& game);

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
  bool adjacent(int a, int b) const;
  int num_edges() const;

  // Connected components of the collapsed graph; these are the plus
  // infosets that share a common-knowledge closure.
  const std::vector<int>& component_of() const { return component_; }
  int num_components() const { return num_components_; }
  std::vector<int> ComponentVertices(int component) const;

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> component_;
  int num_components_ = 0;
};

// Proper coloring: exact for at most 12 vertices, largest-degree-first
// greedy otherwise. Returns one color per listed vertex.
std::vector<int> ColorVertices(const CollapsedGraph& graph,
                               std::span<const int> vertices);
int ChromaticNumberExact(const CollapsedGraph& graph,
                         std::span<const int> vertices);

// Distribution over ancestor-closed independent sets of the collapsed graph:
// every component independently picks one of its color classes uniformly,
// then infosets whose plus ancestors were not all picked are dropped.
class IndependentSetPlan {
 public:
  explicit IndependentSetPlan(const Game& game);

  const CollapsedGraph& graph() const { return graph_; }
  int colors(int component) const { return colors_[component]; }
  int color(int vertex) const { return color_[vertex]; }
  // Pr[vertex is in the sampled set].
  double probability(int vertex) const { return probability_[vertex]; }
  // Colors used in the component containing `vertex`.
  int chromatic_bound(int vertex) const {
    return colors_[graph_.component_of()[vertex]];
  }

  std::vector<bool> Sample(std::mt19937_64& rng) const;

  bool IsIndependent(const std::vector<bool>& chosen) const;
  bool IsAncestorClosed(const std::vector<bool>& chosen) const;

 private:
  const Game* game_;
  CollapsedGraph graph_;
  std::vector<int> color_;
  std::vector<int> colors_;
  // Nearest plus decision infoset above each infoset, -1 at the top.
  std::vector<int> parent_infoset_;
  std::vector<double> probability_;
};

}  // namespace klss

#endif  // KLSS_KNOWLEDGE_H_
