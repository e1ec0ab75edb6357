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

#include "klss/subgame.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <unordered_map>
#include <utility>

#include "json.hpp"
#include "klss/error.h"
#include "klss/game_io.h"
#include "klss/rng.h"

namespace klss {
namespace {

using Json = nlohmann::ordered_json;

std::string CopyToken(const PlayerView& view, int entry) {
  return "@" + view.Label(entry) + "#" + std::to_string(entry);
}

std::string Unwrap(const std::string& text) {
  if (text.empty() || text.front() != '@') return text;
  auto hash = text.rfind('#');
  return text.substr(1, hash == std::string::npos ? std::string::npos : hash - 1);
}

// Tokens below `ancestor` on the way to `entry`.
SequencePath Tail(const PlayerView& view, int entry, int ancestor) {
  SequencePath out;
  const int depth = view.entry(ancestor).depth;
  for (int e = entry; view.entry(e).depth > depth; e = view.entry(e).parent) {
    out.push_back(view.entry(e).token);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

NodeId CopySubtree(const Game& source, NodeId node, GameDescription& out,
                   std::vector<NodeId>& origin) {
  NodeSpec spec = source.node(node);
  spec.children.clear();
  const NodeId id = out.Add(std::move(spec));
  origin.push_back(node);
  for (NodeId child : source.node(node).children) {
    const NodeId copy = CopySubtree(source, child, out, origin);
    out.nodes[id].children.push_back(copy);
  }
  return id;
}

void CollectTerminals(const Game& game, NodeId node, std::vector<NodeId>& out) {
  std::vector<NodeId> stack = {node};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (game.kind(n) == NodeKind::kTerminal) {
      out.push_back(n);
      continue;
    }
    for (NodeId c : game.node(n).children) stack.push_back(c);
  }
}

struct BranchPlan {
  GadgetBranch branch;
  // Fixed payoff below the branch entry, keyed by the minus tokens under it
  // (the empty tail is the entry itself).
  std::map<SequencePath, double> fixed;
};

bool WeaklyAbove(const BranchPlan& a, const BranchPlan& b) {
  if (a.fixed.size() != b.fixed.size()) return false;
  for (const auto& [tail, value] : a.fixed) {
    auto it = b.fixed.find(tail);
    if (it == b.fixed.end() || value < it->second) return false;
  }
  return true;
}

SequencePath BranchPrefix(const Token& root, const std::string& label,
                          const std::string& copy_token) {
  return {root, Token::Act(label), Token::Obs(""), Token::Obs(copy_token)};
}

void CheckOrder(Order order) {
  if (order.infinite()) return;
  Check(order.k() >= 1 && order.k() % 2 == 1, ErrorCode::kBadOrder,
        "knowledge order must be odd and positive, got " + order.ToString());
}

Json EncodePath(const SequencePath& path) {
  Json out = Json::array();
  for (const Token& t : path) out.push_back(EncodeToken(t));
  return out;
}

SequencePath DecodePath(const Json& json) {
  SequencePath out;
  for (const auto& t : json) out.push_back(DecodeToken(t.get<std::string>()));
  return out;
}

int RootInfosetOf(const Game& game, NodeId node) {
  return node < 0 ? -1 : game.view(Player::kPlus).node_infoset(node);
}

// Gadget node copying a member of the given source plus infoset.
NodeId FindRootCopy(const GadgetGame& g, const Game& source, int infoset) {
  const PlayerView& sv = source.view(Player::kPlus);
  for (NodeId n = 0; n < g.game.num_nodes(); ++n) {
    NodeId s = g.source_node[n];
    if (s >= 0 && sv.node_infoset(s) == infoset) return n;
  }
  return -1;
}

}  // namespace

std::string_view GadgetKindName(GadgetKind kind) {
  return kind == GadgetKind::kMaxmargin ? "maxmargin" : "resolve";
}

TranspositionKeys::TranspositionKeys(const Game& game)
    : key_(game.num_nodes(), -1) {
  std::unordered_map<std::string, int> intern;
  std::string buf;
  auto put = [&buf](const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
  };
  auto put_string = [&](const std::string& s) {
    std::uint64_t n = s.size();
    put(&n, sizeof n);
    buf += s;
  };
  auto preorder = game.preorder();
  for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
    const NodeSpec& s = game.node(*it);
    buf.clear();
    put(&s.kind, sizeof s.kind);
    if (s.kind == NodeKind::kTerminal) put(&s.utility, sizeof s.utility);
    for (std::size_t a = 0; a < s.children.size(); ++a) {
      const NodeSpec& c = game.node(s.children[a]);
      put_string(s.actions[a]);
      if (!s.probs.empty()) put(&s.probs[a], sizeof(double));
      put(&key_[s.children[a]], sizeof(int));
      put_string(c.obs[0]);
      put_string(c.obs[1]);
    }
    auto [pos, fresh] = intern.emplace(buf, static_cast<int>(intern.size()));
    key_[*it] = pos->second;
  }
}

GadgetGame MakeSubgame(const Game& source, const PayoffAddends& source_addends,
                       const SequenceFormStrategy& x, int infoset, Order order,
                       const SubgameOptions& options) {
  const PlayerView& pv = source.view(Player::kPlus);
  const PlayerView& mv = source.view(Player::kMinus);
  CheckOrder(order);
  Check(infoset >= 0 && infoset < pv.num_infosets(), ErrorCode::kInvalidArgument,
        "no plus infoset " + std::to_string(infoset));
  Check(x.player == Player::kPlus && x.size() == pv.num_sequences(),
        ErrorCode::kDimensionMismatch, "blueprint size mismatch");
  Check(!options.merge_transpositions || order == Order::Finite(1),
        ErrorCode::kBadParameter, "transposition merging needs order 1");
  Check(source_addends.top_row_only(), ErrorCode::kInvalidArgument,
        "source addends outside the empty plus sequence");
  Check(x[pv.infoset(infoset).parent_sequence] > 0,
        ErrorCode::kUnreachableInfoset,
        "blueprint never reaches " + pv.PathString(pv.infoset(infoset).entry));

  const std::vector<NodeId> generators = InfosetNodes(source, Player::kPlus, infoset);
  const KnowledgeSet knowledge =
      order.infinite() ? CommonKnowledgeClosure(source, generators)
                       : MakeKnowledgeSet(source, generators, order);
  const CounterfactualValues cv = ComputeCounterfactualValues(source, source_addends, x);
  auto weight = [&](NodeId h) {
    return source.chance_reach(h) * x[pv.node_sequence(h)];
  };

  std::map<int, std::vector<NodeId>> by_entry;
  for (NodeId h : knowledge.members) by_entry[mv.node_entry(h)].push_back(h);

  std::vector<BranchPlan> plans;
  for (const auto& [entry, members] : by_entry) {
    double mass = 0;
    for (NodeId h : members) mass += weight(h);
    if (!(mass > 0)) continue;
    BranchPlan plan;
    GadgetBranch& b = plan.branch;
    b.source_entry = entry;
    b.label = CopyToken(mv, entry);
    b.mass = mass;
    b.source_mass = cv.mass[entry];
    b.members = members;
    if (options.reach) {
      for (int e = entry; e > 0; e = mv.entry(e).parent) {
        const TrieEntry& te = mv.entry(e);
        if (!te.is_action() || !cv.defined(te.parent)) continue;
        b.gift += cv.value(e) - cv.value(te.parent);
      }
    }
    b.alternate = (cv.raw[entry] - b.source_mass * b.gift) / mass;
    plan.fixed[{}] -= b.alternate;

    for (const auto& [key, value] : source_addends.entries()) {
      if (mv.Extends(key.second, entry)) {
        plan.fixed[Tail(mv, key.second, entry)] += value / mass;
      }
    }
    std::vector<NodeId> outside;
    for (NodeId h : mv.entry(entry).nodes) {
      if (!knowledge.Contains(h)) CollectTerminals(source, h, outside);
    }
    for (NodeId z : outside) {
      plan.fixed[Tail(mv, mv.node_entry(z), entry)] +=
          weight(z) * source.node(z).utility / mass;
    }
    plans.push_back(std::move(plan));
  }
  Check(!plans.empty(), ErrorCode::kUnreachableInfoset,
        "knowledge set has no reach");

  GadgetGame out;
  if (options.merge_transpositions) {
    const TranspositionKeys keys(source);
    std::vector<int> order_ix(plans.size());
    for (std::size_t i = 0; i < plans.size(); ++i) order_ix[i] = static_cast<int>(i);
    std::mt19937_64 rng = Substream(options.seed, "transposition");
    for (std::size_t i = order_ix.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(UnitUniform(rng) * static_cast<double>(i));
      std::swap(order_ix[i - 1], order_ix[std::min(j, i - 1)]);
    }
    std::map<int, int> kept_by_key;  // transposition key -> plan index
    std::vector<bool> keep(plans.size(), true);
    for (int i : order_ix) {
      if (plans[i].branch.members.size() != 1) continue;
      const int key = keys.key(plans[i].branch.members.front());
      auto it = kept_by_key.find(key);
      if (it == kept_by_key.end()) {
        kept_by_key.emplace(key, i);
        continue;
      }
      const int other = it->second;
      if (!WeaklyAbove(plans[i], plans[other]) &&
          WeaklyAbove(plans[other], plans[i])) {
        keep[other] = false;
        it->second = i;
      } else {
        keep[i] = false;
      }
    }
    std::vector<BranchPlan> kept;
    for (std::size_t i = 0; i < plans.size(); ++i) {
      if (keep[i]) {
        kept.push_back(std::move(plans[i]));
      } else {
        out.merged_entries.push_back(plans[i].branch.source_entry);
      }
    }
    plans = std::move(kept);
  }

  GameDescription desc;
  const NodeId root = desc.Add({NodeKind::kMinus, {"", ""}, {}, {}, {}, 0.0});
  out.source_node.push_back(-1);
  for (BranchPlan& plan : plans) {
    GadgetBranch& b = plan.branch;
    const NodeId nature = desc.AddChild(root, b.label,
                                        {NodeKind::kNature, {"", ""}, {}, {}, {}, 0.0});
    out.source_node.push_back(-1);
    b.nature = nature;
    for (NodeId h : b.members) {
      const NodeId copy = CopySubtree(source, h, desc, out.source_node);
      desc.nodes[copy].obs = {CopyToken(pv, pv.node_entry(h)), b.label};
      NodeSpec& n = desc.nodes[nature];
      n.actions.push_back(std::to_string(h));
      n.children.push_back(copy);
      n.probs.push_back(weight(h) / b.mass);
    }
  }

  const Token root_token = Token::Obs("");
  auto build = [&]() {
    Game g = Game::Build(desc);
    const PlayerView& gv = g.view(Player::kMinus);
    bool missing = false;
    for (const BranchPlan& plan : plans) {
      for (const auto& [tail, value] : plan.fixed) {
        SequencePath path = BranchPrefix(root_token, plan.branch.label, plan.branch.label);
        path.insert(path.end(), tail.begin(), tail.end());
        if (!gv.Find(path)) {
          desc.phantom[Index(Player::kMinus)].push_back(std::move(path));
          missing = true;
        }
      }
    }
    return std::pair{std::move(g), missing};
  };
  auto [game, missing] = build();
  if (missing) game = Game::Build(desc);
  out.game = std::move(game);

  const PlayerView& gv = out.game.view(Player::kMinus);
  for (BranchPlan& plan : plans) {
    for (const auto& [tail, value] : plan.fixed) {
      SequencePath path = BranchPrefix(root_token, plan.branch.label, plan.branch.label);
      path.insert(path.end(), tail.begin(), tail.end());
      out.addends.Add(0, *gv.Find(path), value);
    }
    out.branches.push_back(std::move(plan.branch));
  }
  out.kind = GadgetKind::kMaxmargin;
  out.provenance = {source.fingerprint(), pv.PathString(pv.infoset(infoset).entry),
                    order, options};
  out.root_infoset = RootInfosetOf(out.game, FindRootCopy(out, source, infoset));
  return out;
}

GadgetGame MaxmarginToResolve(const GadgetGame& gadget) {
  Check(gadget.kind == GadgetKind::kMaxmargin, ErrorCode::kWrongKind,
        "gadget is not a maxmargin gadget");
  GameDescription desc = gadget.game.description();
  const NodeId root = desc.root;
  const std::vector<NodeId> branches = desc.nodes[root].children;
  const int n = static_cast<int>(branches.size());
  GadgetGame out = gadget;
  NodeSpec& r = desc.nodes[root];
  r.kind = NodeKind::kNature;
  r.probs.assign(n, 1.0 / n);
  for (int j = 0; j < n; ++j) {
    const std::string label = desc.nodes[root].actions[j];
    const NodeId wrapper = desc.Add({NodeKind::kMinus, {"", label}, {}, {}, {}, 0.0});
    out.source_node.push_back(-1);
    desc.AddChild(wrapper, "E", {NodeKind::kTerminal, {"", ""}, {}, {}, {}, 0.0});
    out.source_node.push_back(-1);
    desc.nodes[wrapper].actions.push_back("P");
    desc.nodes[wrapper].children.push_back(branches[j]);
    desc.nodes[root].children[j] = wrapper;
  }
  const PlayerView& old_minus = gadget.game.view(Player::kMinus);
  auto to_resolve = [](SequencePath path) {
    if (path.size() >= 2 && path[1].is_action()) {
      Token label = Token::Obs(path[1].text);
      path[1] = Token::Act("P");
      path.insert(path.begin() + 1, label);
    }
    return path;
  };
  for (SequencePath& p : desc.phantom[Index(Player::kMinus)]) p = to_resolve(p);
  for (SequencePath& p : desc.phantom[Index(Player::kPlus)]) {
    if (!p.empty()) p.insert(p.begin() + 1, Token::Obs(""));
  }
  out.game = Game::Build(std::move(desc));
  out.addends = PayoffAddends{};
  const PlayerView& mv = out.game.view(Player::kMinus);
  for (const auto& [key, value] : gadget.addends.entries()) {
    auto e = mv.Find(to_resolve(old_minus.Path(key.second)));
    Check(e.has_value(), ErrorCode::kInvalidTree, "addend lost in conversion");
    out.addends.Add(key.first, *e, value / n);
  }
  out.maxmargin_addends = gadget.addends;
  out.kind = GadgetKind::kResolve;
  const PlayerView& old_plus = gadget.game.view(Player::kPlus);
  out.root_infoset = gadget.root_infoset < 0
                         ? -1
                         : RootInfosetOf(out.game, old_plus.entry(old_plus.infoset(gadget.root_infoset).entry).nodes.front());
  return out;
}

GadgetGame ResolveToMaxmargin(const GadgetGame& gadget) {
  Check(gadget.kind == GadgetKind::kResolve, ErrorCode::kWrongKind,
        "gadget is not a resolve gadget");
  const GameDescription& in = gadget.game.description();
  const NodeSpec& root = in.nodes[in.root];
  const int n = static_cast<int>(root.children.size());
  std::vector<bool> drop(in.nodes.size(), false);
  std::vector<NodeId> play(n);
  for (int j = 0; j < n; ++j) {
    const NodeSpec& w = in.nodes[root.children[j]];
    Check(w.kind == NodeKind::kMinus && w.actions.size() == 2 &&
              w.actions[0] == "E" && w.actions[1] == "P",
          ErrorCode::kInvalidTree, "resolve gadget branch without exit/play");
    drop[root.children[j]] = true;
    drop[w.children[0]] = true;
    play[j] = w.children[1];
  }
  std::vector<NodeId> remap(in.nodes.size(), -1);
  GameDescription desc;
  for (std::size_t i = 0; i < in.nodes.size(); ++i) {
    if (drop[i]) continue;
    remap[i] = static_cast<NodeId>(desc.nodes.size());
    desc.nodes.push_back(in.nodes[i]);
  }
  for (NodeSpec& s : desc.nodes) {
    for (NodeId& c : s.children) c = remap[c];
  }
  desc.root = remap[in.root];
  NodeSpec& r = desc.nodes[desc.root];
  r.kind = NodeKind::kMinus;
  r.probs.clear();
  for (int j = 0; j < n; ++j) r.children[j] = remap[play[j]];
  auto to_maxmargin = [](SequencePath path) {
    if (path.size() >= 3 && !path[1].is_action() && path[2].is_action()) {
      path[2] = Token::Act(path[1].text);
      path.erase(path.begin() + 1);
    }
    return path;
  };
  desc.phantom = in.phantom;
  for (SequencePath& p : desc.phantom[Index(Player::kMinus)]) p = to_maxmargin(p);
  for (SequencePath& p : desc.phantom[Index(Player::kPlus)]) {
    if (p.size() > 1) p.erase(p.begin() + 1);
  }

  GadgetGame out = gadget;
  out.game = Game::Build(std::move(desc));
  out.kind = GadgetKind::kMaxmargin;
  out.source_node.clear();
  for (std::size_t i = 0; i < in.nodes.size(); ++i) {
    if (!drop[i]) out.source_node.push_back(gadget.source_node[i]);
  }
  for (GadgetBranch& b : out.branches) b.nature = b.nature >= 0 ? remap[b.nature] : -1;
  if (gadget.maxmargin_addends) {
    out.addends = *gadget.maxmargin_addends;
  } else {
    out.addends = PayoffAddends{};
    const PlayerView& old_minus = gadget.game.view(Player::kMinus);
    const PlayerView& mv = out.game.view(Player::kMinus);
    for (const auto& [key, value] : gadget.addends.entries()) {
      auto e = mv.Find(to_maxmargin(old_minus.Path(key.second)));
      Check(e.has_value(), ErrorCode::kInvalidTree, "addend lost in conversion");
      out.addends.Add(key.first, *e, value * n);
    }
  }
  out.maxmargin_addends.reset();
  const PlayerView& old_plus = gadget.game.view(Player::kPlus);
  out.root_infoset =
      gadget.root_infoset < 0
          ? -1
          : RootInfosetOf(out.game,
                          remap[old_plus.entry(old_plus.infoset(gadget.root_infoset).entry)
                                    .nodes.front()]);
  return out;
}

std::vector<int> SourceInfosets(const GadgetGame& gadget, const Game& source) {
  const PlayerView& gv = gadget.game.view(Player::kPlus);
  const PlayerView& sv = source.view(Player::kPlus);
  std::vector<int> out(gv.num_infosets(), -1);
  for (int i = 0; i < gv.num_infosets(); ++i) {
    const TrieEntry& e = gv.entry(gv.infoset(i).entry);
    for (NodeId n : e.nodes) {
      NodeId s = gadget.source_node[n];
      if (s < 0) continue;
      const int mapped = sv.node_infoset(s);
      Check(out[i] < 0 || out[i] == mapped, ErrorCode::kInvalidTree,
            "gadget infoset " + gv.PathString(e.nodes.empty() ? 0 : gv.infoset(i).entry) +
                " spans several source infosets");
      out[i] = mapped;
    }
  }
  return out;
}

std::vector<Margin> Margins(const Game& game, const PayoffAddends& addends,
                            const SequenceFormStrategy& refined,
                            const SequenceFormStrategy& blueprint, int infoset,
                            Order order) {
  CheckOrder(order);
  const PlayerView& pv = game.view(Player::kPlus);
  const PlayerView& mv = game.view(Player::kMinus);
  Check(blueprint[pv.infoset(infoset).parent_sequence] > 0,
        ErrorCode::kUnreachableInfoset, "blueprint never reaches the infoset");
  const std::vector<NodeId> generators = InfosetNodes(game, Player::kPlus, infoset);
  const KnowledgeSet knowledge = order.infinite()
                                     ? CommonKnowledgeClosure(game, generators)
                                     : MakeKnowledgeSet(game, generators, order);
  const CounterfactualValues before = ComputeCounterfactualValues(game, addends, blueprint);
  const CounterfactualValues after = ComputeCounterfactualValues(game, addends, refined);
  std::map<int, double> mass;
  for (NodeId h : knowledge.members) {
    mass[mv.node_entry(h)] += game.chance_reach(h) * blueprint[pv.node_sequence(h)];
  }
  std::vector<Margin> out;
  for (const auto& [entry, d] : mass) {
    if (!(d > 0) || !before.defined(entry)) continue;
    Margin m;
    m.minus_entry = entry;
    m.value = (after.raw[entry] - before.raw[entry]) / before.mass[entry];
    m.branch_units = (after.raw[entry] - before.raw[entry]) / d;
    out.push_back(m);
  }
  return out;
}

std::string SequenceName(const PlayerView& view, int sequence) {
  if (sequence == 0) return "(empty)";
  const int infoset = view.sequence_infoset(sequence);
  const DecisionInfoset& info = view.infoset(infoset);
  return view.Label(info.entry) + Unwrap(info.actions[view.sequence_action(sequence)]);
}

std::string WriteGadgetSidecar(const GadgetGame& gadget) {
  Json doc;
  doc["format"] = "klss-gadget";
  doc["version"] = 1;
  doc["kind"] = std::string(GadgetKindName(gadget.kind));
  doc["root_infoset"] = gadget.root_infoset;
  const GadgetProvenance& p = gadget.provenance;
  doc["provenance"] = {{"source_fingerprint", std::to_string(p.source_fingerprint)},
                       {"infoset", p.infoset},
                       {"order", p.order.ToString()},
                       {"reach", p.options.reach},
                       {"merge_transpositions", p.options.merge_transpositions},
                       {"seed", std::to_string(p.options.seed)}};
  Json branches = Json::array();
  for (const GadgetBranch& b : gadget.branches) {
    branches.push_back({{"source_entry", b.source_entry},
                        {"label", b.label},
                        {"mass", b.mass},
                        {"source_mass", b.source_mass},
                        {"alternate", b.alternate},
                        {"gift", b.gift},
                        {"members", b.members},
                        {"nature", b.nature}});
  }
  doc["branches"] = std::move(branches);
  doc["merged_entries"] = gadget.merged_entries;
  doc["source_node"] = gadget.source_node;
  const PlayerView& pv = gadget.game.view(Player::kPlus);
  const PlayerView& mv = gadget.game.view(Player::kMinus);
  Json addends = Json::array();
  for (const auto& [key, value] : gadget.addends.entries()) {
    SequencePath plus;
    if (key.first > 0) plus = pv.Path(pv.sequence_entry(key.first));
    addends.push_back({{"plus", EncodePath(plus)},
                       {"minus", EncodePath(mv.Path(key.second))},
                       {"value", value}});
  }
  doc["addends"] = std::move(addends);
  return doc.dump(1) + "\n";
}

GadgetGame ReadGadget(std::string_view game_text, std::string_view sidecar) {
  Json doc;
  try {
    doc = Json::parse(sidecar);
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("gadget sidecar: ") + e.what());
  }
  try {
    Check(doc.at("format") == "klss-gadget", ErrorCode::kParseError,
          "not a gadget sidecar");
    GadgetGame g;
    g.game = ReadGameText(game_text);
    const std::string kind = doc.at("kind");
    Check(kind == "maxmargin" || kind == "resolve", ErrorCode::kParseError,
          "unknown gadget kind " + kind);
    g.kind = kind == "maxmargin" ? GadgetKind::kMaxmargin : GadgetKind::kResolve;
    g.root_infoset = doc.at("root_infoset");
    const Json& p = doc.at("provenance");
    g.provenance.source_fingerprint = std::stoull(p.at("source_fingerprint").get<std::string>());
    g.provenance.infoset = p.at("infoset");
    g.provenance.order = Order::Parse(p.at("order"));
    g.provenance.options.reach = p.at("reach");
    g.provenance.options.merge_transpositions = p.at("merge_transpositions");
    g.provenance.options.seed = std::stoull(p.at("seed").get<std::string>());
    for (const Json& b : doc.at("branches")) {
      GadgetBranch br;
      br.source_entry = b.at("source_entry");
      br.label = b.at("label");
      br.mass = b.at("mass");
      br.source_mass = b.at("source_mass");
      br.alternate = b.at("alternate");
      br.gift = b.at("gift");
      br.members = b.at("members").get<std::vector<NodeId>>();
      br.nature = b.at("nature");
      g.branches.push_back(std::move(br));
    }
    g.merged_entries = doc.at("merged_entries").get<std::vector<int>>();
    g.source_node = doc.at("source_node").get<std::vector<NodeId>>();
    Check(static_cast<int>(g.source_node.size()) == g.game.num_nodes(),
          ErrorCode::kParseError, "source map size mismatch");
    const PlayerView& pv = g.game.view(Player::kPlus);
    const PlayerView& mv = g.game.view(Player::kMinus);
    for (const Json& a : doc.at("addends")) {
      SequencePath plus = DecodePath(a.at("plus"));
      int seq = 0;
      if (!plus.empty()) {
        auto e = pv.Find(plus);
        Check(e && pv.entry(*e).sequence > 0, ErrorCode::kParseError,
              "addend row is not a plus sequence");
        seq = pv.entry(*e).sequence;
      }
      auto e = mv.Find(DecodePath(a.at("minus")));
      Check(e.has_value(), ErrorCode::kParseError, "addend column not in the game");
      g.addends.Add(seq, *e, a.at("value").get<double>());
    }
    return g;
  } catch (const Json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("gadget sidecar: ") + e.what());
  }
}

}  // namespace klss
