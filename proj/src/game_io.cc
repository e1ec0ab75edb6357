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

#include "klss/game_io.h"

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "klss/error.h"

namespace klss {
namespace {

using nlohmann::ordered_json;

NodeKind ParseKind(const std::string& s) {
  if (s == "nature") return NodeKind::kNature;
  if (s == "plus") return NodeKind::kPlus;
  if (s == "minus") return NodeKind::kMinus;
  if (s == "terminal") return NodeKind::kTerminal;
  Fail(ErrorCode::kParseError, "unknown player '" + s + "'");
}

ordered_json WriteNode(const Game& game, NodeId id) {
  const NodeSpec& s = game.node(id);
  ordered_json j;
  j["player"] = std::string(NodeKindName(s.kind));
  j["obs_plus"] = s.obs[0];
  j["obs_minus"] = s.obs[1];
  if (s.kind == NodeKind::kTerminal) {
    j["utility"] = s.utility;
    return j;
  }
  ordered_json actions = ordered_json::array();
  for (std::size_t a = 0; a < s.children.size(); ++a) {
    ordered_json edge;
    edge["label"] = s.actions[a];
    edge["child"] = WriteNode(game, s.children[a]);
    actions.push_back(std::move(edge));
  }
  j["actions"] = std::move(actions);
  if (s.kind == NodeKind::kNature) j["probs"] = s.probs;
  return j;
}

NodeId ReadNode(const ordered_json& j, GameDescription& desc) {
  NodeSpec spec;
  spec.kind = ParseKind(j.at("player").get<std::string>());
  spec.obs[0] = j.value("obs_plus", "");
  spec.obs[1] = j.value("obs_minus", "");
  if (spec.kind == NodeKind::kTerminal) {
    spec.utility = j.at("utility").get<double>();
    return desc.Add(std::move(spec));
  }
  if (spec.kind == NodeKind::kNature) {
    spec.probs = j.at("probs").get<std::vector<double>>();
  }
  NodeId id = desc.Add(std::move(spec));
  for (const auto& edge : j.at("actions")) {
    NodeId child = ReadNode(edge.at("child"), desc);
    desc.nodes[id].actions.push_back(edge.at("label").get<std::string>());
    desc.nodes[id].children.push_back(child);
  }
  return id;
}

}  // namespace

std::string EncodeToken(const Token& token) {
  return (token.is_action() ? "a:" : "o:") + token.text;
}

Token DecodeToken(std::string_view text) {
  Check(text.size() >= 2 && text[1] == ':' && (text[0] == 'a' || text[0] == 'o'),
        ErrorCode::kParseError, "bad token '" + std::string(text) + "'");
  std::string body(text.substr(2));
  return text[0] == 'a' ? Token::Act(std::move(body))
                        : Token::Obs(std::move(body));
}

std::string WriteGameText(const Game& game) {
  ordered_json doc;
  doc["format"] = "klss-game";
  doc["version"] = 1;
  doc["root"] = WriteNode(game, game.root());
  const char* keys[2] = {"phantom_plus", "phantom_minus"};
  for (int p = 0; p < 2; ++p) {
    ordered_json paths = ordered_json::array();
    for (const SequencePath& path : game.description().phantom[p]) {
      ordered_json tokens = ordered_json::array();
      for (const Token& t : path) tokens.push_back(EncodeToken(t));
      paths.push_back(std::move(tokens));
    }
    doc[keys[p]] = std::move(paths);
  }
  return doc.dump(1) + "\n";
}

GameDescription ReadGameDescription(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParseError, e.what());
  }
  try {
    Check(doc.value("format", "") == "klss-game", ErrorCode::kParseError,
          "not a klss-game document");
    GameDescription desc;
    desc.root = ReadNode(doc.at("root"), desc);
    const char* keys[2] = {"phantom_plus", "phantom_minus"};
    for (int p = 0; p < 2; ++p) {
      if (!doc.contains(keys[p])) continue;
      for (const auto& path : doc[keys[p]]) {
        SequencePath seq;
        for (const auto& t : path) seq.push_back(DecodeToken(t.get<std::string>()));
        desc.phantom[p].push_back(std::move(seq));
      }
    }
    return desc;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParseError, e.what());
  }
}

Game ReadGameText(std::string_view text) {
  return Game::Build(ReadGameDescription(text));
}

}  // namespace klss
