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

#ifndef KLSS_GAME_IO_H_
#define KLSS_GAME_IO_H_

#include <string>
#include <string_view>

#include "klss/game.h"

namespace klss {

// Game text format: a JSON document
//
//   {"format": "klss-game", "version": 1,
//    "root": NODE,
//    "phantom_plus": [PATH...], "phantom_minus": [PATH...]}
//
// where NODE is
//
//   {"player": "nature"|"plus"|"minus"|"terminal",
//    "obs_plus": STRING, "obs_minus": STRING,
//    "actions": [{"label": STRING, "child": NODE}...],   // non-terminal
//    "probs": [NUMBER...],                               // nature
//    "utility": NUMBER}                                  // terminal
//
// and PATH is an array of tokens, "o:<text>" for observations and
// "a:<label>" for actions. Numbers are written in shortest round-trip form,
// so write(read(text)) reproduces text byte for byte.
std::string WriteGameText(const Game& game);
GameDescription ReadGameDescription(std::string_view text);
Game ReadGameText(std::string_view text);

std::string EncodeToken(const Token& token);
Token DecodeToken(std::string_view text);

}  // namespace klss

#endif  // KLSS_GAME_IO_H_
