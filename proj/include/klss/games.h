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

#ifndef KLSS_GAMES_H_
#define KLSS_GAMES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "klss/game.h"

namespace klss {

// Benchmark games. Utilities are from plus's point of view and scaled into
// [-1, 1]. Plus is always the first mover.

Game Kuhn();
Game Leduc(int ranks = 3);

enum class PrizeOrder { kRandom, kIncreasing };
enum class GoofspielScoring { kWinLoss, kPointDifference };
Game Goofspiel(int cards = 4, PrizeOrder order = PrizeOrder::kRandom,
               GoofspielScoring scoring = GoofspielScoring::kWinLoss);

// One die each. Claims are (quantity, face) pairs over both dice, ranked
// quantity-major; the top face is wild.
Game LiarsDice(int faces = 5);

Game AbruptDarkHex(int rows = 2, int cols = 2);

// Nature draws n in 1..N; plus observes floor(n/2), minus floor((n+1)/2).
// Scores n on heads-heads and N-n on tails-tails, mapped from [0, N] to [-1, 1].
Game MatchingPennies(int n);

// Nature tells plus n in 1..N; minus wins on a match.
Game HiddenMatchingPennies(int n);

// The four-branch matching pennies variant with a fifth dead branch.
Game Fig1();

struct CatalogEntry {
  std::string name;
  int nodes = 0;
  int infosets = 0;
  int diameter = 0;
};

// Rows with published structure counts.
const std::vector<CatalogEntry>& StatsCatalog();

// Accepts the catalog names plus mp-N and hidden-mp-N. Throws kUnknownGame.
Game MakeGame(std::string_view name);
std::vector<std::string> CatalogNames();

}  // namespace klss

#endif  // KLSS_GAMES_H_
