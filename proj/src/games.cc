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

#include "klss/games.h"

#include <algorithm>
#include <array>
#include <optional>
#include <bit>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "klss/error.h"

namespace klss {
namespace {

NodeSpec Nature(std::string obs_plus = "", std::string obs_minus = "") {
  NodeSpec s;
  s.kind = NodeKind::kNature;
  s.obs = {std::move(obs_plus), std::move(obs_minus)};
  return s;
}

NodeSpec Decision(Player p, std::string obs_plus = "",
                  std::string obs_minus = "") {
  NodeSpec s;
  s.kind = p == Player::kPlus ? NodeKind::kPlus : NodeKind::kMinus;
  s.obs = {std::move(obs_plus), std::move(obs_minus)};
  return s;
}

NodeSpec Terminal(double utility, std::string obs_plus = "",
                  std::string obs_minus = "") {
  NodeSpec s;
  s.kind = NodeKind::kTerminal;
  s.utility = utility;
  s.obs = {std::move(obs_plus), std::move(obs_minus)};
  return s;
}

Player Mover(int index) { return index == 0 ? Player::kPlus : Player::kMinus; }

// Kuhn ----------------------------------------------------------------------

void KuhnBetting(GameDescription& d, NodeId node, const std::string& history,
                 int card0, int card1) {
  const int mover = static_cast<int>(history.size() % 2);
  for (char a : {'p', 'b'}) {
    const std::string h = history + a;
    const int showdown = card0 > card1 ? 1 : -1;
    std::optional<double> payoff;
    if (h == "pp") payoff = showdown;
    if (h == "bb" || h == "pbb") payoff = 2 * showdown;
    if (h == "bp") payoff = 1;
    if (h == "pbp") payoff = -1;
    if (payoff) {
      d.AddChild(node, std::string(1, a), Terminal(*payoff / 2.0, h, h));
    } else {
      NodeId child = d.AddChild(node, std::string(1, a),
                                Decision(Mover(1 - mover), h, h));
      KuhnBetting(d, child, h, card0, card1);
    }
  }
}

// Leduc ---------------------------------------------------------------------

struct LeducState {
  int card[2] = {0, 0};
  int board = -1;
  int round = 0;
  int contrib[2] = {1, 1};
  int raises = 0;
  int mover = 0;
  int moves_in_round = 0;
};

class LeducBuilder {
 public:
  LeducBuilder(GameDescription& d, int ranks)
      : d_(d), ranks_(ranks), scale_(1.0 + 2 * 2 + 2 * 4) {}

  std::string CardName(int card) const {
    static constexpr const char* kRanks = "JQKA23456789T";
    std::string name(1, kRanks[card / 2 % 13]);
    if (card / 2 >= 13) name += std::to_string(card / 2);
    return name + (card % 2 == 0 ? "s" : "h");
  }

  void Build() {
    const int cards = 2 * ranks_;
    NodeId root = d_.Add(Nature());
    for (int c0 = 0; c0 < cards; ++c0) {
      NodeId deal = d_.AddChild(root, CardName(c0), Nature(CardName(c0), ""),
                                1.0 / cards);
      for (int c1 = 0; c1 < cards; ++c1) {
        if (c1 == c0) continue;
        LeducState s;
        s.card[0] = c0;
        s.card[1] = c1;
        NodeId start = d_.AddChild(deal, CardName(c1),
                                   Decision(Player::kPlus, "", CardName(c1)),
                                   1.0 / (cards - 1));
        Betting(start, s);
      }
    }
  }

 private:
  double Showdown(const LeducState& s) const {
    auto strength = [&](int p) {
      int rank = s.card[p] / 2;
      return rank == s.board / 2 ? 100 + rank : rank;
    };
    int a = strength(0), b = strength(1);
    if (a == b) return 0.0;
    return a > b ? s.contrib[1] : -s.contrib[0];
  }

  void EndRound(NodeId parent, const std::string& label, const LeducState& s) {
    if (s.round == 1) {
      d_.AddChild(parent, label, Terminal(Showdown(s) / scale_, label, label));
      return;
    }
    NodeId deal = d_.AddChild(parent, label, Nature(label, label));
    const int cards = 2 * ranks_;
    for (int c = 0; c < cards; ++c) {
      if (c == s.card[0] || c == s.card[1]) continue;
      LeducState t = s;
      t.board = c;
      t.round = 1;
      t.raises = 0;
      t.mover = 0;
      t.moves_in_round = 0;
      NodeId next = d_.AddChild(
          deal, CardName(c),
          Decision(Player::kPlus, CardName(c), CardName(c)), 1.0 / (cards - 2));
      Betting(next, t);
    }
  }

  void Betting(NodeId node, const LeducState& s) {
    const int me = s.mover, other = 1 - me;
    const bool facing = s.contrib[other] > s.contrib[me];
    if (facing) {
      double u = me == 0 ? -s.contrib[0] : s.contrib[1];
      d_.AddChild(node, "f", Terminal(u / scale_, "f", "f"));
    }
    {
      LeducState t = s;
      t.contrib[me] = s.contrib[other];
      t.moves_in_round++;
      if (facing || s.moves_in_round > 0) {
        EndRound(node, "c", t);
      } else {
        t.mover = other;
        NodeId child = d_.AddChild(node, "c", Decision(Mover(other), "c", "c"));
        Betting(child, t);
      }
    }
    if (s.raises < 2) {
      LeducState t = s;
      t.contrib[me] = s.contrib[other] + (s.round == 0 ? 2 : 4);
      t.raises++;
      t.moves_in_round++;
      t.mover = other;
      NodeId child = d_.AddChild(node, "r", Decision(Mover(other), "r", "r"));
      Betting(child, t);
    }
  }

  GameDescription& d_;
  int ranks_;
  double scale_;
};

// Goofspiel -----------------------------------------------------------------

class GoofspielBuilder {
 public:
  GoofspielBuilder(GameDescription& d, int cards, PrizeOrder order,
                   GoofspielScoring scoring)
      : d_(d), k_(cards), order_(order), scoring_(scoring) {}

  void Build() {
    const unsigned full = (1u << k_) - 1;
    State s{full, full, full, 0, 0, 0};
    if (order_ == PrizeOrder::kRandom) {
      NodeId root = d_.Add(Nature());
      DealPrize(root, s);
    } else {
      s.prizes &= ~1u;
      NodeId root = d_.Add(Decision(Player::kPlus));
      PlusBid(root, s, 1);
    }
  }

 private:
  // Scores are kept doubled so split prizes stay integral.
  struct State {
    unsigned hand0, hand1, prizes;
    int round;
    int score0, score1;
  };

  void DealPrize(NodeId nature, const State& s) {
    const int left = std::popcount(s.prizes);
    for (int v = 1; v <= k_; ++v) {
      if (!(s.prizes & (1u << (v - 1)))) continue;
      State t = s;
      t.prizes &= ~(1u << (v - 1));
      std::string obs = "p" + std::to_string(v);
      NodeId node = d_.AddChild(nature, obs, Decision(Player::kPlus, obs, obs),
                                1.0 / left);
      PlusBid(node, t, v);
    }
  }

  void PlusBid(NodeId node, const State& s, int prize) {
    for (int b = 1; b <= k_; ++b) {
      if (!(s.hand0 & (1u << (b - 1)))) continue;
      State t = s;
      t.hand0 &= ~(1u << (b - 1));
      NodeId child = d_.AddChild(node, "b" + std::to_string(b),
                                 Decision(Player::kMinus));
      MinusBid(child, t, prize, b);
    }
  }

  static std::string Outcome(int bid0, int bid1) {
    return bid0 > bid1 ? "won+" : bid0 < bid1 ? "won-" : "tie";
  }

  static void Score(State& s, int prize, int bid0, int bid1) {
    if (bid0 > bid1) s.score0 += 2 * prize;
    if (bid1 > bid0) s.score1 += 2 * prize;
    if (bid0 == bid1) {
      s.score0 += prize;
      s.score1 += prize;
    }
  }

  double Utility(const State& s) const {
    if (scoring_ == GoofspielScoring::kWinLoss) {
      return s.score0 > s.score1 ? 1.0 : s.score0 < s.score1 ? -1.0 : 0.0;
    }
    return (s.score0 - s.score1) / 2.0 / (k_ * (k_ + 1) / 2.0);
  }

  void MinusBid(NodeId node, const State& s, int prize, int bid0) {
    for (int b = 1; b <= k_; ++b) {
      if (!(s.hand1 & (1u << (b - 1)))) continue;
      State t = s;
      t.hand1 &= ~(1u << (b - 1));
      Score(t, prize, bid0, b);
      t.round++;
      const std::string label = "b" + std::to_string(b);
      const std::string out = Outcome(bid0, b);
      if (t.round == k_ - 1) {
        // The last round plays itself.
        int last0 = std::countr_zero(t.hand0) + 1;
        int last1 = std::countr_zero(t.hand1) + 1;
        int last_prize = std::countr_zero(t.prizes) + 1;
        Score(t, last_prize, last0, last1);
        d_.AddChild(node, label, Terminal(Utility(t), out, out));
      } else if (order_ == PrizeOrder::kRandom) {
        NodeId nature = d_.AddChild(node, label, Nature(out, out));
        DealPrize(nature, t);
      } else {
        int next_prize = t.round + 1;
        t.prizes &= ~(1u << (next_prize - 1));
        NodeId child =
            d_.AddChild(node, label, Decision(Player::kPlus, out, out));
        PlusBid(child, t, next_prize);
      }
    }
  }

  GameDescription& d_;
  int k_;
  PrizeOrder order_;
  GoofspielScoring scoring_;
};

// Liar's dice ---------------------------------------------------------------

void LiarsBidding(GameDescription& d, NodeId node, int last, int mover,
                  int faces, int die0, int die1) {
  auto label = [&](int bid) {
    return std::to_string(bid / faces + 1) + "x" + std::to_string(bid % faces + 1);
  };
  for (int bid = last + 1; bid < 2 * faces; ++bid) {
    std::string l = label(bid);
    NodeId child = d.AddChild(node, l, Decision(Mover(1 - mover), l, l));
    LiarsBidding(d, child, bid, 1 - mover, faces, die0, die1);
  }
  if (last >= 0) {
    const int quantity = last / faces + 1, face = last % faces + 1;
    auto matches = [&](int die) { return die == face || die == faces; };
    const int count = matches(die0) + matches(die1);
    const int bidder = 1 - mover;
    const int winner = count >= quantity ? bidder : mover;
    d.AddChild(node, "liar", Terminal(winner == 0 ? 1.0 : -1.0, "liar", "liar"));
  }
}

// Abrupt dark hex -------------------------------------------------------------

class DarkHexBuilder {
 public:
  DarkHexBuilder(GameDescription& d, int rows, int cols)
      : d_(d), rows_(rows), cols_(cols) {}

  void Build() {
    std::vector<int> board(rows_ * cols_, -1);
    std::vector<unsigned> known = {0u, 0u};
    NodeId root = d_.Add(Decision(Player::kPlus));
    Expand(root, board, known, 0);
  }

 private:
  std::string CellName(int cell) const {
    return std::string(1, static_cast<char>('a' + cell % cols_)) +
           std::to_string(cell / cols_ + 1);
  }

  // Plus joins the first and last rows, minus the first and last columns.
  bool Connected(const std::vector<int>& board, int p) const {
    std::vector<int> stack;
    std::vector<bool> seen(board.size(), false);
    for (int c = 0; c < rows_ * cols_; ++c) {
      bool start = p == 0 ? c / cols_ == 0 : c % cols_ == 0;
      if (board[c] == p && start) {
        stack.push_back(c);
        seen[c] = true;
      }
    }
    static constexpr int kDr[6] = {-1, 1, 0, 0, -1, 1};
    static constexpr int kDc[6] = {0, 0, -1, 1, 1, -1};
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      int r = c / cols_, col = c % cols_;
      if (p == 0 ? r == rows_ - 1 : col == cols_ - 1) return true;
      for (int k = 0; k < 6; ++k) {
        int rr = r + kDr[k], cc = col + kDc[k];
        if (rr < 0 || rr >= rows_ || cc < 0 || cc >= cols_) continue;
        int n = rr * cols_ + cc;
        if (board[n] == p && !seen[n]) {
          seen[n] = true;
          stack.push_back(n);
        }
      }
    }
    return false;
  }

  void Expand(NodeId node, const std::vector<int>& board,
              const std::vector<unsigned>& known, int mover) {
    for (int cell = 0; cell < rows_ * cols_; ++cell) {
      if (known[mover] & (1u << cell)) continue;
      std::vector<int> next = board;
      std::vector<unsigned> k = known;
      k[mover] |= 1u << cell;
      std::string result = "x";
      if (board[cell] < 0) {
        next[cell] = mover;
        result = "o";
      }
      std::array<std::string, 2> obs;
      obs[mover] = result;
      obs[1 - mover] = "t";
      const bool won = Connected(next, mover);
      const bool full = std::none_of(next.begin(), next.end(),
                                     [](int v) { return v < 0; });
      if (won || full) {
        // Both players learn that the game is over.
        double u = won ? (mover == 0 ? 1.0 : -1.0) : 0.0;
        std::string end = u > 0 ? "won+" : u < 0 ? "won-" : "draw";
        d_.AddChild(node, CellName(cell), Terminal(u, end, end));
      } else {
        NodeId child = d_.AddChild(node, CellName(cell),
                                   Decision(Mover(1 - mover), obs[0], obs[1]));
        Expand(child, next, k, 1 - mover);
      }
    }
  }

  GameDescription& d_;
  int rows_, cols_;
};

std::optional<int> ParseSuffix(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string_view rest = name.substr(prefix.size());
  int value = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Game Kuhn() {
  static constexpr const char* kCards[3] = {"J", "Q", "K"};
  GameDescription d;
  NodeId root = d.Add(Nature());
  for (int c0 = 0; c0 < 3; ++c0) {
    NodeId deal = d.AddChild(root, kCards[c0], Nature(kCards[c0], ""), 1.0 / 3);
    for (int c1 = 0; c1 < 3; ++c1) {
      if (c1 == c0) continue;
      NodeId start = d.AddChild(deal, kCards[c1],
                                Decision(Player::kPlus, "", kCards[c1]), 0.5);
      KuhnBetting(d, start, "", c0, c1);
    }
  }
  return Game::Build(std::move(d));
}

Game Leduc(int ranks) {
  Check(ranks >= 2 && ranks <= 13, ErrorCode::kBadParameter,
        "leduc needs 2..13 ranks");
  GameDescription d;
  LeducBuilder(d, ranks).Build();
  return Game::Build(std::move(d));
}

Game Goofspiel(int cards, PrizeOrder order, GoofspielScoring scoring) {
  Check(cards >= 2 && cards <= 8, ErrorCode::kBadParameter,
        "goofspiel needs 2..8 cards");
  GameDescription d;
  GoofspielBuilder(d, cards, order, scoring).Build();
  return Game::Build(std::move(d));
}

Game LiarsDice(int faces) {
  Check(faces >= 2 && faces <= 9, ErrorCode::kBadParameter,
        "liar's dice needs 2..9 faces");
  GameDescription d;
  NodeId root = d.Add(Nature());
  for (int d0 = 1; d0 <= faces; ++d0) {
    NodeId roll = d.AddChild(root, std::to_string(d0),
                             Nature(std::to_string(d0), ""), 1.0 / faces);
    for (int d1 = 1; d1 <= faces; ++d1) {
      NodeId start = d.AddChild(roll, std::to_string(d1),
                                Decision(Player::kPlus, "", std::to_string(d1)),
                                1.0 / faces);
      LiarsBidding(d, start, -1, 0, faces, d0, d1);
    }
  }
  return Game::Build(std::move(d));
}

Game AbruptDarkHex(int rows, int cols) {
  Check(rows == 2 && cols == 2, ErrorCode::kBadParameter,
        "only the 2x2 board is supported");
  GameDescription d;
  DarkHexBuilder(d, rows, cols).Build();
  return Game::Build(std::move(d));
}

Game MatchingPennies(int n) {
  Check(n >= 2, ErrorCode::kBadParameter, "matching pennies needs N >= 2");
  GameDescription d;
  NodeId root = d.Add(Nature());
  for (int k = 1; k <= n; ++k) {
    NodeId plus = d.AddChild(
        root, std::to_string(k),
        Decision(Player::kPlus, std::to_string(k / 2), std::to_string((k + 1) / 2)),
        1.0 / n);
    for (const char* a : {"h", "t"}) {
      NodeId minus = d.AddChild(plus, a, Decision(Player::kMinus));
      for (const char* b : {"h", "t"}) {
        double u = 0;
        if (a[0] == 'h' && b[0] == 'h') u = k;
        if (a[0] == 't' && b[0] == 't') u = n - k;
        // Raw scores span [0, N]; map that range onto [-1, 1].
        d.AddChild(minus, b, Terminal(2 * u / n - 1));
      }
    }
  }
  return Game::Build(std::move(d));
}

Game HiddenMatchingPennies(int n) {
  Check(n >= 2, ErrorCode::kBadParameter, "hidden matching pennies needs N >= 2");
  GameDescription d;
  NodeId root = d.Add(Nature());
  for (int k = 1; k <= n; ++k) {
    NodeId plus = d.AddChild(root, std::to_string(k),
                             Decision(Player::kPlus, std::to_string(k), ""),
                             1.0 / n);
    for (const char* a : {"h", "t"}) {
      NodeId minus = d.AddChild(plus, a, Decision(Player::kMinus));
      for (const char* b : {"h", "t"}) {
        d.AddChild(minus, b, Terminal(a[0] == b[0] ? -1.0 : 1.0));
      }
    }
  }
  return Game::Build(std::move(d));
}

Game Fig1() {
  GameDescription d;
  NodeId root = d.Add(Nature());
  const char* plus_obs[4] = {"R1", "R1", "R3", "R3"};
  const char* minus_top[4] = {"C0'", "C2'", "C2'", "C4'"};
  const char* minus_low[4] = {"C0", "C2", "C2", "C4"};
  for (int k = 1; k <= 4; ++k) {
    NodeId plus = d.AddChild(root, std::to_string(k),
                             Decision(Player::kPlus, plus_obs[k - 1],
                                      minus_top[k - 1]),
                             0.2);
    for (const char* a : {"h", "t"}) {
      NodeId minus =
          d.AddChild(plus, a, Decision(Player::kMinus, "", minus_low[k - 1]));
      for (const char* b : {"h", "t"}) {
        double u = 0;
        if (a[0] == 'h' && b[0] == 'h') u = k;
        if (a[0] == 't' && b[0] == 't') u = 5 - k;
        d.AddChild(minus, b, Terminal(u));
      }
    }
  }
  d.AddChild(root, "e", Terminal(0.0, "Re", "Ce'"), 0.2);
  return Game::Build(std::move(d));
}

const std::vector<CatalogEntry>& StatsCatalog() {
  static const std::vector<CatalogEntry> kRows = {
      {"dark-hex-2x2", 471, 94, 13},   {"goofspiel4-random", 26773, 3608, 4},
      {"goofspiel4-inc", 1077, 162, 4}, {"kuhn", 58, 12, 3},
      {"leduc3", 9457, 936, 3},         {"liars-dice5", 51181, 5120, 2},
      {"mp-100", 701, 101, 99},
  };
  return kRows;
}

std::vector<std::string> CatalogNames() {
  return {"kuhn",           "leduc3",       "goofspiel4-random",
          "goofspiel4-inc", "liars-dice5",  "dark-hex-2x2",
          "mp-100",         "hidden-mp-100", "fig1"};
}

Game MakeGame(std::string_view name) {
  if (name == "kuhn") return Kuhn();
  if (name == "fig1") return Fig1();
  if (name == "dark-hex-2x2") return AbruptDarkHex(2, 2);
  if (auto n = ParseSuffix(name, "hidden-mp-")) return HiddenMatchingPennies(*n);
  if (auto n = ParseSuffix(name, "mp-")) return MatchingPennies(*n);
  if (auto n = ParseSuffix(name, "leduc")) return Leduc(*n);
  if (auto n = ParseSuffix(name, "liars-dice")) return LiarsDice(*n);
  for (auto [suffix, order] : {std::pair{"-random", PrizeOrder::kRandom},
                               std::pair{"-inc", PrizeOrder::kIncreasing}}) {
    std::string_view s(suffix);
    if (name.size() > s.size() && name.substr(name.size() - s.size()) == s) {
      if (auto n = ParseSuffix(name.substr(0, name.size() - s.size()),
                               "goofspiel")) {
        return Goofspiel(*n, order);
      }
    }
  }
  Fail(ErrorCode::kUnknownGame, "unknown game '" + std::string(name) + "'");
}

}  // namespace klss
