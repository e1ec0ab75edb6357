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

#ifndef KLSS_PAYOFF_H_
#define KLSS_PAYOFF_H_

#include <map>
#include <utility>
#include <vector>

#include "klss/game.h"
#include "klss/strategy.h"

namespace klss {

// Extra bilinear payoff on top of the terminal utilities. Rows are plus
// sequences, columns are minus observation sequences (trie entries); a column
// pays through the minus sequence its entry was reached by. A key stored with
// value 0 still marks its column as part of the game.
class PayoffAddends {
 public:
  using Key = std::pair<int, int>;  // (plus sequence, minus trie entry)

  void Add(int plus_sequence, int minus_entry, double value) {
    entries_[{plus_sequence, minus_entry}] += value;
  }
  double Get(int plus_sequence, int minus_entry) const {
    auto it = entries_.find({plus_sequence, minus_entry});
    return it == entries_.end() ? 0.0 : it->second;
  }
  void Scale(double factor) {
    for (auto& [key, value] : entries_) value *= factor;
  }

  const std::map<Key, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int size() const { return static_cast<int>(entries_.size()); }
  bool top_row_only() const {
    for (const auto& [key, value] : entries_) {
      if (key.first != 0) return false;
    }
    return true;
  }

 private:
  std::map<Key, double> entries_;
};

struct BilinearEntry {
  int plus_sequence;
  int minus_sequence;
  double value;
};

// Merged sparse matrix of terminal payoffs u(z)p(z) and addends, sorted by
// (plus sequence, minus sequence) with duplicate keys combined.
std::vector<BilinearEntry> PayoffMatrix(const Game& game,
                                        const PayoffAddends& addends);

double ExpectedValue(const Game& game, const PayoffAddends& addends,
                     const SequenceFormStrategy& x,
                     const SequenceFormStrategy& y);

// Convenience overload without addends.
double ExpectedValue(const Game& game, const SequenceFormStrategy& x,
                     const SequenceFormStrategy& y);

}  // namespace klss

#endif  // KLSS_PAYOFF_H_
