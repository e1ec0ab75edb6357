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

#include "klss/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "klss/error.h"
#include "klss/rng.h"

namespace klss {
namespace {

struct Treeplex {
  int num_sequences = 1;
  std::vector<int> parent;
  std::vector<int> first;
  std::vector<int> size;

  explicit Treeplex(const PlayerView& view) : num_sequences(view.num_sequences()) {
    for (const DecisionInfoset& info : view.infosets()) {
      parent.push_back(info.parent_sequence);
      first.push_back(info.first_sequence);
      size.push_back(info.num_actions());
    }
  }
  int num_infosets() const { return static_cast<int>(parent.size()); }
};

// Optimal value of a linear objective over the (floored) treeplex, with the
// optimizer's realization plan written to `plan` when given.
double OptimizeLinear(const Treeplex& t, std::span<const double> objective,
                      bool maximize, std::span<const double> floors,
                      std::vector<double>* plan) {
  std::vector<double> value(objective.begin(), objective.end());
  std::vector<int> choice(t.num_infosets(), 0);
  for (int k = t.num_infosets() - 1; k >= 0; --k) {
    const int b = t.first[k], m = t.size[k];
    int best = 0;
    for (int a = 1; a < m; ++a) {
      if (maximize ? value[b + a] > value[b + best]
                   : value[b + a] < value[b + best]) {
        best = a;
      }
    }
    double total = value[b + best];
    if (!floors.empty()) {
      double mass = 0, floor_part = 0;
      for (int a = 0; a < m; ++a) {
        mass += floors[b + a];
        floor_part += floors[b + a] * value[b + a];
      }
      total = floor_part + (1.0 - mass) * value[b + best];
    }
    choice[k] = best;
    value[t.parent[k]] += total;
  }
  if (plan) {
    plan->assign(t.num_sequences, 0.0);
    (*plan)[0] = 1.0;
    for (int k = 0; k < t.num_infosets(); ++k) {
      const int b = t.first[k], m = t.size[k];
      const double reach = (*plan)[t.parent[k]];
      double mass = 0;
      for (int a = 0; a < m; ++a) {
        double lb = floors.empty() ? 0.0 : floors[b + a];
        (*plan)[b + a] = reach * lb;
        mass += lb;
      }
      (*plan)[b + choice[k]] += reach * (1.0 - mass);
    }
  }
  return value[0];
}

// Regret minimizer over one player's treeplex, maximizing the utilities it
// observes. Floors reparameterize each row as floor + (1 - sum floor) * free.
class TreeplexRegret {
 public:
  TreeplexRegret(const Treeplex& t, std::vector<double> floors,
                 RegretScheme scheme)
      : t_(t),
        floors_(std::move(floors)),
        scheme_(scheme),
        regret_(t.num_sequences, 0.0),
        prediction_(t.num_sequences, 0.0),
        free_(t.num_sequences, 0.0),
        plan_(t.num_sequences, 0.0),
        value_(t.num_sequences, 0.0) {
    if (floors_.empty()) floors_.assign(t.num_sequences, 0.0);
    Refresh();
  }

  void RandomizeRegrets(std::mt19937_64& rng) {
    for (double& r : regret_) r = UnitUniform(rng);
    Refresh();
  }

  const std::vector<double>& plan() const { return plan_; }

  void Observe(std::span<const double> utility) {
    std::copy(utility.begin(), utility.end(), value_.begin());
    for (int k = t_.num_infosets() - 1; k >= 0; --k) {
      const int b = t_.first[k], m = t_.size[k];
      double ev_free = 0, ev_played = 0, mass = 0;
      for (int a = 0; a < m; ++a) mass += floors_[b + a];
      for (int a = 0; a < m; ++a) {
        ev_free += free_[b + a] * value_[b + a];
        ev_played += (floors_[b + a] + (1.0 - mass) * free_[b + a]) * value_[b + a];
      }
      for (int a = 0; a < m; ++a) {
        const double inst = value_[b + a] - ev_free;
        regret_[b + a] = std::max(0.0, regret_[b + a] + inst);
        prediction_[b + a] = inst;
      }
      value_[t_.parent[k]] += ev_played;
    }
    Refresh();
  }

 private:
  void Refresh() {
    const bool predictive = scheme_ == RegretScheme::kPredictiveCfrPlus;
    plan_[0] = 1.0;
    for (int k = 0; k < t_.num_infosets(); ++k) {
      const int b = t_.first[k], m = t_.size[k];
      double total = 0, mass = 0;
      for (int a = 0; a < m; ++a) {
        double w = regret_[b + a] + (predictive ? prediction_[b + a] : 0.0);
        free_[b + a] = w > 0 ? w : 0.0;
        total += free_[b + a];
        mass += floors_[b + a];
      }
      for (int a = 0; a < m; ++a) {
        free_[b + a] = total > 0 ? free_[b + a] / total : 1.0 / m;
      }
      const double reach = plan_[t_.parent[k]];
      for (int a = 0; a < m; ++a) {
        plan_[b + a] = reach * (floors_[b + a] + (1.0 - mass) * free_[b + a]);
      }
    }
  }

  const Treeplex& t_;
  std::vector<double> floors_;
  RegretScheme scheme_;
  std::vector<double> regret_;
  std::vector<double> prediction_;
  std::vector<double> free_;
  std::vector<double> plan_;
  std::vector<double> value_;
};

void PlusGradient(std::span<const BilinearEntry> m, std::span<const double> y,
                  std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const BilinearEntry& e : m) out[e.plus_sequence] += e.value * y[e.minus_sequence];
}

void MinusGradient(std::span<const BilinearEntry> m, std::span<const double> x,
                   std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const BilinearEntry& e : m) out[e.minus_sequence] += e.value * x[e.plus_sequence];
}

double Bilinear(std::span<const BilinearEntry> m, std::span<const double> x,
                std::span<const double> y) {
  double total = 0;
  for (const BilinearEntry& e : m) {
    total += e.value * x[e.plus_sequence] * y[e.minus_sequence];
  }
  return total;
}

}  // namespace

std::vector<double> SequenceFloors(const Game& game, Player player,
                                   const Restriction& restriction) {
  const PlayerView& view = game.view(player);
  std::vector<double> floors(view.num_sequences(), 0.0);
  if (!restriction.active()) return floors;
  Check(restriction.epsilon >= 0 && restriction.epsilon <= 1,
        ErrorCode::kBadParameter, "epsilon outside [0,1]");
  std::vector<bool> exempt(view.num_infosets(), false);
  for (int i : restriction.exempt) {
    if (i >= 0 && i < view.num_infosets()) exempt[i] = true;
  }
  for (int i = 0; i < view.num_infosets(); ++i) {
    if (exempt[i]) continue;
    const DecisionInfoset& info = view.infoset(i);
    for (int a = 0; a < info.num_actions(); ++a) {
      if (restriction.kind == Restriction::Kind::kUniform) {
        floors[info.first_sequence + a] = restriction.epsilon / info.num_actions();
      } else if (info.actions[a] == restriction.action) {
        floors[info.first_sequence + a] = restriction.epsilon;
      }
    }
  }
  return floors;
}

SolveResult Solve(const Game& game, const PayoffAddends& addends,
                  const SolverConfig& config) {
  Check(config.tolerance > 0, ErrorCode::kBadParameter, "tolerance must be > 0");
  const Treeplex plus_t(game.view(Player::kPlus));
  const Treeplex minus_t(game.view(Player::kMinus));
  const std::vector<BilinearEntry> exact = PayoffMatrix(game, addends);
  std::vector<BilinearEntry> played = exact;
  std::mt19937_64 rng = Substream(config.seed, "solver");
  if (config.perturbation > 0) {
    for (BilinearEntry& e : played) {
      e.value += config.perturbation * (2.0 * UnitUniform(rng) - 1.0);
    }
  }
  const std::vector<double> plus_floors =
      SequenceFloors(game, Player::kPlus, config.plus_restriction);
  const std::vector<double> minus_floors =
      SequenceFloors(game, Player::kMinus, config.minus_restriction);
  TreeplexRegret plus(plus_t, plus_floors, config.scheme);
  TreeplexRegret minus(minus_t, minus_floors, config.scheme);
  if (config.random_start) {
    plus.RandomizeRegrets(rng);
    minus.RandomizeRegrets(rng);
  }

  std::vector<double> gx(plus_t.num_sequences), gy(minus_t.num_sequences);
  std::vector<double> avg_x(plus_t.num_sequences, 0.0);
  std::vector<double> avg_y(minus_t.num_sequences, 0.0);
  double weight_total = 0;

  SolveResult result;
  result.x.player = Player::kPlus;
  result.y.player = Player::kMinus;
  auto measure = [&](int iteration) {
    result.x.values = avg_x;
    result.y.values = avg_y;
    for (double& v : result.x.values) v /= weight_total;
    for (double& v : result.y.values) v /= weight_total;
    PlusGradient(exact, result.y.values, gx);
    result.best_plus = OptimizeLinear(plus_t, gx, true, plus_floors, nullptr);
    MinusGradient(exact, result.x.values, gy);
    result.best_minus = OptimizeLinear(minus_t, gy, false, minus_floors, nullptr);
    result.value = Bilinear(exact, result.x.values, result.y.values);
    result.iterations = iteration;
    if (config.trace) config.trace(iteration, result.gap());
    return result.gap() <= config.tolerance;
  };

  const int check_every = std::max(1, config.check_every);
  for (int t = 1; t <= config.max_iterations; ++t) {
    PlusGradient(played, minus.plan(), gx);
    plus.Observe(gx);
    MinusGradient(played, plus.plan(), gy);
    for (double& g : gy) g = -g;
    minus.Observe(gy);
    const double w = std::pow(static_cast<double>(t), config.averaging_power);
    const auto& xp = plus.plan();
    const auto& yp = minus.plan();
    for (std::size_t i = 0; i < avg_x.size(); ++i) avg_x[i] += w * xp[i];
    for (std::size_t i = 0; i < avg_y.size(); ++i) avg_y[i] += w * yp[i];
    weight_total += w;
    if (t % check_every == 0 || t == config.max_iterations) {
      if (measure(t)) {
        result.converged = true;
        return result;
      }
    }
  }
  if (config.max_iterations <= 0) {
    avg_x = plus.plan();
    avg_y = minus.plan();
    weight_total = 1.0;
    result.converged = measure(0);
  }
  return result;
}

void RequireConverged(const SolveResult& result) {
  if (!result.converged) throw ConvergenceError(result.gap(), result.iterations);
}

BestResponseResult BestResponse(const Game& game, const PayoffAddends& addends,
                                const SequenceFormStrategy& opponent,
                                Player responder,
                                std::span<const double> floors) {
  Check(opponent.player == Opponent(responder), ErrorCode::kDimensionMismatch,
        "opponent strategy belongs to the responder");
  Check(opponent.size() == game.view(opponent.player).num_sequences(),
        ErrorCode::kDimensionMismatch, "opponent strategy size mismatch");
  const std::vector<BilinearEntry> m = PayoffMatrix(game, addends);
  const Treeplex t(game.view(responder));
  std::vector<double> g(t.num_sequences);
  if (responder == Player::kPlus) {
    PlusGradient(m, opponent.values, g);
  } else {
    MinusGradient(m, opponent.values, g);
  }
  BestResponseResult out;
  out.strategy.player = responder;
  out.value = OptimizeLinear(t, g, responder == Player::kPlus, floors,
                             &out.strategy.values);
  return out;
}

CounterfactualValues ComputeCounterfactualValues(const Game& game,
                                                 const PayoffAddends& addends,
                                                 const SequenceFormStrategy& x,
                                                 CbvOrientation orientation) {
  const PlayerView& pv = game.view(Player::kPlus);
  const PlayerView& mv = game.view(Player::kMinus);
  Check(x.player == Player::kPlus && x.size() == pv.num_sequences(),
        ErrorCode::kDimensionMismatch, "plus strategy size mismatch");
  const int n = mv.num_entries();
  CounterfactualValues cv;
  cv.mass.assign(n, 0.0);
  cv.raw.assign(n, 0.0);
  for (int e = 0; e < n; ++e) {
    for (NodeId h : mv.entry(e).nodes) {
      cv.mass[e] += game.chance_reach(h) * x[pv.node_sequence(h)];
    }
  }
  for (NodeId z : game.terminals()) {
    cv.raw[mv.node_entry(z)] += game.node(z).utility * game.chance_reach(z) *
                                x[pv.node_sequence(z)];
  }
  for (const auto& [key, value] : addends.entries()) {
    cv.raw[key.second] += value * x[key.first];
  }
  const bool take_min = orientation == CbvOrientation::kMin;
  for (int e = n - 1; e >= 0; --e) {
    const TrieEntry& entry = mv.entry(e);
    double best = 0;
    bool any_action = false;
    for (int c : entry.children) {
      if (mv.entry(c).is_action()) {
        double v = cv.raw[c];
        if (!any_action || (take_min ? v < best : v > best)) best = v;
        any_action = true;
      } else {
        cv.raw[e] += cv.raw[c];
      }
    }
    if (any_action) cv.raw[e] += best;
    if (entry.is_action()) cv.mass[e] = cv.mass[entry.parent];
  }
  return cv;
}

ValueEstimate GameValue(const Game& game) {
  static std::mutex mu;
  static std::map<std::uint64_t, ValueEstimate> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(game.fingerprint());
    if (it != cache.end()) return it->second;
  }
  SolverConfig config;
  config.tolerance = 1e-9;
  config.max_iterations = 200000;
  SolveResult r = Solve(game, PayoffAddends{}, config);
  if (r.gap() > 1e-8) {
    throw ConvergenceError(r.gap(), r.iterations);
  }
  ValueEstimate v{0.5 * (r.best_plus + r.best_minus), r.gap()};
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(game.fingerprint(), v);
  return v;
}

double PlusExploitability(const Game& game, const SequenceFormStrategy& x) {
  const double v = GameValue(game).value;
  return v - BestResponse(game, PayoffAddends{}, x, Player::kMinus).value;
}

double MinusExploitability(const Game& game, const SequenceFormStrategy& y) {
  const double v = GameValue(game).value;
  return BestResponse(game, PayoffAddends{}, y, Player::kPlus).value - v;
}

std::vector<SequenceFormStrategy> SampleEquilibria(const Game& game, int count,
                                                   std::uint64_t seed,
                                                   double tolerance) {
  Check(count >= 1, ErrorCode::kBadParameter, "count must be >= 1");
  std::vector<SequenceFormStrategy> out;
  for (std::uint64_t attempt = 0; static_cast<int>(out.size()) < count;
       ++attempt) {
    Check(attempt < static_cast<std::uint64_t>(count) * 4 + 8,
          ErrorCode::kDidNotConverge, "too many rejected equilibrium samples");
    SolverConfig config;
    config.tolerance = tolerance / 4;
    config.seed = seed * 1000003ull + attempt;
    config.random_start = true;
    config.perturbation = 1e-9;
    SolveResult r = Solve(game, PayoffAddends{}, config);
    if (!r.converged) continue;
    if (MinusExploitability(game, r.y) <= tolerance) out.push_back(r.y);
  }
  return out;
}

}  // namespace klss
