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

// klss: command-line front end.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "klss/equilibrium.h"
#include "klss/error.h"
#include "klss/game_io.h"
#include "klss/games.h"
#include "klss/harness.h"
#include "klss/knowledge.h"
#include "klss/payoff.h"
#include "klss/safety.h"
#include "klss/stats.h"
#include "klss/subgame.h"

namespace {

using json = nlohmann::json;
using namespace klss;

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kNoConvergence = 3, kViolation = 4 };

struct RunConfig {
  std::uint64_t seed = 0;
  std::optional<double> tolerance;
  int iterations = 1000000;
  double epsilon = 0.25;
  std::string k = "1";
  bool reach = false;
  bool merge_transpositions = false;
  bool resolve = false;
  int jobs = 1;
  std::string solver = "pcfr+";
  std::string convention = "decision";
  std::string cbv = "min";
  std::string out;
  std::string audit;
  std::string game_file;
  bool timing = false;
};

void WriteAtomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    Check(static_cast<bool>(out), ErrorCode::kInvalidArgument, "cannot write " + path);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  Check(static_cast<bool>(in), ErrorCode::kInvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli {
 public:
  int Run(int argc, char** argv);

 private:
  void AddGlobalOptions(CLI::App& app);
  Game LoadGame(const std::string& name) const;
  HarnessConfig Harness(double tolerance) const;
  double Tolerance(const Game& game) const {
    return config_.tolerance.value_or(DefaultTolerance(game));
  }
  SamplingConvention Convention() const;
  std::string ConfigText() const;
  void Emit(const std::string& text) const;

  int Stats();
  int Knowledge();
  int SolveGame();
  int Subgame();
  int Table1();
  int Table2();
  int Safety();

  RunConfig config_;
  std::string game_;
  std::string infoset_;
  std::string blueprint_ = "uniform";
  bool as_json_ = false;
  std::vector<std::string> rows_;
  std::vector<std::string> games_;
  std::string suite_;
  int n_ = 100;
  int seeds_ = -1;
  int samples_ = 25;
  CLI::App* app_ = nullptr;
};

void Cli::AddGlobalOptions(CLI::App& app) {
  app.add_option("--seed", config_.seed, "Root seed for every random substream");
  app.add_option("--tol", config_.tolerance,
                 "Solver tolerance (default 1e-6, 1e-4 above 10^4 nodes)");
  app.add_option("--iters", config_.iterations, "Iteration budget per solve");
  app.add_option("--epsilon", config_.epsilon, "Blueprint restriction size");
  app.add_option("--k", config_.k, "Knowledge order: odd integer or inf");
  app.add_flag("--reach", config_.reach, "Reach gadgets (gift-adjusted alternates)");
  app.add_flag("--merge-transpositions", config_.merge_transpositions,
               "Merge transposed gadget branches");
  app.add_flag("--resolve", config_.resolve, "Solve resolve gadgets instead of maxmargin");
  app.add_option("--jobs", config_.jobs, "Worker threads for gadget solves");
  app.add_option("--solver", config_.solver, "pcfr+ or cfr+")
      ->check(CLI::IsMember({"pcfr+", "cfr+"}));
  app.add_option("--convention", config_.convention, "Node population for average knowledge-set sizes")
      ->check(CLI::IsMember({"decision", "all"}));
  app.add_option("--cbv", config_.cbv, "Counterfactual value orientation in dumps")
      ->check(CLI::IsMember({"min", "max"}));
  app.add_option("--out", config_.out, "Output path");
  app.add_option("--audit", config_.audit, "Write per-solve records as JSON here");
  app.add_option("--game-file", config_.game_file, "Read the game from a text file");
  app.add_flag("--timing", config_.timing, "Keep wallclock columns in reports");
}

Game Cli::LoadGame(const std::string& name) const {
  if (!config_.game_file.empty()) return ReadGameText(ReadFile(config_.game_file));
  Check(!name.empty(), ErrorCode::kInvalidArgument, "no game given");
  return MakeGame(name);
}

HarnessConfig Cli::Harness(double tolerance) const {
  HarnessConfig h;
  h.solver.tolerance = tolerance;
  h.solver.max_iterations = config_.iterations;
  h.solver.seed = config_.seed;
  h.solver.scheme = config_.solver == "cfr+" ? RegretScheme::kCfrPlus
                                             : RegretScheme::kPredictiveCfrPlus;
  h.options.reach = config_.reach;
  h.options.merge_transpositions = config_.merge_transpositions;
  h.options.seed = config_.seed;
  h.use_resolve = config_.resolve;
  h.jobs = config_.jobs;
  return h;
}

SamplingConvention Cli::Convention() const {
  return config_.convention == "all" ? SamplingConvention::kAllNodesLastMover
                                     : SamplingConvention::kDecisionNodes;
}

std::string Cli::ConfigText() const { return app_->config_to_str(true, false); }

// Writes to --out when given, standard output otherwise.
void Cli::Emit(const std::string& text) const {
  if (config_.out.empty()) {
    std::cout << text;
  } else {
    WriteAtomically(config_.out, text);
    WriteAtomically(config_.out + ".conf", ConfigText());
  }
}

int Cli::Stats() {
  const Game game = LoadGame(game_);
  const GameStats s = ComputeStats(game, Convention());
  if (as_json_) {
    json j = {{"game", game_.empty() ? config_.game_file : game_},
              {"nodes", s.nodes},
              {"infosets", s.infosets},
              {"diameter", s.diameter},
              {"avg_knowledge",
               {{"1", s.avg_knowledge[0]}, {"2", s.avg_knowledge[1]},
                {"3", s.avg_knowledge[2]}, {"4", s.avg_knowledge[3]},
                {"inf", s.avg_knowledge[4]}}}};
    Emit(j.dump(2) + "\n");
    return kOk;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "nodes=%d infosets=%d diameter=%d k1=%.2f k2=%.2f k3=%.2f k4=%.2f kinf=%.2f\n",
                s.nodes, s.infosets, s.diameter, s.avg_knowledge[0], s.avg_knowledge[1],
                s.avg_knowledge[2], s.avg_knowledge[3], s.avg_knowledge[4]);
  Emit(buf);
  return kOk;
}

int FindPlusInfoset(const Game& game, const std::string& text) {
  const PlayerView& v = game.view(Player::kPlus);
  for (const std::string& path : {text, text + "/"}) {
    if (auto e = v.FindByString(path); e && v.entry(*e).infoset >= 0) {
      return v.entry(*e).infoset;
    }
  }
  int found = -1;
  for (int i = 0; i < v.num_infosets(); ++i) {
    if (v.Label(v.infoset(i).entry) != text) continue;
    Check(found < 0, ErrorCode::kInvalidArgument,
          "label " + text + " names several infosets; give the full path");
    found = i;
  }
  Check(found >= 0, ErrorCode::kInvalidArgument, "no plus infoset " + text);
  return found;
}

int Cli::Knowledge() {
  const Game game = LoadGame(game_);
  const CollapsedGraph graph(game);
  const IndependentSetPlan plan(game);
  int largest = 0;
  int most_colors = 0;
  for (int c = 0; c < graph.num_components(); ++c) {
    largest = std::max<int>(largest, graph.ComponentVertices(c).size());
    most_colors = std::max(most_colors, plan.colors(c));
  }
  json j = {{"collapsed_graph",
             {{"vertices", graph.num_vertices()},
              {"edges", graph.num_edges()},
              {"components", graph.num_components()},
              {"largest_component", largest},
              {"most_colors", most_colors}}}};
  if (!infoset_.empty()) {
    const int infoset = FindPlusInfoset(game, infoset_);
    const std::vector<NodeId> nodes = InfosetNodes(game, Player::kPlus, infoset);
    json sizes;
    for (int k = 1; k <= 7; k += 2) {
      sizes[std::to_string(k)] = MakeKnowledgeSet(game, nodes, Order::Finite(k)).size();
    }
    sizes["inf"] = CommonKnowledgeClosure(game, nodes).size();
    j["infoset"] = game.view(Player::kPlus).PathString(
        game.view(Player::kPlus).infoset(infoset).entry);
    j["knowledge_set_sizes"] = sizes;
  }
  Emit(j.dump(2) + "\n");
  return kOk;
}

int Cli::SolveGame() {
  const Game game = LoadGame(game_);
  const HarnessConfig h = Harness(Tolerance(game));
  const SolveResult r = Solve(game, PayoffAddends{}, h.solver);
  if (!r.converged) {
    std::fprintf(stderr, "did not converge: gap %.3g after %d iterations\n", r.gap(),
                 r.iterations);
    return kNoConvergence;
  }
  json j = {{"value", r.value},
            {"gap", r.gap()},
            {"iterations", r.iterations},
            {"plus_exploitability", r.plus_exploitability()},
            {"minus_exploitability", r.minus_exploitability()}};
  if (as_json_) {
    Emit(j.dump(2) + "\n");
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "value=%.9f gap=%.3g plus_expl=%.3g minus_expl=%.3g iterations=%d\n",
                  r.value, r.gap(), r.plus_exploitability(), r.minus_exploitability(),
                  r.iterations);
    Emit(buf);
  }
  return kOk;
}

std::string DumpGadget(const GadgetGame& g, const CounterfactualValues& cbv,
                       const Game& source) {
  std::ostringstream out;
  const PlayerView& pv = g.game.view(Player::kPlus);
  const PlayerView& mv = g.game.view(Player::kMinus);
  char buf[512];
  std::snprintf(buf, sizeof buf, "kind=%s nodes=%d branches=%zu merged=%zu\n",
                std::string(GadgetKindName(g.kind)).c_str(), g.game.num_nodes(),
                g.branches.size(), g.merged_entries.size());
  out << buf;
  for (const GadgetBranch& b : g.branches) {
    const std::string name =
        source.view(Player::kMinus).PathString(b.source_entry);
    std::snprintf(buf, sizeof buf,
                  "branch %s mass=%.17g alternate=%.17g gift=%.17g cbv=%.17g\n",
                  name.c_str(), b.mass, b.alternate, b.gift,
                  cbv.defined(b.source_entry) ? cbv.value(b.source_entry) : NAN);
    out << buf;
  }
  for (const BilinearEntry& e : PayoffMatrix(g.game, PayoffAddends{})) {
    if (e.value == 0) continue;
    std::snprintf(buf, sizeof buf, "A[%s,%s]=%.17g\n",
                  SequenceName(pv, e.plus_sequence).c_str(),
                  SequenceName(mv, e.minus_sequence).c_str(), e.value);
    out << buf;
  }
  for (const auto& [key, value] : g.addends.entries()) {
    std::snprintf(buf, sizeof buf, "B[%s,%s]=%.17g\n",
                  SequenceName(pv, key.first).c_str(),
                  SequenceName(mv, mv.entry(key.second).prefix_sequence).c_str(),
                  value);
    out << buf;
  }
  return out.str();
}

int Cli::Subgame() {
  const Game game = LoadGame(game_);
  const int infoset = FindPlusInfoset(game, infoset_);
  const HarnessConfig h = Harness(Tolerance(game));
  const SequenceFormStrategy x = blueprint_ == "uniform"
                                     ? UniformStrategy(game, Player::kPlus)
                                     : EpsilonUniformBlueprint(game, config_.epsilon, h.solver);
  GadgetGame gadget = MakeSubgame(game, PayoffAddends{}, x, infoset,
                                  Order::Parse(config_.k), h.options);
  if (config_.resolve) gadget = MaxmarginToResolve(gadget);
  const CounterfactualValues cbv = ComputeCounterfactualValues(
      game, PayoffAddends{}, x,
      config_.cbv == "max" ? CbvOrientation::kMax : CbvOrientation::kMin);
  std::cout << DumpGadget(gadget, cbv, game);
  if (!config_.out.empty()) {
    WriteAtomically(config_.out + ".game", WriteGameText(gadget.game));
    WriteAtomically(config_.out + ".sidecar.json", WriteGadgetSidecar(gadget));
    WriteAtomically(config_.out + ".conf", ConfigText());
  }
  return kOk;
}

json AuditRecords(const std::vector<SolveRecord>& records) {
  json out = json::array();
  for (const SolveRecord& r : records) {
    out.push_back({{"infoset", r.infoset},
                   {"depth", r.depth},
                   {"kind", std::string(GadgetKindName(r.kind))},
                   {"gadget_nodes", r.gadget_nodes},
                   {"branches", r.branches},
                   {"value", r.value},
                   {"gap", r.gap},
                   {"tolerance", r.tolerance},
                   {"iterations", r.iterations}});
  }
  return out;
}

int Cli::Table1() {
  std::vector<Table1Spec> specs;
  if (rows_.empty()) {
    specs = DefaultTable1();
  } else {
    for (const std::string& row : rows_) {
      const auto colon = row.find(':');
      specs.push_back({row.substr(0, colon),
                       colon == std::string::npos ? "" : row.substr(colon + 1)});
    }
  }
  HarnessConfig h = Harness(config_.tolerance.value_or(1e-6));
  std::vector<Table1Row> rows;
  for (const Table1Spec& spec : specs) {
    // Without --tol each row gets its game's default tolerance.
    if (!config_.tolerance) h.solver.tolerance = DefaultTolerance(MakeGame(spec.game));
    rows.push_back(RunTable1Row(spec, config_.epsilon, h));
    const Table1Row& r = rows.back();
    std::fprintf(stderr, "%s: %s\n", RowName(spec).c_str(),
                 r.error.empty() ? "done" : r.error.c_str());
  }
  Emit(Table1Csv(rows, config_.timing));
  if (!config_.audit.empty()) {
    json audit = {{"config", ConfigText()}, {"rows", json::array()}};
    for (const Table1Row& r : rows) {
      audit["rows"].push_back({{"game", r.game},
                               {"variant", r.variant},
                               {"blueprint_expl", r.blueprint_expl},
                               {"post_expl", r.post_expl},
                               {"error", r.error},
                               {"solves", AuditRecords(r.records)}});
    }
    WriteAtomically(config_.audit, audit.dump(2) + "\n");
  }
  for (const Table1Row& r : rows) {
    if (!r.error.empty()) return kFailure;
  }
  return kOk;
}

int Cli::Table2() {
  std::vector<std::string> games = games_;
  if (games.empty()) {
    for (const CatalogEntry& e : StatsCatalog()) games.push_back(e.name);
  }
  Emit(Table2Csv(RunTable2(games, Convention())));
  return kOk;
}

int Cli::Safety() {
  const HarnessConfig h = Harness(config_.tolerance.value_or(1e-6));
  std::vector<std::string> suites;
  if (suite_ == "all") {
    suites = {"prop1", "thm1", "thm2", "thm3", "eps0"};
  } else {
    suites = {suite_};
  }
  bool passed = true;
  json report = json::array();
  for (const std::string& suite : suites) {
    const std::vector<std::string> games =
        games_.empty() && suite != "prop1" ? DefaultSuiteGames(suite) : games_;
    SuiteReport r;
    if (suite == "prop1") r = CounterexampleSuite(n_, h);
    if (suite == "thm1") r = UpdateScheduleSuite(games, seeds_ < 0 ? 5 : seeds_, config_.epsilon, h);
    if (suite == "thm2") r = AllocationSuite(games, seeds_ < 0 ? 20 : seeds_, config_.epsilon, h);
    if (suite == "thm3") r = AffineEquilibriumSuite(games, samples_, h);
    if (suite == "eps0") r = EpsilonZeroSuite(games, h);
    for (const std::string& line : r.lines) std::cout << r.name << ": " << line << "\n";
    std::cout << r.name << ": " << (r.passed ? "PASS" : "FAIL");
    if (config_.timing) std::cout << " (" << r.wallclock_ms << " ms)";
    std::cout << std::endl;
    passed = passed && r.passed;
    report.push_back({{"suite", r.name}, {"passed", r.passed}, {"lines", r.lines}});
  }
  if (!config_.out.empty()) {
    Emit(json{{"config", ConfigText()}, {"suites", report}}.dump(2) + "\n");
  }
  return passed ? kOk : kViolation;
}

int Cli::Run(int argc, char** argv) {
  CLI::App app{"Knowledge-limited subgame solving toolkit"};
  app_ = &app;
  app.set_config("--config", "", "Flat key=value file of option defaults");
  app.require_subcommand(1);
  app.fallthrough();
  AddGlobalOptions(app);

  auto* stats = app.add_subcommand("stats", "Structure counts and average knowledge-set sizes");
  stats->add_option("game", game_, "Catalog name");
  stats->add_flag("--json", as_json_);

  auto* knowledge = app.add_subcommand("knowledge", "Knowledge-set and collapsed-graph sizes");
  knowledge->add_option("game", game_, "Catalog name");
  knowledge->add_option("--infoset", infoset_, "Plus infoset path or label");

  auto* solve = app.add_subcommand("solve", "Solve a game, print value and exploitabilities");
  solve->add_option("game", game_, "Catalog name");
  solve->add_flag("--json", as_json_);

  auto* subgame = app.add_subcommand("subgame", "Build and dump a gadget game");
  subgame->add_option("game", game_, "Catalog name")->required();
  subgame->add_option("infoset", infoset_, "Plus infoset path or label")->required();
  subgame->add_option("--blueprint", blueprint_, "uniform or eps (epsilon-uniform)")
      ->check(CLI::IsMember({"uniform", "eps"}));

  auto* table1 = app.add_subcommand("table1", "Blueprint and nested-solve exploitability");
  table1->add_option("--row", rows_, "game or game:variant (bet, fold); repeatable");

  auto* table2 = app.add_subcommand("table2", "Structural statistics of catalog games");
  table2->add_option("games", games_, "Catalog names");

  auto* safety = app.add_subcommand("safety", "Safety property suites");
  safety->add_option("suite", suite_, "prop1, thm1, thm2, thm3, eps0 or all")
      ->required()
      ->check(CLI::IsMember({"prop1", "thm1", "thm2", "thm3", "eps0", "all"}));
  safety->add_option("--game", games_, "Game to run on; repeatable");
  safety->add_option("--n", n_, "Size of the hidden matching pennies counterexample");
  safety->add_option("--seeds", seeds_, "Seeds per game");
  safety->add_option("--samples", samples_, "Sampled minus equilibria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*stats) return Stats();
    if (*knowledge) return Knowledge();
    if (*solve) return SolveGame();
    if (*subgame) return Subgame();
    if (*table1) return Table1();
    if (*table2) return Table2();
    if (*safety) return Safety();
  } catch (const ConvergenceError& e) {
    std::cerr << e.what() << "\n";
    return kNoConvergence;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kUnknownGame:
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kBadParameter:
      case ErrorCode::kBadOrder:
      case ErrorCode::kParseError:
        return kUsage;
      case ErrorCode::kDidNotConverge:
        return kNoConvergence;
      case ErrorCode::kPropertyViolation:
        return kViolation;
      default:
        return kFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return Cli().Run(argc, argv); }
