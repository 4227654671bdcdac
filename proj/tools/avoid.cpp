// avoid: solve, verify, extremal, play, serve.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include "avoid/engine.hpp"
#include "avoid/extremal.hpp"
#include "avoid/harness.hpp"
#include "avoid/solver.hpp"

using namespace avoid;
using nlohmann::json;

namespace {

struct Budget {
  std::uint64_t nodes = 0;
  std::int64_t ms = 0;

  void add_to(CLI::App* app) {
    app->add_option("--budget-nodes", nodes, "solver node budget per solve");
    app->add_option("--budget-ms", ms, "time budget in milliseconds");
  }
  void apply(SolverOptions& o) const {
    if (nodes) o.max_nodes = nodes;
    if (ms) o.max_time = std::chrono::milliseconds(ms);
  }
};

std::function<void(const std::string&)> env_logger() {
  const char* v = std::getenv("AVOIDER_LOG");
  if (!v || !*v || std::string(v) == "0") return {};
  return [](const std::string& s) { std::cerr << "[avoid] " << s << "\n"; };
}

Game game_arg(const std::string& s) {
  if (auto g = parse_game(s)) return *g;
  throw CLI::ValidationError("--game", "unknown game " + s);
}

const std::vector<std::string> kGames{"p4", "cc3", "cs3", "cp4", "ccycle", "sim"};

// ---- solve ------------------------------------------------------------------

int run_solve(const std::string& game, int n, const std::string& from, const Budget& budget, bool no_orbit) {
  const Game g = game_arg(game);
  const RuleSet rules = rules_for(g);
  Position p(n);
  if (!from.empty()) {
    std::ifstream in(from);
    if (!in) throw std::runtime_error("cannot read " + from);
    p = position_from_json(json::parse(in), rules);
  }
  SolverOptions o;
  o.orbit_pruning = !no_orbit;
  budget.apply(o);
  Solver solver(rules, o);
  const SolveResult r = solver.solve(p);
  json j{{"game", game},
         {"n", p.n()},
         {"value", std::string(value_name(r.value))},
         {"outcome", std::string(outcome_name(r.outcome))},
         {"best_move", r.best_move ? edge_to_json(*r.best_move, p.n()) : json(nullptr)},
         {"stats",
          {{"nodes", r.stats.nodes},
           {"table_hits", r.stats.table_hits},
           {"max_depth", r.stats.max_depth},
           {"elapsed_ms", r.stats.elapsed_ms}}}};
  std::cout << j.dump(2) << "\n" << outcome_name(r.outcome) << "\n";
  return 0;
}

// ---- verify -----------------------------------------------------------------

int run_verify(const std::string& game, int n, const std::string& strategy, const std::string& root,
               std::uint64_t fuzz, std::uint64_t seed, bool no_memo, const Budget& budget) {
  const Game g = game_arg(game);
  const auto s = parse_strategy(strategy);
  if (!s) throw CLI::ValidationError("--strategy", "unknown strategy " + strategy);
  ExhaustOptions o;
  if (!root.empty()) {
    o.root = parse_root_constraint(root);
    if (!o.root) throw CLI::ValidationError("--root", "unknown root constraint " + root);
  }
  o.memoize = !no_memo;
  if (budget.ms) o.budget.max_time = std::chrono::milliseconds(budget.ms);
  if (budget.nodes) o.solver.max_nodes = budget.nodes;
  const VerificationReport r = fuzz ? fuzz_verify(*s, g, n, fuzz, seed, o) : exhaust_verify(*s, g, n, o);
  std::cout << report_to_json(r).dump(2) << "\n" << report_summary(r) << "\n";
  return r.passed() ? 0 : 1;
}

// ---- extremal ---------------------------------------------------------------

int run_extremal(int n, const std::string& family) {
  const bool p4 = family == "p4";
  const ExtremalAnswer a = p4 ? max_edges_p4_free(n) : max_edges_cc3_free(n);
  json witness = json::array();
  for (EdgeId e : a.witness) witness.push_back(edge_to_json(e, n));
  json oracle = nullptr;
  if (n <= 7) oracle = brute_force_max_edges(n, p4 ? Forbidden::SubgraphP4 : Forbidden::ComponentGT3).max_edges;
  std::cout << json{{"n", n}, {"family", family}, {"formula", a.max_edges}, {"oracle", oracle}, {"witness", witness}}
                   .dump()
            << "\n";
  return 0;
}

// ---- play -------------------------------------------------------------------

void show(const json& resp) {
  if (resp["type"] == "error") {
    std::cout << "error " << resp["code"].get<std::string>() << ": " << resp["detail"].get<std::string>() << "\n";
    return;
  }
  if (resp["type"] == "hint") {
    std::cout << "hint " << resp["edge"]["u"] << "-" << resp["edge"]["v"] << " (" << resp["value"].get<std::string>()
              << ")\n";
    return;
  }
  std::string red, blue;
  for (const auto& m : resp["position"]["moves"]) {
    auto& side = m["p"] == "R" ? red : blue;
    side += " " + std::to_string(m["u"].get<int>()) + "-" + std::to_string(m["v"].get<int>());
  }
  std::cout << "red: " << red << "\nblue:" << blue << "\n";
  if (!resp["engine_move"].is_null()) {
    const auto& m = resp["engine_move"];
    std::cout << "engine played " << m["u"] << "-" << m["v"] << " [" << m["origin"].get<std::string>() << "]";
    if (!resp["last_trace"].is_null())
      std::cout << " " << resp["last_trace"]["stage"].get<std::string>() << " / "
                << resp["last_trace"]["rule"].get<std::string>();
    std::cout << "\n";
  }
  const auto& st = resp["status"];
  if (st["state"] == "finished")
    std::cout << "game over: " << st["winner"].get<std::string>() << " wins (" << st["reason"].get<std::string>()
              << ")\n";
  else
    std::cout << st["to_move"].get<std::string>() << " to move\n";
}

int run_play(const std::string& game, int n, const std::string& human, const std::string& transcript,
             const Budget& budget) {
  EngineOptions o;
  budget.apply(o.solver);
  o.transcript_path = transcript;
  o.log = env_logger();
  Session session(o);
  show(session.handle_json({{"type", "new_game"}, {"game", game}, {"n", n}, {"human", human}}));
  std::cout << "commands: <u> <v> | hint | state | quit\n";
  std::string line;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string word;
    if (!(in >> word)) continue;
    if (word == "quit" || word == "q") break;
    json req;
    if (word == "hint" || word == "state") {
      req = {{"type", word}};
    } else {
      for (char& c : line)
        if (c == '-' || c == ',') c = ' ';
      std::istringstream nums(line);
      int u, v;
      if (!(nums >> u >> v)) {
        std::cout << "expected two vertex numbers\n";
        continue;
      }
      req = {{"type", "move"}, {"u", u}, {"v", v}};
    }
    show(session.handle_json(req));
  }
  return 0;
}

// ---- serve ------------------------------------------------------------------

int serve_stdio(const EngineOptions& o) {
  Session session(o);
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::cout << session.handle_line(line) << std::endl;
  }
  return 0;
}

int serve_http(const EngineOptions& o, const std::string& host, int port) {
  // One Session per X-Session header value; "default" when absent.
  struct Slot {
    std::mutex mu;
    Session session;
    explicit Slot(const EngineOptions& o) : session(o) {}
  };
  std::mutex mu;
  std::map<std::string, std::unique_ptr<Slot>> slots;

  httplib::Server server;
  server.Post("/engine", [&](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.has_header("X-Session") ? req.get_header_value("X-Session") : "default";
    Slot* slot;
    {
      std::lock_guard lock(mu);
      auto& s = slots[id];
      if (!s) s = std::make_unique<Slot>(o);
      slot = s.get();
    }
    std::lock_guard lock(slot->mu);
    res.set_content(slot->session.handle_line(req.body), "application/json");
  });
  if (!server.bind_to_port(host, port)) {
    std::cerr << "cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  std::cerr << "listening on http://" << host << ":" << port << "/engine\n";
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong Avoider-Avoider and CAvoider-CAvoider games on K_n"};
  app.require_subcommand(1);

  std::string game, strategy, root, family = "p4", from, human = "red", transcript, host = "127.0.0.1";
  int n = 0, port = 8080;
  std::uint64_t fuzz = 0, seed = 1;
  bool no_memo = false, no_orbit = false, stdio = false;
  Budget budget;

  auto* solve = app.add_subcommand("solve", "solve a position exactly");
  solve->add_option("--game", game)->required()->check(CLI::IsMember(kGames));
  solve->add_option("--n", n)->required()->check(CLI::Range(1, kMaxVertices));
  solve->add_option("--from", from, "start from a Position JSON file");
  solve->add_flag("--no-orbit", no_orbit, "disable orbit pruning");
  budget.add_to(solve);

  auto* verify = app.add_subcommand("verify", "check a Blue strategy against Red");
  verify->add_option("--game", game)->required()->check(CLI::IsMember(kGames));
  verify->add_option("--n", n)->required()->check(CLI::Range(2, kMaxVertices));
  verify->add_option("--strategy", strategy)->required();
  verify->add_option("--root", root, "all | first-two-disjoint | script-case");
  verify->add_option("--fuzz", fuzz, "random Red games instead of exhaustive search");
  verify->add_option("--seed", seed);
  verify->add_flag("--no-memo", no_memo);
  budget.add_to(verify);

  auto* extremal = app.add_subcommand("extremal", "largest graph avoiding a family");
  extremal->add_option("--n", n)->required()->check(CLI::Range(1, kMaxVertices));
  extremal->add_option("--family", family)->required()->check(CLI::IsMember({"p4", "cc3"}));

  auto* play = app.add_subcommand("play", "play against the engine in the terminal");
  play->add_option("--game", game)->required()->check(CLI::IsMember(kGames));
  play->add_option("--n", n)->required()->check(CLI::Range(2, kMaxVertices));
  play->add_option("--human", human)->check(CLI::IsMember({"red", "blue"}));
  play->add_option("--transcript", transcript, "write the Position JSON here after every move");
  budget.add_to(play);

  auto* serve = app.add_subcommand("serve", "engine service (HTTP POST /engine or stdio)");
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_flag("--stdio", stdio, "line-delimited JSON on stdin/stdout");
  serve->add_option("--transcript", transcript);
  budget.add_to(serve);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(game, n, from, budget, no_orbit);
    if (*verify) return run_verify(game, n, strategy, root, fuzz, seed, no_memo, budget);
    if (*extremal) return run_extremal(n, family);
    if (*play) return run_play(game, n, human, transcript, budget);
    EngineOptions o;
    budget.apply(o.solver);
    o.transcript_path = transcript;
    o.log = env_logger();
    return stdio ? serve_stdio(o) : serve_http(o, host, port);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
