#include "avoid/harness.hpp"

#include <array>
#include <iomanip>
#include <random>
#include <sstream>
#include <unordered_map>

namespace avoid {

std::string_view root_constraint_name(RootConstraint r) {
  switch (r) {
    case RootConstraint::All: return "all";
    case RootConstraint::FirstTwoDisjoint: return "first-two-disjoint";
    case RootConstraint::ScriptCase: return "script-case";
  }
  return "?";
}

std::optional<RootConstraint> parse_root_constraint(std::string_view name) {
  for (auto r : {RootConstraint::All, RootConstraint::FirstTwoDisjoint, RootConstraint::ScriptCase})
    if (root_constraint_name(r) == name) return r;
  return std::nullopt;
}

RootConstraint default_root_constraint(StrategyId s) {
  switch (s) {
    case StrategyId::Th1Case4: return RootConstraint::FirstTwoDisjoint;
    case StrategyId::Th4: return RootConstraint::All;
    default: return RootConstraint::ScriptCase;
  }
}

namespace {

// Line outcomes. The first seven are game terminals; the rest end a line
// without one.
enum Bucket : std::uint8_t {
  kRedForbidden,   // Red completed the forbidden graph
  kBlueForbidden,
  kRedStuck,       // Red had no legal move
  kBlueStuck,
  kDraw,
  kDesync,
  kPositionLost,
  kSolverLimit,
  kBucketCount,
};

constexpr std::array<std::string_view, kBucketCount> kBucketNames{
    "blue:red_completed_forbidden", "red:blue_completed_forbidden", "blue:red_had_no_legal_move",
    "red:blue_had_no_legal_move",   "draw",                          "failure:desync",
    "failure:position_lost",        "failure:solver_limit",
};

constexpr bool is_failure(Bucket b) { return b != kRedForbidden && b != kRedStuck; }

std::string_view failure_kind(Bucket b) {
  switch (b) {
    case kBlueForbidden: return "blue-forbidden";
    case kBlueStuck: return "blue-stuck";
    case kDraw: return "draw";
    case kDesync: return "desync";
    case kPositionLost: return "position-lost";
    case kSolverLimit: return "solver-limit";
    default: return "none";
  }
}

Bucket bucket_of(const GameStatus& st) {
  if (st.is_draw()) return kDraw;
  const bool forbidden = st.reason == GameStatus::Reason::OpponentCompletedForbidden;
  if (st.winner == Player::Blue) return forbidden ? kRedForbidden : kRedStuck;
  return forbidden ? kBlueForbidden : kBlueStuck;
}

struct Summary {
  std::uint64_t lines = 0;
  std::array<std::uint64_t, kBucketCount> buckets{};
  std::uint64_t claims = 0;
  int depth = 0;  // longest remaining line, in moves

  void add(const Summary& o, int extra_depth) {
    lines += o.lines;
    for (std::size_t i = 0; i < buckets.size(); ++i) buckets[i] += o.buckets[i];
    claims += o.claims;
    depth = std::max(depth, o.depth + extra_depth);
  }
  std::uint64_t failures() const {
    std::uint64_t f = 0;
    for (std::size_t i = 0; i < buckets.size(); ++i)
      if (is_failure(static_cast<Bucket>(i))) f += buckets[i];
    return f;
  }
};

struct Abort {};

struct MemoKey {
  std::uint64_t red = 0;
  std::uint64_t blue = 0;
  std::uint32_t digest = 0;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::uint64_t h = k.red * 0x9E3779B97F4A7C15ULL;
    h ^= (k.blue + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2));
    h ^= (static_cast<std::uint64_t>(k.digest) * 0xC2B2AE3D27D4EB4FULL) + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class Explorer {
 public:
  Explorer(StrategyId s, Game g, int n, RootConstraint root, const ExhaustOptions& opt)
      : game_(g), n_(n), rules_(rules_for(g)), root_(root), opt_(opt), start_(std::chrono::steady_clock::now()) {
    report_.game = g;
    report_.n = n;
    report_.strategy = s;
    report_.root = root;
  }

  VerificationReport exhaust() {
    Summary total;
    try {
      total = red_node(Position(n_), HybridBlue(game_, n_, opt_.solver));
    } catch (const Abort&) {
      report_.complete = false;
      total = partial_;
    }
    finish(total);
    return std::move(report_);
  }

  VerificationReport fuzz(std::uint64_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Summary total;
    try {
      for (std::uint64_t i = 0; i < samples; ++i) {
        total.add(random_line(rng), 0);
        partial_ = total;
        check_budget();
      }
    } catch (const Abort&) {
      report_.complete = false;
    }
    finish(total);
    return std::move(report_);
  }

 private:
  void finish(const Summary& total) {
    report_.lines_explored = total.lines;
    for (std::size_t i = 0; i < kBucketCount; ++i)
      if (total.buckets[i]) report_.terminal_histogram[std::string(kBucketNames[i])] = total.buckets[i];
    report_.max_game_length = total.depth;
    report_.failure_lines = total.failures();
    report_.claim_violation_count = total.claims;
    report_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void check_budget() {
    if ((++ticks_ & 1023U) == 0 && std::chrono::steady_clock::now() - start_ > opt_.budget.max_time) throw Abort{};
    if (opt_.budget.max_lines && partial_.lines >= opt_.budget.max_lines) throw Abort{};
  }

  Summary leaf(Bucket b, const Position& p, std::string detail) {
    Summary s;
    s.lines = 1;
    s.buckets[b] = 1;
    partial_.lines += 1;
    partial_.buckets[b] += 1;
    if (is_failure(b) && report_.failures.size() < opt_.max_recorded) {
      FailureRecord f;
      f.kind = failure_kind(b);
      f.detail = std::move(detail);
      f.history = p.history();
      for (const auto& t : traces_) f.traces.push_back(t ? trace_to_json(*t, n_) : nlohmann::json(nullptr));
      report_.failures.push_back(std::move(f));
    }
    return s;
  }

  bool admissible(const Position& before, EdgeId e) const {
    if (before.red_count() != 1 || root_ == RootConstraint::All) return true;
    if (root_ == RootConstraint::FirstTwoDisjoint) {
      const Edge a = edge_endpoints(before.history().front().edge, n_);
      const Edge b = edge_endpoints(e, n_);
      return a.u != b.u && a.u != b.v && a.v != b.u && a.v != b.v;
    }
    return applicable_case(game_, before.with_move(e)) != CaseTag::SolverFallback;
  }

  std::uint32_t intern(const std::string& digest) {
    auto [it, inserted] = digests_.try_emplace(digest, static_cast<std::uint32_t>(digests_.size()));
    return it->second;
  }

  /// Red to move (or the game is over after Blue's reply).
  Summary red_node(const Position& p, const HybridBlue& blue) {
    check_budget();
    const GameStatus st = status(p, rules_);
    if (st.finished) return leaf(bucket_of(st), p, "");
    MemoKey key;
    if (opt_.memoize) {
      key = {p.red_mask(), p.blue_mask(), intern(blue.digest())};
      if (auto it = memo_.find(key); it != memo_.end()) {
        ++report_.memo_hits;
        partial_.add(it->second, 0);
        return it->second;
      }
    }
    Summary s;
    for (EdgeId e : legal_moves(p, rules_)) {
      if (!admissible(p, e)) continue;
      s.add(blue_node(apply_move(p, e, rules_), blue), 1);
    }
    if (opt_.memoize) memo_.emplace(key, s);
    return s;
  }

  /// Blue's reply, from a copy of the strategy state.
  Summary blue_node(const Position& p, const HybridBlue& blue) {
    const GameStatus st = status(p, rules_);
    if (st.finished) return leaf(bucket_of(st), p, "");
    HybridBlue b = blue;
    BlueChoice c;
    if (auto failed = choose(p, b, c)) return *failed;
    Summary claims;
    record_claims(p, c, claims);
    traces_.push_back(c.trace);
    Summary s = red_node(apply_move(p, c.edge, rules_), b);
    traces_.pop_back();
    s.depth += 1;
    s.claims += claims.claims;
    partial_.claims += claims.claims;
    return s;
  }

  std::optional<Summary> choose(const Position& p, HybridBlue& b, BlueChoice& c) {
    try {
      c = b.next(p);
    } catch (const ScriptDesync& e) {
      return leaf(kDesync, p, e.what());
    } catch (const PositionLost& e) {
      return leaf(kPositionLost, p, e.what());
    } catch (const BudgetExceeded& e) {
      return leaf(kSolverLimit, p, e.what());
    } catch (const OutOfRange& e) {
      return leaf(kSolverLimit, p, e.what());
    }
    (c.origin == MoveOrigin::Script ? report_.scripted_moves : report_.solver_moves) += 1;
    return std::nullopt;
  }

  void record_claims(const Position& p, const BlueChoice& c, Summary& s) {
    for (const auto& v : c.violations) {
      s.claims += 1;
      if (report_.claim_violations.size() < opt_.max_recorded)
        report_.claim_violations.push_back({v.claim, v.detail, p.history()});
    }
  }

  Summary random_line(std::mt19937_64& rng) {
    Position p(n_);
    HybridBlue blue(game_, n_, opt_.solver);
    traces_.clear();
    Summary s;
    for (;;) {
      GameStatus st = status(p, rules_);
      if (st.finished) {
        s.add(leaf(bucket_of(st), p, ""), 0);
        break;
      }
      std::vector<EdgeId> moves;
      for (EdgeId e : legal_moves(p, rules_))
        if (admissible(p, e)) moves.push_back(e);
      if (moves.empty()) throw std::logic_error("fuzz_verify: root constraint admits no Red move");
      p = apply_move(p, moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)], rules_);
      st = status(p, rules_);
      if (st.finished) {
        s.add(leaf(bucket_of(st), p, ""), 0);
        break;
      }
      BlueChoice c;
      if (auto failed = choose(p, blue, c)) {
        s.add(*failed, 0);
        break;
      }
      record_claims(p, c, s);
      traces_.push_back(c.trace);
      p = apply_move(p, c.edge, rules_);
    }
    s.depth = static_cast<int>(p.history().size());
    partial_.claims += s.claims;
    return s;
  }

  Game game_;
  int n_;
  RuleSet rules_;
  RootConstraint root_;
  const ExhaustOptions& opt_;
  std::chrono::steady_clock::time_point start_;
  VerificationReport report_;
  Summary partial_;  // running totals for budget aborts
  std::uint64_t ticks_ = 0;
  std::vector<std::optional<RuleTrace>> traces_;
  std::unordered_map<std::string, std::uint32_t> digests_;
  std::unordered_map<MemoKey, Summary, MemoKeyHash> memo_;
};

void check_pairing(StrategyId s, Game g) {
  if (game_of(s) != g)
    throw std::invalid_argument("strategy " + std::string(strategy_name(s)) + " does not play " + std::string(game_name(g)));
}

}  // namespace

VerificationReport exhaust_verify(StrategyId s, Game g, int n, const ExhaustOptions& opt) {
  check_pairing(s, g);
  if (n > kMaxCanonVertices) throw OutOfRange("exhaust_verify: n must be at most 11");
  return Explorer(s, g, n, opt.root.value_or(default_root_constraint(s)), opt).exhaust();
}

VerificationReport fuzz_verify(StrategyId s, Game g, int n, std::uint64_t samples, std::uint64_t seed,
                               const ExhaustOptions& opt) {
  check_pairing(s, g);
  ExhaustOptions o = opt;
  o.memoize = false;
  return Explorer(s, g, n, opt.root.value_or(RootConstraint::ScriptCase), o).fuzz(samples, seed);
}

nlohmann::json report_to_json(const VerificationReport& r) {
  nlohmann::json j{
      {"game", std::string(game_name(r.game))},
      {"n", r.n},
      {"strategy", std::string(strategy_name(r.strategy))},
      {"root_constraint", std::string(root_constraint_name(r.root))},
      {"complete", r.complete},
      {"passed", r.passed()},
      {"lines_explored", r.lines_explored},
      {"terminal_histogram", r.terminal_histogram},
      {"max_game_length", r.max_game_length},
      {"memo_hits", r.memo_hits},
      {"failure_lines", r.failure_lines},
      {"claim_violation_count", r.claim_violation_count},
      {"scripted_moves", r.scripted_moves},
      {"solver_moves", r.solver_moves},
      {"seconds", r.seconds},
  };
  auto history_json = [&](const std::vector<Move>& h) {
    nlohmann::json a = nlohmann::json::array();
    for (const Move& m : h) {
      nlohmann::json e = edge_to_json(m.edge, r.n);
      e["player"] = std::string(player_code(m.player));
      a.push_back(std::move(e));
    }
    return a;
  };
  j["failures"] = nlohmann::json::array();
  for (const auto& f : r.failures)
    j["failures"].push_back({{"kind", f.kind}, {"detail", f.detail}, {"history", history_json(f.history)}, {"traces", f.traces}});
  j["claim_violations"] = nlohmann::json::array();
  for (const auto& c : r.claim_violations)
    j["claim_violations"].push_back({{"claim", c.claim}, {"detail", c.detail}, {"history", history_json(c.history)}});
  return j;
}

std::string report_summary(const VerificationReport& r) {
  std::ostringstream os;
  os << strategy_name(r.strategy) << " on " << game_name(r.game) << " K" << r.n << " ("
     << root_constraint_name(r.root) << "): " << (r.passed() ? "PASS" : "FAIL") << (r.complete ? "" : " [incomplete]")
     << ", " << r.lines_explored << " lines, " << r.failure_lines << " failing, " << r.claim_violation_count
     << " claim violations, longest " << r.max_game_length << " moves, " << r.memo_hits << " memo hits, " << std::setprecision(3)
     << r.seconds << " s";
  return os.str();
}

}  // namespace avoid
