#include "intrinsic/game.hpp"

#include "intrinsic/approximation.hpp"
#include "intrinsic/dirichlet.hpp"
#include "intrinsic/farey.hpp"
#include "intrinsic/univariate.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace intrinsic {

using Json = nlohmann::ordered_json;

std::string to_string(Player p) { return p == Player::Alice ? "alice" : "bob"; }

Ball::Ball(RationalVector c, Rational r) : center(std::move(c)), radius(std::move(r)) {
  if (radius <= 0) throw InvalidArgument("ball radius must be positive");
}

bool Ball::contains(const Ball& other) const {
  if (other.dim() != dim()) return false;
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    if (other.center(i) - other.radius < center(i) - radius) return false;
    if (other.center(i) + other.radius > center(i) + radius) return false;
  }
  return true;
}

std::string to_string(GameKind k) {
  switch (k) {
    case GameKind::Hyperplane: return "hyperplane";
    case GameKind::AlgebraicSet: return "algebraic-set";
    case GameKind::Levelset: return "levelset";
  }
  return "unknown";
}

GameKind parse_game_kind(std::string_view s) {
  if (s == "hyperplane") return GameKind::Hyperplane;
  if (s == "algebraic-set" || s == "algebraic") return GameKind::AlgebraicSet;
  if (s == "levelset") return GameKind::Levelset;
  throw InvalidArgument("unknown game kind '" + std::string(s) + "'");
}

std::string to_string(Violation v) {
  switch (v) {
    case Violation::None: return "none";
    case Violation::Containment: return "containment";
    case Violation::Radius: return "radius";
    case Violation::Deleted: return "deleted";
    case Violation::Unknown: return "unknown";
    case Violation::BadDeletion: return "bad-deletion";
  }
  return "unknown";
}

std::string to_string(Outcome o) { return o == Outcome::Completed ? "completed" : "bob-lost"; }

Deletion Deletion::from_hyperplane(AffineFunctional h, const Rational& thickness) {
  Deletion d;
  d.kind = GameKind::Hyperplane;
  d.f = h.to_polynomial();
  d.hyperplane = std::move(h);
  d.thickness = thickness;
  return d;
}

Deletion Deletion::from_polynomial(GameKind kind, Polynomial f, const Rational& thickness) {
  if (kind == GameKind::Hyperplane) throw InvalidArgument("hyperplane deletions need an affine functional");
  Deletion d;
  d.kind = kind;
  d.f = std::move(f);
  d.thickness = thickness;
  return d;
}

std::string to_string(const Deletion& d) {
  std::string s = to_string(d.kind) + " ";
  s += d.hyperplane ? to_string(*d.hyperplane) : to_string(d.f) + " = 0";
  return s + " +- " + to_string(d.thickness) + (d.dummy ? " (dummy)" : "");
}

namespace {

LegalityVerdict ok() { return {}; }

LegalityVerdict bad(Violation v, std::string detail) { return {false, v, std::move(detail)}; }

LegalityVerdict avoids_hyperplane(const AffineFunctional& h, const Rational& eps, const Box& box) {
  // w . x - b ranges over [lo, hi] on the box; the max-norm distance to the
  // hyperplane is |w . x - b| / ||w||_1.
  Rational lo = -Rational(h.b), hi = -Rational(h.b);
  Integer l1 = 0;
  for (Eigen::Index i = 0; i < h.w.size(); ++i) {
    const Rational w(h.w(i));
    lo += w * (h.w(i) > 0 ? box.lo(i) : box.hi(i));
    hi += w * (h.w(i) > 0 ? box.hi(i) : box.lo(i));
    l1 += abs(h.w(i));
  }
  if (l1 == 0) return bad(Violation::BadDeletion, "hyperplane with w = 0");
  if (lo <= 0 && hi >= 0) return bad(Violation::Deleted, "ball meets the hyperplane");
  const Rational dist = (lo > 0 ? lo : -hi) / Rational(l1);
  if (dist > eps) return ok();
  return bad(Violation::Deleted, "distance " + to_string(dist) + " to the hyperplane is at most " + to_string(eps));
}

LegalityVerdict avoids_univariate(const Polynomial& f, const Rational& eps, const Box& box) {
  const UPoly p(f);
  const Rational a = box.lo(0) - eps, b = box.hi(0) + eps;
  const auto roots = isolate_roots(p, a, b);
  if (roots.empty()) return ok();
  return bad(Violation::Deleted, "zero of the deletion in [" + to_string(roots[0].lo) + ", " +
                                     to_string(roots[0].hi) + "] lies within " + to_string(eps));
}

std::vector<RationalInterval> intervals_of(const Box& b) {
  std::vector<RationalInterval> out;
  for (Eigen::Index i = 0; i < b.dim(); ++i) out.emplace_back(b.lo(i), b.hi(i));
  return out;
}

LegalityVerdict avoids_multivariate(const Polynomial& f, const Rational& eps, const Box& box) {
  // Interval evaluation on the thickened box, bisecting the widest side.
  constexpr std::size_t kMaxPieces = 4096;
  std::deque<Box> work{box.expanded(eps)};
  std::size_t pieces = 0;
  while (!work.empty()) {
    Box piece = std::move(work.front());
    work.pop_front();
    const auto iv = intervals_of(piece);
    const RationalInterval v = f(std::span<const RationalInterval>(iv));
    if (!v.contains_zero()) continue;
    // A sign change between corners certifies a zero inside.
    const RationalVector lo = piece.lo, hi = piece.hi;
    const int s_lo = sign(f(lo)), s_hi = sign(f(hi));
    if (s_lo == 0 || s_hi == 0 || s_lo != s_hi)
      return bad(Violation::Deleted, "deletion has a zero within " + to_string(eps) + " of the ball");
    if (++pieces > kMaxPieces)
      return bad(Violation::Unknown, "interval arithmetic could not certify the ball avoids the deletion");
    Eigen::Index widest = 0;
    for (Eigen::Index i = 1; i < piece.dim(); ++i)
      if (piece.hi(i) - piece.lo(i) > piece.hi(widest) - piece.lo(widest)) widest = i;
    const Rational mid = (piece.lo(widest) + piece.hi(widest)) / 2;
    Box left = piece, right = piece;
    left.hi(widest) = mid;
    right.lo(widest) = mid;
    work.push_back(std::move(left));
    work.push_back(std::move(right));
  }
  return ok();
}

// max_{j <= order} sup_B |f^(j)| as an enclosure.
RationalInterval cd_norm(const UPoly& f, unsigned order, const Rational& a, const Rational& b, const Rational& tol) {
  RationalInterval out(Rational(0));
  UPoly g = f;
  for (unsigned j = 0; j <= order; ++j) {
    const RationalInterval s = g.is_zero() ? RationalInterval(Rational(0)) : sup_norm(g, a, b, tol);
    out = {std::max<Rational>(out.lo, s.lo), std::max<Rational>(out.hi, s.hi)};
    g = g.derivative();
  }
  return out;
}

}  // namespace

LegalityVerdict avoids(const Deletion& deletion, const Box& box) {
  if (deletion.thickness <= 0) return bad(Violation::BadDeletion, "deletion thickness must be positive");
  if (deletion.hyperplane) return avoids_hyperplane(*deletion.hyperplane, deletion.thickness, box);
  if (deletion.f.is_zero()) return bad(Violation::BadDeletion, "deletion polynomial is zero");
  if (deletion.f.variables() != static_cast<unsigned>(box.dim()))
    return bad(Violation::BadDeletion, "deletion has the wrong number of variables");
  if (box.dim() == 1) return avoids_univariate(deletion.f, deletion.thickness, box);
  return avoids_multivariate(deletion.f, deletion.thickness, box);
}

LegalityVerdict legal_deletion(const GameState& state, const Deletion& d) {
  const auto& cfg = state.config;
  const unsigned k = state.current().dim();
  if (d.kind != cfg.kind) return bad(Violation::BadDeletion, "deletion kind does not match the game");
  if (d.thickness != state.thickness()) return bad(Violation::BadDeletion, "thickness must equal beta rho_n");
  if (d.f.is_zero()) return bad(Violation::BadDeletion, "deletion polynomial is zero");
  if (d.f.variables() != k) return bad(Violation::BadDeletion, "deletion has the wrong number of variables");
  switch (cfg.kind) {
    case GameKind::Hyperplane:
      if (!d.hyperplane || d.hyperplane->w.size() != static_cast<Eigen::Index>(k))
        return bad(Violation::BadDeletion, "hyperplane game needs an affine functional on R^k");
      if (d.hyperplane->w.isZero()) return bad(Violation::BadDeletion, "hyperplane with w = 0");
      return ok();
    case GameKind::AlgebraicSet:
      if (d.f.degree() > cfg.D)
        return bad(Violation::BadDeletion, "degree " + std::to_string(d.f.degree()) + " exceeds D");
      return ok();
    case GameKind::Levelset: {
      if (k != 1) return bad(Violation::Unknown, "levelset bounds are only decidable for k = 1");
      const UPoly f(d.f);
      const Box b = state.current().box();
      Rational tol(1, 1 << 20);
      for (int round = 0; round < 4; ++round, tol /= Integer(1) << 20) {
        const auto high = cd_norm(f, cfg.D + 1, b.lo(0), b.hi(0), tol);
        const auto low = cd_norm(f, cfg.D, b.lo(0), b.hi(0), tol);
        if (high.hi <= cfg.C1 * low.lo) return ok();
        if (high.lo > cfg.C1 * low.hi)
          return bad(Violation::BadDeletion, "||f||_{C^(D+1)} exceeds C1 ||f||_{C^D} on the ball");
      }
      return bad(Violation::Unknown, "could not decide the levelset norm bound");
    }
  }
  return ok();
}

LegalityVerdict legal_move(const GameState& state, const Ball& proposed) {
  if (!state.deletion_pending()) throw InvalidArgument("legal_move needs a pending deletion");
  const Ball& cur = state.current();
  if (proposed.dim() != cur.dim()) return bad(Violation::Containment, "ball has the wrong dimension");
  const Rational min_radius = state.config.beta * cur.radius;
  if (state.config.mode == GameMode::Simulation ? proposed.radius != min_radius : proposed.radius < min_radius)
    return bad(Violation::Radius, "radius " + to_string(proposed.radius) + " violates rho_{n+1} vs beta rho_n = " +
                                      to_string(min_radius));
  if (!cur.contains(proposed)) return bad(Violation::Containment, "ball is not inside B_n");
  return avoids(state.deletions.back(), proposed.box());
}

Deletion dummy_deletion(const GameState& state) {
  const Ball& b = state.current();
  const auto k = static_cast<Eigen::Index>(b.dim());
  AffineFunctional h;
  h.w = IntegerVector::Zero(k);
  h.w(0) = 1;
  h.b = ceil(b.center(0) + 10 * b.radius);
  Deletion d = state.config.kind == GameKind::Hyperplane
                   ? Deletion::from_hyperplane(h, state.thickness())
                   : Deletion::from_polynomial(state.config.kind, h.to_polynomial(), state.thickness());
  d.dummy = true;
  return d;
}

AliceStrategy alice_noop() {
  return [](const GameState& s) { return dummy_deletion(s); };
}

namespace {

// Degree-1 polynomial in k variables as a primitive integer functional.
AffineFunctional affine_from(const Polynomial& f) {
  const unsigned k = f.variables();
  RationalVector w = RationalVector::Zero(k);
  Rational c = f.coefficient(MultiIndex::zero(k));
  for (unsigned i = 0; i < k; ++i) w(i) = f.coefficient(MultiIndex::unit(k, i));
  Integer den = denominator(c);
  for (unsigned i = 0; i < k; ++i) den = lcm(den, denominator(w(i)));
  AffineFunctional h;
  h.w.resize(k);
  Integer g = numerator(c * den);
  for (unsigned i = 0; i < k; ++i) {
    h.w(i) = numerator(w(i) * den);
    g = gcd(g, h.w(i));
  }
  h.b = -numerator(c * den) / g;
  for (unsigned i = 0; i < k; ++i) h.w(i) /= g;
  return h;
}

}  // namespace

AliceStrategy alice_simplex(Chart chart, Rational kappa, std::uint64_t budget) {
  return [chart = std::move(chart), kappa = std::move(kappa), budget](const GameState& s) -> Deletion {
    const Ball& b = s.current();
    if (b.dim() != chart.k()) throw InvalidArgument("chart parameter dimension differs from the game dimension");
    if (2 * b.radius > 1) return dummy_deletion(s);
    const auto S = collect_S(chart, {b.center, 2 * b.radius, kappa}, budget);
    if (S.empty()) return dummy_deletion(s);
    std::vector<RationalPoint> pts;
    for (const auto& r : S) pts.push_back(r.point);
    const auto rep = hyperplane_containment(pts, chart.d());
    if (!rep.passed) {
      std::string msg = "S at move " + std::to_string(s.n()) + " spans R^d: det " +
                        to_string(rep.failure->determinant) + " over";
      for (const auto& p : rep.failure->simplex) msg += " " + to_string(p);
      throw SimplexViolation(msg);
    }
    const AffineFunctional& L = *rep.hyperplane;
    // f(t) = w . Psi(t) - b, cleared of the common denominator.
    Polynomial f = chart.denominator() * Rational(-L.b);
    for (unsigned i = 0; i < chart.d(); ++i)
      if (L.w(i) != 0) f += chart.numerators()[i] * Rational(L.w(i));
    if (f.is_zero()) throw Error("pullback of the simplex hyperplane vanishes identically");
    if (s.config.kind == GameKind::Hyperplane) {
      if (f.degree() != 1) throw InvalidArgument("hyperplane game needs a chart whose pullbacks are affine");
      return Deletion::from_hyperplane(affine_from(f), s.thickness());
    }
    return Deletion::from_polynomial(s.config.kind, std::move(f), s.thickness());
  };
}

namespace {

std::vector<Ball> grid_balls(const GameState& s, unsigned subdivisions) {
  const Ball& b = s.current();
  const Rational r = s.config.beta * b.radius;
  const unsigned M = subdivisions ? subdivisions : static_cast<unsigned>(ceil(2 / s.config.beta).convert_to<long>());
  const unsigned k = b.dim();
  std::vector<Ball> out;
  std::vector<unsigned> idx(k, 0);
  const Rational step = (2 * b.radius - 2 * r) / M;
  for (;;) {
    RationalVector c(k);
    for (unsigned i = 0; i < k; ++i) c(i) = b.center(i) - b.radius + r + step * idx[i];
    out.emplace_back(std::move(c), r);
    unsigned i = 0;
    while (i < k && idx[i] == M) idx[i++] = 0;
    if (i == k) break;
    ++idx[i];
  }
  return out;
}

Rational max_dist(const RationalVector& a, const RationalVector& b) {
  Rational m = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max<Rational>(m, abs(a(i) - b(i)));
  return m;
}

}  // namespace

BobStrategy bob_greedy(std::vector<RationalVector> lures, unsigned subdivisions) {
  struct Memo {
    std::size_t processed = 0;
    std::vector<bool> excluded;
  };
  auto memo = std::make_shared<Memo>();
  return [lures = std::move(lures), subdivisions, memo](const GameState& s) -> std::optional<Ball> {
    if (memo->processed > s.deletions.size() || memo->excluded.size() != lures.size()) {
      memo->processed = 0;
      memo->excluded.assign(lures.size(), false);
    }
    for (; memo->processed < s.deletions.size(); ++memo->processed) {
      const Deletion& d = s.deletions[memo->processed];
      for (std::size_t i = 0; i < lures.size(); ++i)
        if (!memo->excluded[i] && !avoids(d, Box::ball(lures[i], 0)).legal) memo->excluded[i] = true;
    }
    const auto grid = grid_balls(s, subdivisions);
    std::vector<std::pair<Rational, std::size_t>> order;
    order.reserve(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::optional<Rational> best;
      for (std::size_t i = 0; i < lures.size(); ++i) {
        if (memo->excluded[i]) continue;
        const Rational dd = max_dist(grid[g].center, lures[i]);
        if (!best || dd < *best) best = dd;
      }
      order.emplace_back(best.value_or(Rational(0)), g);
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [key, g] : order)
      if (legal_move(s, grid[g]).legal) return grid[g];
    return std::nullopt;
  };
}

BobStrategy bob_random(std::uint64_t seed, unsigned subdivisions) {
  return [seed, subdivisions](const GameState& s) -> std::optional<Ball> {
    std::vector<Ball> legal;
    for (auto& b : grid_balls(s, subdivisions))
      if (legal_move(s, b).legal) legal.push_back(std::move(b));
    if (legal.empty()) return std::nullopt;
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (s.n() + 1)));
    return legal[std::uniform_int_distribution<std::size_t>(0, legal.size() - 1)(rng)];
  };
}

GameResult play(const GameConfig& config, const AliceStrategy& alice, const BobStrategy& bob) {
  if (config.beta <= 0 || config.beta > 1) throw InvalidArgument("beta must lie in (0, 1]");
  if (config.initial.dim() == 0) throw InvalidArgument("initial ball is missing");
  if (config.initial.radius <= 0) throw InvalidArgument("initial radius must be positive");
  GameResult res;
  res.state.config = config;
  res.state.balls.push_back(config.initial);
  res.moves.push_back({0, Player::Bob, config.initial, ok()});
  for (unsigned n = 0; n < config.depth; ++n) {
    Deletion a = alice(res.state);
    const auto va = legal_deletion(res.state, a);
    res.moves.push_back({n, Player::Alice, a, va});
    if (!va.legal) throw IllegalMoveBy(Player::Alice, "Alice at move " + std::to_string(n) + ": " + va.detail);
    res.state.deletions.push_back(std::move(a));
    const auto b = bob(res.state);
    if (!b) {
      res.outcome = Outcome::BobLost;
      break;
    }
    const auto vb = legal_move(res.state, *b);
    res.moves.push_back({n + 1, Player::Bob, *b, vb});
    if (!vb.legal) throw IllegalMoveBy(Player::Bob, "Bob at move " + std::to_string(n + 1) + ": " + vb.detail);
    res.state.balls.push_back(*b);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Transcripts

namespace {

Json ball_json(const Ball& b) {
  Json c = Json::array();
  for (Eigen::Index i = 0; i < b.center.size(); ++i) c.push_back(to_string(b.center(i)));
  return Json{{"center", c}, {"radius", to_string(b.radius)}};
}

Ball ball_from(const Json& j) {
  const auto& c = j.at("center");
  RationalVector v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_rational(c[i].get<std::string>());
  return Ball(v, parse_rational(j.at("radius").get<std::string>()));
}

Json deletion_json(const Deletion& d) {
  Json j{{"kind", to_string(d.kind)}};
  if (d.hyperplane) {
    Json w = Json::array();
    for (Eigen::Index i = 0; i < d.hyperplane->w.size(); ++i) w.push_back(to_string(d.hyperplane->w(i)));
    j["w"] = w;
    j["b"] = to_string(d.hyperplane->b);
  } else {
    Json terms = Json::array();
    for (const auto& [alpha, c] : d.f.terms()) {
      Json e = Json::array();
      for (unsigned i = 0; i < d.f.variables(); ++i) e.push_back(alpha[i]);
      terms.push_back(Json::array({e, to_string(c)}));
    }
    j["variables"] = d.f.variables();
    j["terms"] = terms;
  }
  j["thickness"] = to_string(d.thickness);
  j["dummy"] = d.dummy;
  return j;
}

Deletion deletion_from(const Json& j) {
  const GameKind kind = parse_game_kind(j.at("kind").get<std::string>());
  const Rational eps = parse_rational(j.at("thickness").get<std::string>());
  Deletion d;
  if (j.contains("w")) {
    AffineFunctional h;
    const auto& w = j.at("w");
    h.w.resize(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) h.w(static_cast<Eigen::Index>(i)) = parse_integer(w[i].get<std::string>());
    h.b = parse_integer(j.at("b").get<std::string>());
    d = Deletion::from_hyperplane(h, eps);
    d.kind = kind;
  } else {
    const unsigned k = j.at("variables").get<unsigned>();
    Polynomial f(k);
    for (const auto& t : j.at("terms")) {
      std::vector<unsigned> e = t.at(0).get<std::vector<unsigned>>();
      if (e.size() != k) throw InvalidArgument("transcript term has the wrong arity");
      f.add_term(MultiIndex(std::move(e)), parse_rational(t.at(1).get<std::string>()));
    }
    d.kind = kind;
    d.f = std::move(f);
    d.thickness = eps;
  }
  d.dummy = j.at("dummy").get<bool>();
  return d;
}

Json verdict_json(const LegalityVerdict& v) {
  Json j{{"legal", v.legal}, {"violation", to_string(v.violation)}};
  if (!v.legal) j["detail"] = v.detail;
  return j;
}

Json config_json(const GameConfig& c) {
  return Json{{"record", "config"},
              {"kind", to_string(c.kind)},
              {"mode", c.mode == GameMode::Simulation ? "simulation" : "tournament"},
              {"beta", to_string(c.beta)},
              {"D", c.D},
              {"C1", to_string(c.C1)},
              {"depth", c.depth},
              {"chart", c.chart},
              {"kappa", to_string(c.kappa)},
              {"seed", c.seed},
              {"initial", ball_json(c.initial)}};
}

GameConfig config_from(const Json& j) {
  GameConfig c;
  c.kind = parse_game_kind(j.at("kind").get<std::string>());
  const auto mode = j.at("mode").get<std::string>();
  if (mode != "simulation" && mode != "tournament") throw InvalidArgument("unknown game mode '" + mode + "'");
  c.mode = mode == "simulation" ? GameMode::Simulation : GameMode::Tournament;
  c.beta = parse_rational(j.at("beta").get<std::string>());
  c.D = j.at("D").get<unsigned>();
  c.C1 = parse_rational(j.at("C1").get<std::string>());
  c.depth = j.at("depth").get<unsigned>();
  c.chart = j.at("chart").get<std::string>();
  c.kappa = parse_rational(j.at("kappa").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.initial = ball_from(j.at("initial"));
  return c;
}

}  // namespace

std::string transcript(const GameResult& result) {
  std::string out = config_json(result.state.config).dump() + "\n";
  for (const auto& m : result.moves) {
    Json j{{"record", "move"}, {"n", m.n}, {"player", to_string(m.player)}};
    if (const auto* b = std::get_if<Ball>(&m.move)) {
      j["ball"] = ball_json(*b);
    } else {
      j["deletion"] = deletion_json(std::get<Deletion>(m.move));
    }
    j["verdict"] = verdict_json(m.verdict);
    out += j.dump() + "\n";
  }
  Json end{{"record", "outcome"},
           {"outcome", to_string(result.outcome)},
           {"moves", result.moves.size()},
           {"final", ball_json(result.final_ball())}};
  out += end.dump() + "\n";
  return out;
}

ReplayReport replay(const std::string& text) {
  ReplayReport rep;
  std::istringstream in(text);
  std::string line;
  std::vector<Json> lines;
  try {
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(Json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    rep.detail = std::string("transcript is not line-delimited JSON: ") + e.what();
    return rep;
  }
  if (lines.size() < 3 || lines.front().value("record", "") != "config" || lines.back().value("record", "") != "outcome") {
    rep.detail = "transcript needs a config line, moves and an outcome line";
    return rep;
  }
  GameResult res;
  try {
    res.state.config = config_from(lines.front());
    bool valid = true;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      const Json& j = lines[i];
      const auto player = j.at("player").get<std::string>();
      const auto n = j.at("n").get<unsigned>();
      const bool rec_legal = j.at("verdict").at("legal").get<bool>();
      const auto rec_violation = j.at("verdict").at("violation").get<std::string>();
      MoveRecord m;
      m.n = n;
      if (player == "bob") {
        m.player = Player::Bob;
        const Ball b = ball_from(j.at("ball"));
        if (res.state.balls.empty()) {
          if (!(b == res.state.config.initial)) throw InvalidArgument("first ball differs from the configured B_0");
          m.verdict = ok();
        } else {
          m.verdict = legal_move(res.state, b);
        }
        m.move = b;
        if (m.verdict.legal) res.state.balls.push_back(b);
      } else if (player == "alice") {
        m.player = Player::Alice;
        if (res.state.balls.empty() || res.state.deletion_pending())
          throw InvalidArgument("Alice moved out of turn");
        Deletion d = deletion_from(j.at("deletion"));
        m.verdict = legal_deletion(res.state, d);
        if (m.verdict.legal) res.state.deletions.push_back(d);
        m.move = std::move(d);
      } else {
        throw InvalidArgument("unknown player '" + player + "'");
      }
      if (m.verdict.legal != rec_legal || to_string(m.verdict.violation) != rec_violation) {
        valid = false;
        rep.detail = "move " + std::to_string(i) + " re-checks as " + to_string(m.verdict.violation);
      }
      if (!m.verdict.legal) valid = false;
      res.moves.push_back(std::move(m));
    }
    const auto outcome = lines.back().at("outcome").get<std::string>();
    res.outcome = outcome == "bob-lost" ? Outcome::BobLost : Outcome::Completed;
    rep.valid = valid;
  } catch (const std::exception& e) {
    rep.detail = std::string("replay failed: ") + e.what();
    return rep;
  }
  rep.moves = res.moves.size();
  rep.byte_identical = transcript(res) == text;
  if (!rep.byte_identical && rep.detail.empty()) rep.detail = "re-serialized transcript differs from the input";
  rep.result = std::move(res);
  return rep;
}

LegalityVerdict verify_disjointness(const GameResult& result) {
  const auto& balls = result.state.balls;
  const auto& dels = result.state.deletions;
  const auto& cfg = result.state.config;
  for (std::size_t m = 1; m < balls.size(); ++m) {
    if (!balls[m - 1].contains(balls[m]))
      return bad(Violation::Containment, "B_" + std::to_string(m) + " is not inside B_" + std::to_string(m - 1));
    const Rational want = cfg.beta * balls[m - 1].radius;
    if (cfg.mode == GameMode::Simulation ? balls[m].radius != want : balls[m].radius < want)
      return bad(Violation::Radius, "radius of B_" + std::to_string(m));
  }
  for (std::size_t n = 0; n < dels.size(); ++n) {
    for (std::size_t m = n + 1; m < balls.size(); ++m) {
      const auto v = avoids(dels[n], balls[m].box());
      if (!v.legal) {
        return bad(v.violation, "B_" + std::to_string(m) + " meets the thickened A_" + std::to_string(n) + ": " +
                                    v.detail);
      }
    }
  }
  return ok();
}

BaCheck ba_check(const Chart& chart, const Ball& final_ball, const Integer& T, std::uint64_t budget) {
  if (final_ball.dim() != chart.k()) throw InvalidArgument("final ball has the wrong dimension");
  BaCheck out;
  out.height_bound = T;
  out.exponent = dirichlet_constants(chart.k(), chart.d()).c_kd;
  const auto img = chart.image_enclosure(intervals_of(final_ball.box()));
  std::optional<Rational> best;
  for (const auto& r : enumerate_rationals(chart, T, std::nullopt, budget)) {
    ++out.checked;
    Rational lb = 0;
    for (Eigen::Index i = 0; i < r.point.dim(); ++i)
      lb = std::max<Rational>(lb, distance(img[static_cast<std::size_t>(i)], r.point.coordinate(i)));
    const Rational v = lb * power_enclosure(r.point.height(), out.exponent).lo;
    if (!best || v < *best) {
      best = v;
      out.witness = r;
    }
  }
  out.constant = best.value_or(Rational(0));
  return out;
}

std::vector<Integer> determined_partial_quotients(const Ball& final_ball) {
  if (final_ball.dim() != 1) throw InvalidArgument("partial quotients need k = 1");
  const auto a = continued_fraction(final_ball.center(0) - final_ball.radius);
  const auto b = continued_fraction(final_ball.center(0) + final_ball.radius);
  std::vector<Integer> out;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()) && a[i] == b[i]; ++i) out.push_back(a[i]);
  if (!out.empty()) out.pop_back();  // the last shared term may still change
  return out;
}

}  // namespace intrinsic
