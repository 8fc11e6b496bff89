#pragma once

// The beta-hyperplane game and its algebraic-set and levelset variants on
// R^k, with exact legality checks, Alice's simplex strategy, test adversaries
// for Bob, replayable transcripts and a post-hoc badly-approximable check of
// the final ball.

#include "intrinsic/chart.hpp"
#include "intrinsic/simplex.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace intrinsic {

enum class Player { Alice, Bob };
std::string to_string(Player p);

class IllegalMoveBy : public Error {
 public:
  IllegalMoveBy(Player player, const std::string& what) : Error(what), player(player) {}
  Player player;
};

/// Closed max-norm ball, i.e. the box [center - radius, center + radius]^k.
struct Ball {
  RationalVector center;
  Rational radius;

  Ball() = default;
  Ball(RationalVector c, Rational r);
  unsigned dim() const { return static_cast<unsigned>(center.size()); }
  Box box() const { return Box::ball(center, radius); }
  bool contains(const Ball& other) const;
  friend bool operator==(const Ball& a, const Ball& b) { return a.center == b.center && a.radius == b.radius; }
};

enum class GameKind { Hyperplane, AlgebraicSet, Levelset };
std::string to_string(GameKind k);
GameKind parse_game_kind(std::string_view s);

enum class GameMode {
  Simulation,  // rho_{n+1} = beta rho_n exactly
  Tournament   // rho_{n+1} >= beta rho_n
};

/// Alice's move: delete the closed `thickness`-neighborhood of the zero set of
/// `f` (in the hyperplane game, of the hyperplane w . x = b).
struct Deletion {
  GameKind kind = GameKind::AlgebraicSet;
  Polynomial f;                                // k variables
  std::optional<AffineFunctional> hyperplane;  // set for GameKind::Hyperplane
  Rational thickness;
  bool dummy = false;  // placed far outside the current ball

  static Deletion from_hyperplane(AffineFunctional h, const Rational& thickness);
  static Deletion from_polynomial(GameKind kind, Polynomial f, const Rational& thickness);
};

std::string to_string(const Deletion& d);

struct GameConfig {
  GameKind kind = GameKind::AlgebraicSet;
  GameMode mode = GameMode::Simulation;
  Rational beta = Rational(1, 8);
  unsigned D = 1;     // degree bound (algebraic-set and levelset games)
  Rational C1 = 2;    // levelset constant in ||f||_{C^{D+1}} <= C1 ||f||_{C^D}
  unsigned depth = 25;
  Ball initial;
  std::string chart;  // chart specifier, for reports and replay
  Rational kappa;     // Alice's simplex constant, for reports and replay
  std::uint64_t seed = 0;
};

enum class Violation { None, Containment, Radius, Deleted, Unknown, BadDeletion };
std::string to_string(Violation v);

struct LegalityVerdict {
  bool legal = true;
  Violation violation = Violation::None;
  std::string detail;
};

struct GameState {
  GameConfig config;
  std::vector<Ball> balls;           // B_0, ..., B_n
  std::vector<Deletion> deletions;   // A_0, ..., A_{n-1}, or A_n while Bob is to move

  unsigned n() const { return static_cast<unsigned>(balls.size()) - 1; }
  const Ball& current() const { return balls.back(); }
  bool deletion_pending() const { return deletions.size() == balls.size(); }
  Rational thickness() const { return config.beta * current().radius; }
};

/// Exact check of Bob's proposal against B_n and the pending deletion A_n.
/// Algebraic deletions with k >= 2 use certified interval arithmetic with
/// subdivision and report Violation::Unknown when nothing is certified.
LegalityVerdict legal_move(const GameState& state, const Ball& proposed);

/// Checks Alice's deletion: nonzero data, the degree bound, and for the
/// levelset game the bound ||f||_{C^{D+1}, B_n} <= C1 ||f||_{C^D, B_n} (k = 1).
LegalityVerdict legal_deletion(const GameState& state, const Deletion& deletion);

/// Whether the closed thickened deletion certainly misses the box (exact for
/// hyperplanes and k = 1).
LegalityVerdict avoids(const Deletion& deletion, const Box& box);

/// Far-away deletion that constrains nothing.
Deletion dummy_deletion(const GameState& state);

using AliceStrategy = std::function<Deletion(const GameState&)>;
/// Returns the next ball, or nothing if Bob cannot (or will not) move.
using BobStrategy = std::function<std::optional<Ball>(const GameState&)>;

AliceStrategy alice_noop();

/// Deletes the beta rho_n neighborhood of Psi^{-1}(L_n), L_n the hyperplane
/// through S_{s_n, 2 rho_n}. Dummy moves while 2 rho_n > 1. Throws
/// SimplexViolation when S is not contained in a hyperplane.
AliceStrategy alice_simplex(Chart chart, Rational kappa, std::uint64_t budget = kDefaultBudget);

/// Largest legal ball (radius beta rho_n) with center on a grid of
/// `subdivisions` steps per axis, closest to the nearest lure not yet inside
/// a deleted neighborhood. Ties go to the lowest grid index.
BobStrategy bob_greedy(std::vector<RationalVector> lures, unsigned subdivisions = 0);

/// Uniformly random legal grid ball (seeded).
BobStrategy bob_random(std::uint64_t seed, unsigned subdivisions = 0);

struct MoveRecord {
  unsigned n = 0;
  Player player = Player::Bob;
  std::variant<Ball, Deletion> move;
  LegalityVerdict verdict;
};

enum class Outcome { Completed, BobLost };
std::string to_string(Outcome o);

struct GameResult {
  GameState state;
  std::vector<MoveRecord> moves;
  Outcome outcome = Outcome::Completed;
  const Ball& final_ball() const { return state.current(); }
};

/// Plays `config.depth` rounds. Throws IllegalMoveBy when a strategy produces
/// an illegal move.
GameResult play(const GameConfig& config, const AliceStrategy& alice, const BobStrategy& bob);

/// One JSON object per line: a config header, every move, and the outcome.
std::string transcript(const GameResult& result);

struct ReplayReport {
  bool valid = false;           // every move re-checks to the recorded verdict, all legal
  bool byte_identical = false;  // re-serialization reproduces the input exactly
  std::size_t moves = 0;
  std::string detail;
  std::optional<GameResult> result;
};

ReplayReport replay(const std::string& transcript_text);

/// Post-hoc: every later ball misses every earlier thickened deletion.
LegalityVerdict verify_disjointness(const GameResult& result);

struct BaCheck {
  Integer height_bound;
  std::size_t checked = 0;
  Rational constant;  // certified lower bound of min_r dist(Psi(final ball), r) height(r)^c
  Rational exponent;  // c = c(k, d)
  std::optional<IntrinsicRational> witness;
  bool positive() const { return constant > 0; }
};

/// Lower bound over intrinsic rationals r of height <= T of
/// dist(Psi(B), r) * height(r)^c(k,d), with B the final ball.
BaCheck ba_check(const Chart& chart, const Ball& final_ball, const Integer& T, std::uint64_t budget = kDefaultBudget);

/// Common prefix of the continued fractions of the final ball's endpoints
/// (k = 1): the partial quotients determined by the game.
std::vector<Integer> determined_partial_quotients(const Ball& final_ball);

}  // namespace intrinsic
