#pragma once

#include "windtree/params.hpp"
#include "windtree/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace windtree {

enum class Side { Left, Right, Bottom, Top };

std::string to_string(Side s);
Side parse_side(std::string_view text);
inline bool is_vertical_side(Side s) { return s == Side::Left || s == Side::Right; }

/// Lattice cell (m, n) of an obstacle; the obstacle is
/// [m - a/2, m + a/2] x [n - b/2, n + b/2].
struct Cell {
    std::int64_t m = 0;
    std::int64_t n = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Phase point right after a collision: the particle sits on `side` of the
/// obstacle at `cell` and leaves with direction (sx * v, sy * u).
struct BilliardState {
    PointQ position;
    Side side = Side::Top;
    Cell cell;
    Orientation orientation;
    Slope slope;

    friend bool operator==(const BilliardState&, const BilliardState&) = default;
};

/// Collision datum modulo the Z^2 symmetry of the table.
struct ReducedState {
    Side side = Side::Top;
    Rational offset;  ///< distance from the low end of the side, in [0, side length]
    Orientation orientation;

    friend bool operator==(const ReducedState&, const ReducedState&) = default;
    friend auto operator<=>(const ReducedState&, const ReducedState&) = default;
};

ReducedState reduce(const BilliardState& s, const Params& params);

/// The ray ran exactly into an obstacle corner.
struct CornerHit {
    PointQ corner;
    Cell cell;
};

/// The ray never meets an obstacle (it runs in a corridor).
struct FreeFlight {};

using StepResult = std::variant<BilliardState, CornerHit, FreeFlight>;

/// Checks the state invariants (on the named side, pointing into the table,
/// not a corner). Throws DomainError on violation.
void validate_state(const BilliardState& s, const Params& params);

/// Next collision of the billiard flow, or the corner / corridor that ends it.
/// The slope must not be horizontal or vertical.
StepResult next_collision(const BilliardState& state, const Params& params);

/// First obstacle boundary met by the ray from `from` with the given direction.
/// On a side hit the returned state carries the reflected orientation.
/// `length` receives the parameter t of the hit (displacement t * (sx v, sy u)).
StepResult cast_ray(const PointQ& from, const Orientation& orientation, const Slope& slope,
                    const Params& params, Rational* length = nullptr);

/// Turns a point of the table (not inside an obstacle) and a direction into a
/// collision state on the same trajectory, by casting the ray backwards to the
/// previous collision. FreeFlight means the backward ray meets nothing.
StepResult launch(const PointQ& point, const Orientation& orientation, const Slope& slope,
                  const Params& params);

/// True if the point lies in the closed obstacle at some lattice cell.
bool inside_obstacle(const PointQ& p, const Params& params);

/// Builds the state on a side from the side, cell and relative offset in
/// [0,1] along the side (0 = left/bottom end).
BilliardState state_on_side(Side side, Cell cell, const Rational& fraction, const Orientation& orientation,
                            const Slope& slope, const Params& params);

enum class OutcomeKind { Periodic, Escaping, Singular, Undetermined };

std::string to_string(OutcomeKind k);

struct TrajectoryOutcome {
    OutcomeKind kind = OutcomeKind::Undetermined;
    std::int64_t combinatorial_length = 0;  ///< collisions in one repeat of the reduced orbit
    ArcLength geometric_length;             ///< length of that repeat
    Cell drift;                             ///< lattice translation per repeat
    std::int64_t pre_period = 0;            ///< collisions before entering the cycle
    std::optional<PointQ> corner;           ///< set for Singular
    bool corridor = false;                  ///< Escaping along an obstacle-free line
    std::int64_t collisions_simulated = 0;
};

inline constexpr std::int64_t kDefaultMaxCollisions = 1'000'000;

/// Classifies the trajectory through `start` as Periodic, Escaping (with the
/// drift of its repeating pattern), Singular or Undetermined. Horizontal and
/// vertical slopes are resolved analytically.
TrajectoryOutcome classify_trajectory(const BilliardState& start, const Params& params,
                                      std::int64_t max_collisions = kDefaultMaxCollisions);

/// Same, for a trajectory given by an arbitrary table point and direction.
TrajectoryOutcome classify_from_point(const PointQ& point, const Orientation& orientation,
                                      const Slope& slope, const Params& params,
                                      std::int64_t max_collisions = kDefaultMaxCollisions);

/// Polyline of collision points; `singular` is set when the orbit was cut
/// short by a corner (the corner is then the last point), `free_flight` when
/// the particle left along a corridor.
struct Trace {
    std::vector<PointQ> points;
    std::vector<BilliardState> states;  ///< states[i] sits at points[i]
    bool singular = false;
    bool free_flight = false;
};

/// Start plus the next n_collisions collision points, in order.
Trace trace(const BilliardState& start, const Params& params, std::int64_t n_collisions);

/// Checks that the forward and backward orbits of a point at the midpoint
/// of a horizontal side (E-preimage) mirror each other through the vertical
/// line containing it; likewise for a vertical-side midpoint (F-preimage)
/// through the horizontal line. Compares the first n collisions each way.
/// Throws DomainError if `start` is not such a midpoint, or if a corner is hit.
bool symmetry_check(const BilliardState& start, const Params& params, std::int64_t n);

/// An a priori common denominator for every collision coordinate along the
/// orbit of `start`, built from 2q, 2s, u, v and the start denominators.
BigInt predicted_denominator_bound(const BilliardState& start, const Params& params);

/// Upper bound on the number of distinct reduced states of the orbit.
BigInt reduced_state_bound(const BilliardState& start, const Params& params);

} // namespace windtree
