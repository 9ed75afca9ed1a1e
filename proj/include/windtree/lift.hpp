#pragma once

#include "windtree/billiard.hpp"
#include "windtree/origami.hpp"

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace windtree {

// The surface Y_{a,b} is the unit torus minus the centred a x b hole, with
// the hole's opposite sides glued. A billiard phase point (x, y) with
// orientation (sx, sy) projects to the point (sx x, sy y) mod Z^2 of Y, moving
// in the positive direction. The four sign classes are mirror images of one
// another under the symmetries of the table, so orientation ++ is enough.

/// Table point (in the cell of the origin, not inside an obstacle) of a point
/// of the scaled L-origami.
PointQ table_point(const Params& params, const MarkedPoint& p);

/// The lift of a Y-cylinder to the infinite cover closes after `factor` turns.
struct ClosesWithFactor {
    std::int64_t factor = 0;
    friend bool operator==(const ClosesWithFactor&, const ClosesWithFactor&) = default;
};

/// The lift is an infinite strip, translated by `drift` per repeat. Parallel
/// leaves of one cylinder may report drifts differing in component signs.
struct Strip {
    Cell drift;
    friend bool operator==(const Strip&, const Strip&) = default;
};

using LiftBehavior = std::variant<ClosesWithFactor, Strip>;

std::string to_string(const LiftBehavior& b);

struct CylinderLift {
    LiftBehavior behavior;
    std::vector<PointQ> starts;                 ///< table points actually classified
    std::vector<TrajectoryOutcome> outcomes;    ///< one per start
    int retries = 0;                            ///< singular starts replaced
};

struct LiftReport {
    Slope direction;  ///< table frame
    CylinderDecomposition y_decomposition;
    std::vector<CylinderLift> cylinders;
    bool strongly_parabolic = false;

    int strip_count() const;
};

inline constexpr int kStartsPerCylinder = 3;
inline constexpr int kMaxStartRetries = 5;

/// Classifies, for every cylinder of Y_{a,b} in the table direction, the
/// billiard orbits through a few interior points of that cylinder. Starts
/// whose orbit meets a corner are replaced by perturbed ones, up to
/// kMaxStartRetries times per cylinder. Cylinders are handled in parallel.
/// Throws DomainError for axis directions and logic_error if starts in one
/// cylinder disagree.
LiftReport lift_direction(const Params& params, const Slope& table_slope,
                          std::int64_t max_collisions = kDefaultMaxCollisions);

/// Looks for a closed regular leaf, in the given direction, through two of the
/// regular Weierstrass points A, B, C, and classifies the billiard orbit
/// through A. True iff it escapes. Throws DomainError if there is no such leaf.
bool abc_strip_check(const Params& params, const Slope& table_slope,
                     std::int64_t max_collisions = kDefaultMaxCollisions);

/// Permutation of the Weierstrass labels induced by an affine map whose
/// derivative is the given word. Throws DomainError if the word does not lie
/// in the Veech group (the image surface is not isomorphic to the original).
std::map<std::string, std::string> weierstrass_permutation(const Origami& o, std::string_view word);

/// Orbits of the Weierstrass points of Y_{1/2,1/2} under its affine group,
/// generated by the words "TT" and "S". DomainError for other parameters.
std::vector<std::set<std::string>> wpoint_orbit_partition(const Params& params);

} // namespace windtree
