#pragma once

#include "windtree/params.hpp"
#include "windtree/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace windtree {

/// A labelled point of a square-tiled surface: cell index plus coordinates
/// inside the unit cell, normalized to [0,1)^2.
struct MarkedPoint {
    std::string label;
    int cell = 0;
    Rational x;
    Rational y;

    friend bool operator==(const MarkedPoint&, const MarkedPoint&) = default;
};

/// Square-tiled surface: unit cells 0..n-1 glued by the right-neighbour
/// permutation sigma_h and the up-neighbour permutation sigma_v.
struct Origami {
    std::vector<int> sigma_h;
    std::vector<int> sigma_v;
    std::vector<MarkedPoint> marked_points;

    int n_cells() const { return static_cast<int>(sigma_h.size()); }
    friend bool operator==(const Origami&, const Origami&) = default;
};

/// Throws DomainError unless both maps are permutations of the same size and
/// generate a transitive group.
void validate_origami(const Origami& o);

std::vector<int> inverse_permutation(const std::vector<int>& p);

/// Vertices of the tiling. Every vertex is the bottom-left corner of at least
/// one cell; `multiplicity[k]` is the cone angle of vertex k divided by 2 pi.
struct VertexData {
    std::vector<int> of_cell;       ///< vertex at the bottom-left corner of each cell
    std::vector<int> multiplicity;  ///< cone angle / 2 pi, per vertex
};

VertexData vertex_data(const Origami& o);

/// Orders of the zeros (multiplicity - 1 for each cone point), sorted
/// descending; {2} is the stratum H(2), {} a torus cover.
std::vector<int> stratum(const Origami& o);

/// Brings (cell, x, y) with x, y >= 0 back into [0,1)^2 by walking right and up.
MarkedPoint normalize_point(const Origami& o, MarkedPoint p);

/// Equality of points of the surface (corners compare by vertex).
bool same_point(const Origami& o, const VertexData& vd, const MarkedPoint& a, const MarkedPoint& b);

/// Applies a word over {T, S} and their inverses {t, s}, letter by letter
/// from left to right. T is the horizontal shear (x, y) -> (x + y, y); S the
/// quarter turn (x, y) -> (-y, x). Cells keep their indices, and marked points
/// are carried along by the affine map.
Origami sl2z_act(const Origami& o, std::string_view word);

/// Inverse word: reversed, with every letter inverted.
std::string inverse_word(std::string_view word);

/// Canonical labelling: lexicographically least relabelling over all choices
/// of the base cell (cells numbered in breadth-first order, right before up).
/// `relabel[c]` is the new index of cell c.
struct CanonicalForm {
    std::vector<int> sigma_h;
    std::vector<int> sigma_v;
    std::vector<int> relabel;
};

CanonicalForm canonical_form(const Origami& o);
bool isomorphic(const Origami& a, const Origami& b);

/// The hyperelliptic involution of a genus-two origami, as the cell map of a
/// rotation by pi: cell c goes to cell iota[c] with (x, y) -> (1 - x, 1 - y).
/// Found combinatorially (iota h iota = h^-1, iota v iota = v^-1) and kept only
/// if it has exactly six fixed points. Empty if there is no such map.
std::optional<std::vector<int>> hyperelliptic_involution(const Origami& o);

MarkedPoint apply_involution(const Origami& o, const std::vector<int>& iota, const MarkedPoint& p);

/// Fixed points of the involution: cell centres, edge midpoints, vertices.
std::vector<MarkedPoint> involution_fixed_points(const Origami& o, const std::vector<int>& iota);

// ---------------------------------------------------------------------------
// The surface Y_{a,b} as an L-shaped origami.

/// Integer-scaled Y_{a,b}: the q x s rectangle minus the p x r block at its
/// top-right corner, facing sides glued. Cells are numbered row by row from
/// the bottom; the bottom s - r rows have width q, the top r rows width q - p.
/// Marked points are the six Weierstrass points A..F.
Origami build_origami(const Params& params);

/// Cell index of the unit square [i, i+1] x [j, j+1] of the L-polygon.
int l_cell_index(const Params& params, std::int64_t i, std::int64_t j);

/// Point of the L-polygon (scaled coordinates) as a marked point.
MarkedPoint l_point(const Params& params, const std::string& label, const PointQ& p);

/// Inverse of l_point: coordinates on the L-polygon.
PointQ l_coordinates(const Params& params, const MarkedPoint& p);

struct WeierstrassSet {
    std::map<std::string, PointQ> points;  ///< label -> L-polygon coordinates
    int integer_count = 0;                  ///< points at lattice corners

    /// Point reduced to the torus R^2 / Z^2.
    PointQ torus_projection(const std::string& label) const;
};

/// The six Weierstrass points, each verified to be fixed by the
/// combinatorially computed involution. D is the singular corner.
WeierstrassSet locate_weierstrass(const Params& params);

enum class OrbitClass { OrbitA, OrbitB, NotApplicable };

std::string to_string(OrbitClass c);

struct OrbitInvariant {
    OrbitClass orbit = OrbitClass::NotApplicable;
    int integer_weierstrass = 0;
};

/// Number of Weierstrass points at vertices, and the orbit it identifies
/// (odd number of cells >= 5). Throws DomainError outside H(2).
OrbitInvariant orbit_invariant(const Origami& o);

// ---------------------------------------------------------------------------
// Cylinder decompositions.

struct Cylinder {
    std::int64_t circumference = 0;  ///< in units of the primitive direction vector
    std::int64_t height = 0;         ///< in rows of the re-tiled surface
    Rational modulus;                ///< height / circumference
    std::vector<int> cells;
    std::vector<std::string> waist_marked_points;  ///< marked points at half height
};

struct CylinderDecomposition {
    Slope direction;          ///< in the origami frame
    BigInt dir_x, dir_y;      ///< primitive direction vector (run, rise)
    std::string word;         ///< generator word sending the direction to horizontal
    Origami reduced;          ///< sl2z_act(original, word)
    std::vector<Cylinder> cylinders;
    std::vector<int> cylinder_of_cell;  ///< indices into cylinders, for cells of `reduced`
    std::vector<int> row_of_cell;       ///< row inside the cylinder, 0 at the bottom

    /// Height of a point of `reduced` above the bottom of its cylinder.
    Rational height_in_cylinder(const MarkedPoint& p) const;
};

/// Word over {T, t, S, s} taking the direction (run, rise) to the horizontal,
/// by the Euclidean algorithm.
std::string reduction_word(const Slope& slope);

/// Cylinders in the given origami-frame direction. A cylinder is bounded by
/// leaves through cone points; on a torus cover every vertex counts.
CylinderDecomposition decompose_direction(const Origami& o, const Slope& slope);

/// Table-frame slope u/v to the slope of the scaled L-origami: s u / (q v).
Slope scaled_slope(const Params& params, const Slope& table_slope);

CylinderDecomposition decompose_table_direction(const Params& params, const Slope& table_slope);

/// One cylinder with both E and F on its waist.
bool is_good_one_cylinder(const Params& params, const Slope& table_slope);

/// Squared empirical constant K^2 over all slopes p/q in (0,1] with
/// q <= slope_limit: the largest of (circumference / q)^2 and
/// (1 / (height * q))^2, with circumference and height measured in the flat
/// metric. Squares keep the value exact.
Rational cylinder_bounds_constant(const Origami& o, long slope_limit);

/// Good one-cylinder directions among the slopes of mediant_enumerate(limit).
std::vector<Slope> enumerate_good_directions(const Params& params, long denominator_limit);

// ---------------------------------------------------------------------------
// Straight-line flow on the surface.

struct FlowHit {
    std::string label;  ///< marked point reached, or "singularity"
    Rational time;      ///< in units of the primitive direction vector
};

/// Flows from the marked point `from` in the direction of `slope` (origami
/// frame) and returns the marked points met, in order, up to and including
/// the return to `from` or the first cone point. `max_time` bounds the search.
std::vector<FlowHit> flow_marked_hits(const Origami& o, const std::string& from, const Slope& slope,
                                      const Rational& max_time);

/// For a one-cylinder table direction: the flow from E meets F first, at half
/// the circumference, and comes back to E after one circumference.
bool e_to_f_half_period(const Params& params, const Slope& table_slope);

// ---------------------------------------------------------------------------
// Text form: n_cells, one "h v" line per cell, then "label cell x y" lines
// with exact num/den coordinates.

std::string serialize(const Origami& o);
Origami parse_origami(std::string_view text);

} // namespace windtree
