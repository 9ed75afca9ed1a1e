#pragma once

#include "windtree/billiard.hpp"
#include "windtree/float_billiard.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace windtree {

/// A direction slope (rise over run, positive) known either exactly or to a
/// given number of significant bits. Non-exact directions are simulated in
/// floating point with a quad shadow; exact ones with rational arithmetic.
struct Theta {
    Rational value;
    int precision_bits = 0;  ///< 0 for an exact rational direction

    bool exact() const { return precision_bits == 0; }
    /// "num/den" when exact, otherwise the hexadecimal double with "@bits".
    std::string to_string() const;

    static Theta exact_slope(const Slope& s);
    /// The continued fraction [a0; a1, a2, ...] evaluated exactly and
    /// declared accurate to `bits` bits (a truncation of an irrational).
    static Theta continued_fraction(const std::vector<long>& terms, int bits);
    /// sqrt(n) - floor(sqrt(n)) style constants: (sqrt(n) + shift) / scale,
    /// rounded to `bits` bits.
    static Theta quadratic(long n, long shift, long scale, int bits);
    /// "u/v" (exact), a decimal such as "0.6180339887", "cf:0,1,1,1" (a
    /// continued fraction) or "sqrt:n,shift,scale"; all but "u/v" are
    /// declared accurate to `bits` bits.
    static Theta parse(std::string_view text, int bits);
};

// ---------------------------------------------------------------------------
// Starting points on the boundary of the obstacle at the origin.

struct BoundaryStart {
    Side side = Side::Top;
    Rational fraction;  ///< position along the side, in (0, 1)
    Orientation orientation;
};

/// "top:1/3:++" style text, and back.
std::string to_string(const BoundaryStart& b);
BoundaryStart parse_boundary_start(std::string_view text);

/// The first start among fractions 1/3, 2/7, 3/11, ... of the top side of the
/// origin obstacle (orientation ++) whose orbit avoids the corners; the
/// right side for the horizontal direction.
BoundaryStart regular_start(const Params& params, const Slope& slope);

/// Uniform in arc length on the boundary of the obstacle at the origin, with
/// the tangential sign of the direction drawn at random; reproducible from
/// the seed. Fractions have denominator 2^32.
std::vector<BoundaryStart> sample_boundary(const Params& params, int n, std::uint64_t seed);

BilliardState start_state(const Params& params, const Theta& theta, const BoundaryStart& b);
/// The exact state, for any slope including the axis directions.
BilliardState start_state(const Params& params, const Slope& slope, const BoundaryStart& b);

/// Runs f(0..n-1) on `jobs` threads; each index exactly once.
void parallel_for(int n, int jobs, const std::function<void(int)>& f);

// ---------------------------------------------------------------------------
// Recurrence.

struct RecurrenceSample {
    int id = 0;
    BoundaryStart start;
    std::string outcome;  ///< returned, no_return, escaped, singular, precision_abort
    std::int64_t first_return = -1;  ///< collisions until the origin obstacle is hit again
    Cell last_cell;                  ///< obstacle of the last collision simulated
    double length = 0;               ///< distance travelled
};

struct RecurrenceReport {
    Params params;
    Theta theta;
    int n_samples = 0;
    std::int64_t horizon = 0;
    std::uint64_t seed = 0;
    Rational returned_fraction;
    std::vector<RecurrenceSample> samples;
};

/// Fraction of boundary starts whose orbit hits the obstacle at the origin
/// again within `horizon` collisions.
RecurrenceReport recurrence_experiment(const Params& params, const Theta& theta, int n_samples,
                                       std::int64_t horizon, std::uint64_t seed, int jobs = 1);

/// CSV: sample_id, start_side, start_offset, outcome, first_return_collisions,
/// drift_m, drift_n, geometric_length.
void write_recurrence_csv(std::ostream& os, const RecurrenceReport& r);

// ---------------------------------------------------------------------------
// Diffusion.

struct DiffusionPoint {
    double t = 0;
    double dist = 0;
    double statistic = 0;
};

struct DiffusionReport {
    Params params;
    Theta theta;
    int k = 1;
    std::int64_t horizon = 0;
    std::uint64_t seed = 0;
    BoundaryStart start;
    double statistic = 0;  ///< sup of dist / prod log_j t over collision times
    std::vector<DiffusionPoint> witnesses;  ///< where the running sup increased
    /// Running statistic at collision counts 10, 100, ... up to the horizon.
    std::vector<std::pair<std::int64_t, double>> by_horizon;
    std::string stop;  ///< horizon, escaped, singular, precision_abort
};

/// prod_{j=1..k} log_j t, or nullopt where some iterated log is below 1.
std::optional<double> iterated_log_product(double t, int k);

/// Displacement statistic along the orbit of one boundary start (the
/// sample-th start drawn from the seed). Requires E' parameters unless
/// `allow_any_class` is set. Propagates PrecisionError.
DiffusionReport diffusion_experiment(const Params& params, const Theta& theta, int k, std::int64_t horizon,
                                     std::uint64_t seed, int sample = 0, bool allow_any_class = false);

/// n_starts independent runs; a start whose float orbit loses its shadow is
/// reported with stop = precision_abort and statistic 0.
std::vector<DiffusionReport> diffusion_ensemble(const Params& params, const Theta& theta, int k,
                                                std::int64_t horizon, std::uint64_t seed, int n_starts,
                                                int jobs = 1, bool allow_any_class = false);

/// CSV: t, dist, statistic (the witness points).
void write_diffusion_csv(std::ostream& os, const DiffusionReport& r);

// ---------------------------------------------------------------------------
// Diophantine approximation by good directions.

struct Approximant {
    BigInt p;  ///< rise
    BigInt q;  ///< run
    Rational quality;  ///< q^2 |theta - p/q|
};

/// Convergents and intermediate fractions of theta that are good directions
/// (good one-cylinder directions for E, one-cylinder directions of Y for E'),
/// in order of increasing denominator; at most n_terms of them. Throws
/// PrecisionError if the declared precision of theta runs out first, and
/// DomainError for parameters in neither class.
std::vector<Approximant> approximation_search(const Theta& theta, const Params& params, int n_terms);

inline constexpr int kMaxIntermediatePerLevel = 64;

// ---------------------------------------------------------------------------
// Stability of periodic orbits under perturbation of (a, b).

struct StabilityProbe {
    Params params;
    Slope slope;  ///< direction of the perturbed orbit (closing the unfolded sequence)
    OutcomeKind outcome = OutcomeKind::Undetermined;
    bool same_combinatorics = false;
};

struct StabilityReport {
    bool passed = false;
    BoundaryStart start;
    std::int64_t period = 0;  ///< collisions per period at the base parameters
    std::vector<StabilityProbe> probes;
};

/// Collision sequence of one period: (side, obstacle offset from the start).
std::vector<std::pair<Side, Cell>> combinatorics(const BilliardState& start, const Params& params,
                                                 std::int64_t period);

/// Probes n_probes parameter pairs within max-distance delta of (a, b) on the
/// boundary of the delta box, transporting the start by side and fraction.
/// As in the unfolding argument, the perturbed orbit keeps the collision
/// sequence but not the exact slope: each probe runs in the direction that
/// closes the unfolded sequence at (a', b'), which tends to the base slope as
/// delta shrinks.
/// DomainError unless the base orbit from the start is periodic. The default
/// start is the first regular point among fractions 1/3, 2/7, 3/11, ... of
/// the top side of the origin obstacle, orientation ++.
StabilityReport stability_check(const Params& params, const Slope& table_slope, const Rational& delta,
                                int n_probes, std::optional<BoundaryStart> start = std::nullopt);

/// Halves delta until stability_check passes, at most max_halvings times.
std::optional<Rational> find_stable_delta(const Params& params, const Slope& table_slope, Rational delta,
                                          int n_probes, int max_halvings = 20);

} // namespace windtree
