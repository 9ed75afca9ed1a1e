#pragma once

#include "windtree/billiard.hpp"

#include <cstdint>

namespace windtree {

// Floating-point billiard for directions known only to finite precision.
// Positions are kept relative to the centre of the last obstacle hit, so
// coordinates stay below 1 in magnitude however far the orbit travels.

using quad = __float128;

/// Nearest value of type T to an exact rational (correct to the last bit of
/// double, and to about 150 bits for quad).
template <class T>
T to_float(const Rational& r);

/// Hexadecimal rendering of a floating value with its precision, e.g.
/// "0x1.8p-1@53".
std::string hex_float(double v);
std::string hex_float(long double v);
std::string hex_float(quad v);

template <class T>
struct FloatGeometry {
    T half_a;
    T half_b;
    T c;  ///< cos of the direction angle, > 0
    T s;  ///< sin of the direction angle, > 0

    /// For a slope value u/v in (0, infinity).
    static FloatGeometry make(const Params& params, const Rational& slope_value);
};

template <class T>
struct FloatState {
    Cell cell;
    Side side = Side::Top;
    T x{};  ///< relative to the centre of the obstacle at `cell`
    T y{};
    Orientation orientation;

    static FloatState from_exact(const BilliardState& s);
};

enum class FloatStep { Collision, FreeFlight };

/// Moves to the next collision by walking the facing grid lines in time
/// order. `time` receives the distance travelled. FreeFlight when no obstacle
/// is met within `max_lines` grid lines.
template <class T>
FloatStep float_step(FloatState<T>& state, const FloatGeometry<T>& g, T& time, std::int64_t max_lines = 10'000'000);

inline constexpr int kShadowCheckpoint = 256;
inline constexpr double kShadowTolerance = 0x1p-30;

/// Orbit in precision T, shadowed step by step in quad precision. Cells and
/// sides must agree at every collision, and positions within
/// kShadowTolerance at every kShadowCheckpoint-th collision; otherwise
/// step() throws PrecisionError.
template <class T>
class ShadowedOrbit {
public:
    ShadowedOrbit(const Params& params, const Rational& slope_value, const BilliardState& start);

    /// False when the particle leaves along an obstacle-free line.
    bool step();

    const Cell& cell() const { return main_.cell; }
    Side side() const { return main_.side; }
    double x() const { return static_cast<double>(main_.cell.m) + static_cast<double>(main_.x); }
    double y() const { return static_cast<double>(main_.cell.n) + static_cast<double>(main_.y); }
    double time() const { return static_cast<double>(time_); }
    std::int64_t collisions() const { return collisions_; }

private:
    FloatGeometry<T> g_;
    FloatGeometry<quad> gq_;
    FloatState<T> main_;
    FloatState<quad> shadow_;
    quad time_ = 0;
    std::int64_t collisions_ = 0;
};

/// The same interface on exact states, for rational directions.
class ExactOrbit {
public:
    ExactOrbit(const Params& params, const BilliardState& start);

    /// False on a corner or free flight (see corner()).
    bool step();

    const Cell& cell() const { return state_.cell; }
    Side side() const { return state_.side; }
    double x() const { return state_.position.x.to_double(); }
    double y() const { return state_.position.y.to_double(); }
    double time() const { return length_.to_double(); }
    std::int64_t collisions() const { return collisions_; }
    bool corner() const { return corner_; }
    const BilliardState& state() const { return state_; }

private:
    Params params_;
    BilliardState state_;
    ArcLength length_;
    std::int64_t collisions_ = 0;
    bool corner_ = false;
};

} // namespace windtree
