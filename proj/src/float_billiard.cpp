#include "windtree/float_billiard.hpp"

#include <quadmath.h>

#include <cmath>
#include <cstdio>

namespace windtree {

namespace {

template <class T>
T sqrt_t(T v)
{
    if constexpr (std::is_same_v<T, quad>)
        return sqrtq(v);
    else
        return std::sqrt(v);
}

template <class T>
T floor_t(T v)
{
    if constexpr (std::is_same_v<T, quad>)
        return floorq(v);
    else
        return std::floor(v);
}

template <class T>
T ceil_t(T v)
{
    if constexpr (std::is_same_v<T, quad>)
        return ceilq(v);
    else
        return std::ceil(v);
}

template <class T>
T abs_t(T v)
{
    return v < 0 ? -v : v;
}

template <class T>
std::int64_t nearest(T v)
{
    return static_cast<std::int64_t>(floor_t(v + T(0.5)));
}

} // namespace

template <class T>
T to_float(const Rational& r)
{
    // Three doubles of a 200-bit binary expansion: exact enough for quad.
    const mpf_class f(r.raw(), 200);
    const double hi = f.get_d();
    const mpf_class r1 = f - hi;
    const double mid = r1.get_d();
    const mpf_class r2 = r1 - mid;
    const double lo = r2.get_d();
    return static_cast<T>(hi) + static_cast<T>(mid) + static_cast<T>(lo);
}

template double to_float<double>(const Rational&);
template long double to_float<long double>(const Rational&);
template quad to_float<quad>(const Rational&);

std::string hex_float(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a@53", v);
    return buf;
}

std::string hex_float(long double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%La@64", v);
    return buf;
}

std::string hex_float(quad v)
{
    char buf[80];
    quadmath_snprintf(buf, sizeof buf, "%Qa", v);
    return std::string(buf) + "@113";
}

template <class T>
FloatGeometry<T> FloatGeometry<T>::make(const Params& params, const Rational& slope_value)
{
    if (slope_value.sign() <= 0)
        throw DomainError("FloatGeometry: slope must be positive");
    FloatGeometry g;
    g.half_a = to_float<T>(params.half_a());
    g.half_b = to_float<T>(params.half_b());
    const T t = to_float<T>(slope_value);
    g.c = T(1) / sqrt_t(T(1) + t * t);
    g.s = t * g.c;
    return g;
}

template <class T>
FloatState<T> FloatState<T>::from_exact(const BilliardState& s)
{
    FloatState f;
    f.cell = s.cell;
    f.side = s.side;
    f.x = to_float<T>(s.position.x - Rational(BigInt(static_cast<long>(s.cell.m))));
    f.y = to_float<T>(s.position.y - Rational(BigInt(static_cast<long>(s.cell.n))));
    f.orientation = s.orientation;
    return f;
}

template <class T>
FloatStep float_step(FloatState<T>& st, const FloatGeometry<T>& g, T& time, std::int64_t max_lines)
{
    const int sx = st.orientation.sx;
    const int sy = st.orientation.sy;
    const T dx = T(sx) * g.c;
    const T dy = T(sy) * g.s;
    // next facing grid lines: x = j - sx a/2, y = k - sy b/2
    std::int64_t j = sx > 0 ? static_cast<std::int64_t>(floor_t(st.x + g.half_a)) + 1
                            : static_cast<std::int64_t>(ceil_t(st.x - g.half_a)) - 1;
    std::int64_t k = sy > 0 ? static_cast<std::int64_t>(floor_t(st.y + g.half_b)) + 1
                            : static_cast<std::int64_t>(ceil_t(st.y - g.half_b)) - 1;
    for (std::int64_t line = 0; line < max_lines; ++line) {
        const T xl = T(j) - T(sx) * g.half_a;
        const T yl = T(k) - T(sy) * g.half_b;
        const T tv = (xl - st.x) / dx;
        const T th = (yl - st.y) / dy;
        if (tv <= th) {
            const T y = st.y + dy * tv;
            const std::int64_t row = nearest(y);
            if (abs_t(y - T(row)) <= g.half_b) {
                st.cell = {st.cell.m + j, st.cell.n + row};
                st.x = T(-sx) * g.half_a;
                st.y = y - T(row);
                st.side = sx > 0 ? Side::Left : Side::Right;
                st.orientation = st.orientation.flipped_x();
                time = tv;
                return FloatStep::Collision;
            }
            j += sx;
        } else {
            const T x = st.x + dx * th;
            const std::int64_t col = nearest(x);
            if (abs_t(x - T(col)) <= g.half_a) {
                st.cell = {st.cell.m + col, st.cell.n + k};
                st.x = x - T(col);
                st.y = T(-sy) * g.half_b;
                st.side = sy > 0 ? Side::Bottom : Side::Top;
                st.orientation = st.orientation.flipped_y();
                time = th;
                return FloatStep::Collision;
            }
            k += sy;
        }
    }
    return FloatStep::FreeFlight;
}

template <class T>
ShadowedOrbit<T>::ShadowedOrbit(const Params& params, const Rational& slope_value, const BilliardState& start)
    : g_(FloatGeometry<T>::make(params, slope_value)),
      gq_(FloatGeometry<quad>::make(params, slope_value)),
      main_(FloatState<T>::from_exact(start)),
      shadow_(FloatState<quad>::from_exact(start))
{
}

template <class T>
bool ShadowedOrbit<T>::step()
{
    T dt{};
    quad dq = 0;
    const FloatStep a = float_step(main_, g_, dt);
    const FloatStep b = float_step(shadow_, gq_, dq);
    if (a != b || (a == FloatStep::Collision && (main_.cell != shadow_.cell || main_.side != shadow_.side)))
        throw PrecisionError("float orbit left its quad-precision shadow at collision "
                             + std::to_string(collisions_ + 1));
    if (a == FloatStep::FreeFlight)
        return false;
    ++collisions_;
    time_ += dq;
    if (collisions_ % kShadowCheckpoint == 0) {
        const quad ex = abs_t(static_cast<quad>(main_.x) - shadow_.x);
        const quad ey = abs_t(static_cast<quad>(main_.y) - shadow_.y);
        if (ex > kShadowTolerance || ey > kShadowTolerance)
            throw PrecisionError("float orbit drifted more than 2^-30 from its shadow by collision "
                                 + std::to_string(collisions_));
    }
    return true;
}

template struct FloatGeometry<double>;
template struct FloatGeometry<long double>;
template struct FloatGeometry<quad>;
template struct FloatState<double>;
template struct FloatState<long double>;
template struct FloatState<quad>;
template FloatStep float_step(FloatState<double>&, const FloatGeometry<double>&, double&, std::int64_t);
template FloatStep float_step(FloatState<long double>&, const FloatGeometry<long double>&, long double&,
                              std::int64_t);
template FloatStep float_step(FloatState<quad>&, const FloatGeometry<quad>&, quad&, std::int64_t);
template class ShadowedOrbit<double>;
template class ShadowedOrbit<long double>;

ExactOrbit::ExactOrbit(const Params& params, const BilliardState& start)
    : params_(params), state_(start), length_{Rational(0), start.slope.norm_squared()}
{
    validate_state(start, params);
    if (start.slope.is_axis())
        throw DomainError("ExactOrbit: axis directions are handled by classify_trajectory");
}

bool ExactOrbit::step()
{
    if (corner_)
        return false;
    Rational t;
    const StepResult r = cast_ray(state_.position, state_.orientation, state_.slope, params_, &t);
    if (const auto* next = std::get_if<BilliardState>(&r)) {
        state_ = *next;
        length_ += ArcLength{t, length_.radicand};
        ++collisions_;
        return true;
    }
    corner_ = std::holds_alternative<CornerHit>(r);
    return false;
}

} // namespace windtree
