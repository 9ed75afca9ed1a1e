#include "windtree/billiard.hpp"

#include <map>

namespace windtree {

std::string to_string(Side s)
{
    switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
    }
    return "?";
}

Side parse_side(std::string_view text)
{
    if (text == "left" || text == "l") return Side::Left;
    if (text == "right" || text == "r") return Side::Right;
    if (text == "bottom" || text == "b") return Side::Bottom;
    if (text == "top" || text == "t") return Side::Top;
    throw DomainError("unknown side: " + std::string(text));
}

std::string to_string(OutcomeKind k)
{
    switch (k) {
    case OutcomeKind::Periodic: return "Periodic";
    case OutcomeKind::Escaping: return "Escaping";
    case OutcomeKind::Singular: return "Singular";
    case OutcomeKind::Undetermined: return "Undetermined";
    }
    return "?";
}

namespace {

std::int64_t to_i64(const BigInt& v)
{
    if (!v.fits_slong_p())
        throw DomainError("lattice index out of range");
    return v.get_si();
}

Rational side_low_end(Side side, const Cell& c, const Params& params)
{
    return is_vertical_side(side) ? Rational(c.n) - params.half_b() : Rational(c.m) - params.half_a();
}

} // namespace

ReducedState reduce(const BilliardState& s, const Params& params)
{
    const Rational& coord = is_vertical_side(s.side) ? s.position.y : s.position.x;
    return {s.side, coord - side_low_end(s.side, s.cell, params), s.orientation};
}

bool inside_obstacle(const PointQ& p, const Params& params)
{
    const Rational dx = p.x - Rational(p.x.round_half_up());
    const Rational dy = p.y - Rational(p.y.round_half_up());
    return dx.abs() <= params.half_a() && dy.abs() <= params.half_b();
}

void validate_state(const BilliardState& s, const Params& params)
{
    const Rational ha = params.half_a();
    const Rational hb = params.half_b();
    const Rational mx = Rational(s.cell.m);
    const Rational ny = Rational(s.cell.n);
    const PointQ& p = s.position;
    bool on_side = false;
    bool corner = false;
    bool outward = false;
    switch (s.side) {
    case Side::Left:
    case Side::Right: {
        const Rational x = s.side == Side::Left ? mx - ha : mx + ha;
        const Rational dy = (p.y - ny).abs();
        on_side = p.x == x && dy <= hb;
        corner = dy == hb;
        outward = s.slope.is_vertical() ? false : (s.side == Side::Left ? s.orientation.sx < 0 : s.orientation.sx > 0);
        break;
    }
    case Side::Bottom:
    case Side::Top: {
        const Rational y = s.side == Side::Bottom ? ny - hb : ny + hb;
        const Rational dx = (p.x - mx).abs();
        on_side = p.y == y && dx <= ha;
        corner = dx == ha;
        outward = s.slope.is_horizontal() ? false : (s.side == Side::Bottom ? s.orientation.sy < 0 : s.orientation.sy > 0);
        break;
    }
    }
    if (!on_side)
        throw DomainError("state position is not on the named obstacle side");
    if (corner)
        throw DomainError("state position is an obstacle corner");
    if (!outward)
        throw DomainError("state direction does not point into the table");
}

StepResult cast_ray(const PointQ& from, const Orientation& o, const Slope& slope, const Params& params,
                    Rational* length)
{
    const Rational ha = params.half_a();
    const Rational hb = params.half_b();
    const Rational u(slope.rise());
    const Rational v(slope.run());
    const bool moves_x = !slope.is_vertical();
    const bool moves_y = !slope.is_horizontal();

    // Facing vertical lines: x = k - a/2 when moving right, x = k + a/2 when
    // moving left. Same for horizontal lines with b.
    Rational tx, ty, dtx, dty;
    if (moves_x) {
        dtx = Rational(1) / v;
        if (o.sx > 0) {
            const BigInt k = (from.x + ha).floor() + 1;
            tx = (Rational(k) - ha - from.x) / v;
        } else {
            const BigInt k = (from.x - ha).ceil() - 1;
            tx = (from.x - Rational(k) - ha) / v;
        }
    }
    if (moves_y) {
        dty = Rational(1) / u;
        if (o.sy > 0) {
            const BigInt k = (from.y + hb).floor() + 1;
            ty = (Rational(k) - hb - from.y) / u;
        } else {
            const BigInt k = (from.y - hb).ceil() - 1;
            ty = (from.y - Rational(k) - hb) / u;
        }
    }

    // The obstacle pattern seen along the ray is periodic with period t = 1
    // (displacement (v, u) is a lattice vector), so one period without a hit
    // means there is never a hit.
    const Rational horizon = (moves_x && moves_y ? min(tx, ty) : (moves_x ? tx : ty)) + Rational(1);
    const Rational su(o.sy > 0 ? u : -u);
    const Rational sv(o.sx > 0 ? v : -v);

    for (;;) {
        const bool take_x = moves_x && (!moves_y || tx <= ty);
        const Rational& t = take_x ? tx : ty;
        if (horizon < t)
            return FreeFlight{};
        if (take_x) {
            const Rational x = from.x + sv * t;
            const Rational y = from.y + su * t;
            const BigInt n = y.round_half_up();
            const Rational dy = (y - Rational(n)).abs();
            if (dy <= hb) {
                const BigInt m = (o.sx > 0 ? x + ha : x - ha).round_half_up();
                const Cell cell{to_i64(m), to_i64(n)};
                if (length)
                    *length = t;
                if (dy == hb)
                    return CornerHit{{x, y}, cell};
                return BilliardState{{x, y}, o.sx > 0 ? Side::Left : Side::Right, cell, o.flipped_x(), slope};
            }
            tx += dtx;
        } else {
            const Rational x = from.x + sv * t;
            const Rational y = from.y + su * t;
            const BigInt m = x.round_half_up();
            const Rational dx = (x - Rational(m)).abs();
            if (dx <= ha) {
                const BigInt n = (o.sy > 0 ? y + hb : y - hb).round_half_up();
                const Cell cell{to_i64(m), to_i64(n)};
                if (length)
                    *length = t;
                if (dx == ha)
                    return CornerHit{{x, y}, cell};
                return BilliardState{{x, y}, o.sy > 0 ? Side::Bottom : Side::Top, cell, o.flipped_y(), slope};
            }
            ty += dty;
        }
    }
}

StepResult next_collision(const BilliardState& state, const Params& params)
{
    if (state.slope.is_axis())
        throw DomainError("next_collision: horizontal and vertical slopes are handled by classify_trajectory");
    return cast_ray(state.position, state.orientation, state.slope, params);
}

StepResult launch(const PointQ& point, const Orientation& orientation, const Slope& slope, const Params& params)
{
    const Rational dx = point.x - Rational(point.x.round_half_up());
    const Rational dy = point.y - Rational(point.y.round_half_up());
    if (dx.abs() < params.half_a() && dy.abs() < params.half_b())
        throw DomainError("launch point lies inside an obstacle");
    if (dx.abs() == params.half_a() && dy.abs() == params.half_b())
        throw DomainError("launch point is an obstacle corner");

    // Already on a side and pointing away from it: that is a state.
    const Cell cell{to_i64(point.x.round_half_up()), to_i64(point.y.round_half_up())};
    if (dx.abs() == params.half_a() && dy.abs() < params.half_b() && !slope.is_vertical()) {
        const Side side = dx.sign() < 0 ? Side::Left : Side::Right;
        if ((side == Side::Left) == (orientation.sx < 0))
            return BilliardState{point, side, cell, orientation, slope};
    }
    if (dy.abs() == params.half_b() && dx.abs() < params.half_a() && !slope.is_horizontal()) {
        const Side side = dy.sign() < 0 ? Side::Bottom : Side::Top;
        if ((side == Side::Bottom) == (orientation.sy < 0))
            return BilliardState{point, side, cell, orientation, slope};
    }

    StepResult back = cast_ray(point, orientation.reversed(), slope, params);
    if (auto* s = std::get_if<BilliardState>(&back)) {
        // The backward ray arrived at the side; the forward flow leaves it
        // with the original orientation.
        s->orientation = orientation;
    }
    return back;
}

BilliardState state_on_side(Side side, Cell cell, const Rational& fraction, const Orientation& orientation,
                            const Slope& slope, const Params& params)
{
    BilliardState s;
    s.side = side;
    s.cell = cell;
    s.orientation = orientation;
    s.slope = slope;
    const Rational mx(cell.m), ny(cell.n);
    switch (side) {
    case Side::Left:
        s.position = {mx - params.half_a(), ny - params.half_b() + fraction * params.b};
        break;
    case Side::Right:
        s.position = {mx + params.half_a(), ny - params.half_b() + fraction * params.b};
        break;
    case Side::Bottom:
        s.position = {mx - params.half_a() + fraction * params.a, ny - params.half_b()};
        break;
    case Side::Top:
        s.position = {mx - params.half_a() + fraction * params.a, ny + params.half_b()};
        break;
    }
    return s;
}

namespace {

// Horizontal or vertical motion from a side: the particle is trapped between
// two facing sides of neighbouring obstacles.
TrajectoryOutcome classify_axis(const BilliardState& start, const Params& params)
{
    TrajectoryOutcome out;
    out.kind = OutcomeKind::Periodic;
    out.combinatorial_length = 2;
    out.collisions_simulated = 2;
    const Rational gap = start.slope.is_horizontal() ? Rational(1) - params.a : Rational(1) - params.b;
    out.geometric_length = ArcLength{gap * Rational(2), BigInt(1)};
    return out;
}

struct Visit {
    std::int64_t index;
    Cell cell;
    Rational length;
};

} // namespace

TrajectoryOutcome classify_trajectory(const BilliardState& start, const Params& params,
                                      std::int64_t max_collisions)
{
    validate_state(start, params);
    if (start.slope.is_axis())
        return classify_axis(start, params);

    const BigInt radicand = start.slope.norm_squared();
    std::map<ReducedState, Visit> seen;
    seen.emplace(reduce(start, params), Visit{0, start.cell, Rational(0)});

    TrajectoryOutcome out;
    BilliardState cur = start;
    Rational total(0);
    for (std::int64_t k = 1; k <= max_collisions; ++k) {
        Rational t;
        StepResult step = cast_ray(cur.position, cur.orientation, cur.slope, params, &t);
        out.collisions_simulated = k;
        if (auto* c = std::get_if<CornerHit>(&step)) {
            out.kind = OutcomeKind::Singular;
            out.corner = c->corner;
            out.combinatorial_length = k;
            out.geometric_length = ArcLength{total + t, radicand};
            return out;
        }
        if (std::holds_alternative<FreeFlight>(step)) {
            out.kind = OutcomeKind::Escaping;
            out.corridor = true;
            out.pre_period = k - 1;
            out.combinatorial_length = 0;
            out.geometric_length = ArcLength{Rational(1), radicand};
            out.drift = {cur.orientation.sx * to_i64(cur.slope.run()), cur.orientation.sy * to_i64(cur.slope.rise())};
            return out;
        }
        cur = std::get<BilliardState>(std::move(step));
        total += t;
        const ReducedState key = reduce(cur, params);
        auto it = seen.find(key);
        if (it != seen.end()) {
            const Visit& first = it->second;
            out.pre_period = first.index;
            out.combinatorial_length = k - first.index;
            out.geometric_length = ArcLength{total - first.length, radicand};
            out.drift = {cur.cell.m - first.cell.m, cur.cell.n - first.cell.n};
            out.kind = (out.drift == Cell{0, 0}) ? OutcomeKind::Periodic : OutcomeKind::Escaping;
            return out;
        }
        seen.emplace(key, Visit{k, cur.cell, total});
    }
    out.kind = OutcomeKind::Undetermined;
    return out;
}

TrajectoryOutcome classify_from_point(const PointQ& point, const Orientation& orientation, const Slope& slope,
                                      const Params& params, std::int64_t max_collisions)
{
    if (slope.is_axis()) {
        // Axis-parallel line: trapped iff the line crosses an obstacle row
        // (resp. column) strictly inside it.
        const Rational& c = slope.is_horizontal() ? point.y : point.x;
        const Rational& half = slope.is_horizontal() ? params.half_b() : params.half_a();
        const Rational d = (c - Rational(c.round_half_up())).abs();
        TrajectoryOutcome out;
        if (d == half) {
            out.kind = OutcomeKind::Singular;
            return out;
        }
        if (d < half) {
            out.kind = OutcomeKind::Periodic;
            out.combinatorial_length = 2;
            const Rational gap = slope.is_horizontal() ? Rational(1) - params.a : Rational(1) - params.b;
            out.geometric_length = ArcLength{gap * Rational(2), BigInt(1)};
            return out;
        }
        out.kind = OutcomeKind::Escaping;
        out.corridor = true;
        out.geometric_length = ArcLength{Rational(1), BigInt(1)};
        out.drift = slope.is_horizontal() ? Cell{orientation.sx, 0} : Cell{0, orientation.sy};
        return out;
    }

    StepResult start = launch(point, orientation, slope, params);
    if (auto* s = std::get_if<BilliardState>(&start))
        return classify_trajectory(*s, params, max_collisions);
    if (auto* c = std::get_if<CornerHit>(&start)) {
        TrajectoryOutcome out;
        out.kind = OutcomeKind::Singular;
        out.corner = c->corner;
        return out;
    }
    // Backward ray is free: the particle comes in from infinity. Either it
    // never meets anything (a corridor line) or it leaves along a corridor
    // after finitely many collisions.
    StepResult fwd = cast_ray(point, orientation, slope, params);
    if (auto* s = std::get_if<BilliardState>(&fwd)) {
        TrajectoryOutcome out = classify_trajectory(*s, params, max_collisions);
        if (out.kind == OutcomeKind::Escaping)
            out.corridor = true;
        return out;
    }
    TrajectoryOutcome out;
    if (auto* c = std::get_if<CornerHit>(&fwd)) {
        out.kind = OutcomeKind::Singular;
        out.corner = c->corner;
        return out;
    }
    out.kind = OutcomeKind::Escaping;
    out.corridor = true;
    out.geometric_length = ArcLength{Rational(1), slope.norm_squared()};
    out.drift = {orientation.sx * to_i64(slope.run()), orientation.sy * to_i64(slope.rise())};
    return out;
}

Trace trace(const BilliardState& start, const Params& params, std::int64_t n_collisions)
{
    validate_state(start, params);
    Trace tr;
    tr.points.push_back(start.position);
    tr.states.push_back(start);
    if (start.slope.is_axis()) {
        // Bounce back and forth between the two facing sides.
        BilliardState cur = start;
        for (std::int64_t k = 0; k < n_collisions; ++k) {
            BilliardState nxt = cur;
            const Rational gap = cur.slope.is_horizontal() ? Rational(1) - params.a : Rational(1) - params.b;
            if (cur.slope.is_horizontal()) {
                nxt.position.x += Rational(cur.orientation.sx) * gap;
                nxt.side = cur.side == Side::Left ? Side::Right : Side::Left;
                nxt.cell.m += cur.orientation.sx;
                nxt.orientation = cur.orientation.flipped_x();
            } else {
                nxt.position.y += Rational(cur.orientation.sy) * gap;
                nxt.side = cur.side == Side::Bottom ? Side::Top : Side::Bottom;
                nxt.cell.n += cur.orientation.sy;
                nxt.orientation = cur.orientation.flipped_y();
            }
            tr.points.push_back(nxt.position);
            tr.states.push_back(nxt);
            cur = nxt;
        }
        return tr;
    }
    BilliardState cur = start;
    for (std::int64_t k = 0; k < n_collisions; ++k) {
        StepResult step = next_collision(cur, params);
        if (auto* c = std::get_if<CornerHit>(&step)) {
            tr.points.push_back(c->corner);
            tr.singular = true;
            return tr;
        }
        if (std::holds_alternative<FreeFlight>(step)) {
            tr.free_flight = true;
            return tr;
        }
        cur = std::get<BilliardState>(std::move(step));
        tr.points.push_back(cur.position);
        tr.states.push_back(cur);
    }
    return tr;
}

bool symmetry_check(const BilliardState& start, const Params& params, std::int64_t n)
{
    validate_state(start, params);
    if (start.slope.is_axis())
        throw DomainError("symmetry_check: direction must be neither horizontal nor vertical");
    const ReducedState red = reduce(start, params);
    const bool horizontal_side = !is_vertical_side(start.side);
    const Rational half_len = horizontal_side ? params.half_a() : params.half_b();
    if (red.offset != half_len)
        throw DomainError("symmetry_check: start must be the midpoint of an obstacle side");

    // The backward orbit through the midpoint is the forward orbit of the
    // same point leaving with the mirrored direction.
    BilliardState mirror = start;
    mirror.orientation = horizontal_side ? start.orientation.flipped_x() : start.orientation.flipped_y();

    const Trace fwd = trace(start, params, n);
    const Trace bwd = trace(mirror, params, n);
    if (fwd.singular || bwd.singular)
        throw DomainError("symmetry_check: orbit hits a corner");
    if (fwd.points.size() != bwd.points.size())
        return false;
    for (std::size_t i = 0; i < fwd.points.size(); ++i) {
        const PointQ& p = fwd.points[i];
        const PointQ& q = bwd.points[i];
        const bool ok = horizontal_side
            ? (q.y == p.y && q.x == start.position.x * Rational(2) - p.x)
            : (q.x == p.x && q.y == start.position.y * Rational(2) - p.y);
        if (!ok)
            return false;
    }
    return true;
}

namespace {

BigInt lcm(const BigInt& a, const BigInt& b)
{
    BigInt r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

} // namespace

BigInt predicted_denominator_bound(const BilliardState& start, const Params& params)
{
    // Unfolding turns the orbit into the line u X - v Y = C with
    // C = u x0 - v y0 (up to signs); reflections shift coordinates by
    // elements of (1/q)Z and (1/s)Z. A vertical-side hit has x in (1/2q)Z,
    // which forces y into (1/(v lcm(2q, d0)))Z + (1/s)Z, and symmetrically.
    const BigInt q(static_cast<long>(params.q));
    const BigInt s(static_cast<long>(params.s));
    const BigInt d0 = lcm(start.position.x.denominator(), start.position.y.denominator());
    const BigInt& u = start.slope.rise();
    const BigInt& v = start.slope.run();
    BigInt d = lcm(lcm(2 * q, 2 * s), d0);
    if (v != 0)
        d = lcm(d, v * lcm(2 * q, d0));
    if (u != 0)
        d = lcm(d, u * lcm(2 * s, d0));
    return d;
}

BigInt reduced_state_bound(const BilliardState& start, const Params& params)
{
    const BigInt d = predicted_denominator_bound(start, params);
    const Rational longest = max(params.a, params.b);
    return BigInt(16) * ((longest * Rational(d)).floor() + 1);
}

} // namespace windtree
