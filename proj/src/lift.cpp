#include "windtree/lift.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <numeric>
#include <stdexcept>

namespace windtree {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// A point of the reduced (horizontal) surface at height t above the bottom of
// cylinder k, abscissa x inside the first cell of that row.
MarkedPoint point_in_cylinder(const CylinderDecomposition& dec, int k, const Rational& t, const Rational& x)
{
    const BigInt row = t.floor();
    for (int c : dec.cylinders[idx(k)].cells)
        if (dec.row_of_cell[idx(c)] == row.get_si())
            return MarkedPoint{"start", c, x, t - Rational(row)};
    throw std::logic_error("point_in_cylinder: row not found");
}

// Pulls a point of the reduced surface back to the L-origami.
MarkedPoint pull_back(const CylinderDecomposition& dec, const MarkedPoint& p)
{
    Origami r = dec.reduced;
    r.marked_points = {p};
    const Origami back = sl2z_act(r, inverse_word(dec.word));
    return back.marked_points.front();
}

LiftBehavior behavior_of(const TrajectoryOutcome& out, const Params& prm, const Slope& slope,
                         const CylinderDecomposition& dec, const Cylinder& cyl)
{
    if (out.kind == OutcomeKind::Escaping)
        return Strip{out.drift};
    if (out.kind != OutcomeKind::Periodic)
        throw std::logic_error("behavior_of: orbit is neither periodic nor escaping");
    if (out.geometric_length.radicand != slope.norm_squared())
        throw std::logic_error("behavior_of: length measured along another direction");
    // The primitive vector (X, Y) of the scaled surface is (v, u) / g in table
    // units, g = q v / X, so the Y-circumference is c |(u, v)| / g.
    const BigInt g = slope.run() * BigInt(static_cast<long>(prm.q)) / dec.dir_x;
    const Rational factor = out.geometric_length.coeff * Rational(g) / Rational(BigInt(static_cast<long>(cyl.circumference)));
    if (!factor.is_integer())
        throw std::logic_error("behavior_of: lifted length is not a multiple of the circumference");
    return ClosesWithFactor{factor.floor().get_si()};
}

// Leaves of one cylinder are freely homotopic, so their holonomies in the
// deck group of X -> Y (lattice translations and the coordinate reflections)
// are conjugate: drifts agree up to the sign of each component.
bool same_lift(const LiftBehavior& x, const LiftBehavior& y)
{
    const auto* sx = std::get_if<Strip>(&x);
    const auto* sy = std::get_if<Strip>(&y);
    if (!sx || !sy)
        return x == y;
    return std::abs(sx->drift.m) == std::abs(sy->drift.m) && std::abs(sx->drift.n) == std::abs(sy->drift.n);
}

CylinderLift lift_cylinder(const Params& prm, const Slope& slope, const CylinderDecomposition& dec, int k,
                           std::int64_t max_collisions)
{
    const Cylinder& cyl = dec.cylinders[idx(k)];
    const Rational h(BigInt(static_cast<long>(cyl.height)));
    CylinderLift lift;
    int attempt = 0;
    for (int j = 0; j < kStartsPerCylinder; ++j) {
        for (;;) {
            // heights h/6, h/2, 5h/6 nudged off the waist; x away from the cell edge
            const Rational t = h * Rational(2 * j + 1, 6) + Rational(1, 7 * (13 + attempt));
            const Rational x = Rational(1, 5 + 2 * attempt) + Rational(j, 7);
            const PointQ start = table_point(prm, pull_back(dec, point_in_cylinder(dec, k, t, x)));
            bool usable = !inside_obstacle(start, prm);
            TrajectoryOutcome out;
            if (usable) {
                out = classify_from_point(start, Orientation{1, 1}, slope, prm, max_collisions);
                usable = out.kind != OutcomeKind::Singular;
            }
            if (usable) {
                if (out.kind == OutcomeKind::Undetermined)
                    throw DomainError("lift_direction: orbit undetermined within " + std::to_string(max_collisions)
                                      + " collisions");
                lift.starts.push_back(start);
                lift.outcomes.push_back(out);
                break;
            }
            if (++attempt > kMaxStartRetries)
                throw DomainError("lift_direction: no regular start found in cylinder " + std::to_string(k));
            ++lift.retries;
        }
    }
    lift.behavior = behavior_of(lift.outcomes.front(), prm, slope, dec, cyl);
    for (const TrajectoryOutcome& out : lift.outcomes)
        if (!same_lift(behavior_of(out, prm, slope, dec, cyl), lift.behavior))
            throw std::logic_error("lift_direction: starts in one cylinder disagree");
    return lift;
}

} // namespace

PointQ table_point(const Params& prm, const MarkedPoint& p)
{
    const PointQ l = l_coordinates(prm, p);
    const Rational one(1), two(2);
    return {l.x / Rational(BigInt(static_cast<long>(prm.q))) - one + prm.a / two,
            l.y / Rational(BigInt(static_cast<long>(prm.s))) - one + prm.b / two};
}

std::string to_string(const LiftBehavior& b)
{
    if (const auto* c = std::get_if<ClosesWithFactor>(&b))
        return "closes x" + std::to_string(c->factor);
    const Cell& d = std::get<Strip>(b).drift;
    return "strip drift (" + std::to_string(d.m) + "," + std::to_string(d.n) + ")";
}

int LiftReport::strip_count() const
{
    return static_cast<int>(std::count_if(cylinders.begin(), cylinders.end(), [](const CylinderLift& c) {
        return std::holds_alternative<Strip>(c.behavior);
    }));
}

LiftReport lift_direction(const Params& prm, const Slope& table_slope, std::int64_t max_collisions)
{
    if (table_slope.is_axis())
        throw DomainError("lift_direction: axis directions are not handled");
    LiftReport report;
    report.direction = table_slope;
    report.y_decomposition = decompose_table_direction(prm, table_slope);
    const CylinderDecomposition& dec = report.y_decomposition;

    std::vector<std::future<CylinderLift>> jobs;
    for (int k = 0; k < static_cast<int>(dec.cylinders.size()); ++k)
        jobs.push_back(std::async(std::launch::async, lift_cylinder, std::cref(prm), std::cref(table_slope),
                                  std::cref(dec), k, max_collisions));
    for (auto& job : jobs)
        report.cylinders.push_back(job.get());

    // Strongly parabolic: every cylinder closes, and the lifted cylinders
    // all have the same circumference and height.
    bool parabolic = true;
    std::set<std::pair<std::int64_t, std::int64_t>> shapes;
    for (std::size_t k = 0; k < report.cylinders.size(); ++k) {
        const auto* closes = std::get_if<ClosesWithFactor>(&report.cylinders[k].behavior);
        if (!closes) {
            parabolic = false;
            break;
        }
        shapes.insert({dec.cylinders[k].circumference * closes->factor, dec.cylinders[k].height});
    }
    report.strongly_parabolic = parabolic && shapes.size() == 1;
    return report;
}

bool abc_strip_check(const Params& prm, const Slope& table_slope, std::int64_t max_collisions)
{
    const CylinderDecomposition dec = decompose_table_direction(prm, table_slope);
    for (int k = 0; k < static_cast<int>(dec.cylinders.size()); ++k) {
        const Rational h(BigInt(static_cast<long>(dec.cylinders[idx(k)].height)));
        std::map<Rational, std::vector<std::string>> leaves;
        for (const MarkedPoint& m : dec.reduced.marked_points) {
            if (m.label != "A" && m.label != "B" && m.label != "C")
                continue;
            if (dec.cylinder_of_cell[idx(m.cell)] != k)
                continue;
            const Rational t = dec.height_in_cylinder(m);
            if (t.is_zero() || t == h)
                continue;
            leaves[t].push_back(m.label);
        }
        for (const auto& [t, labels] : leaves) {
            if (labels.size() < 2)
                continue;
            const Origami o = build_origami(prm);
            const auto it = std::find_if(o.marked_points.begin(), o.marked_points.end(),
                                         [&](const MarkedPoint& m) { return m.label == labels.front(); });
            const TrajectoryOutcome out
                = classify_from_point(table_point(prm, *it), Orientation{1, 1}, table_slope, prm, max_collisions);
            if (out.kind == OutcomeKind::Singular || out.kind == OutcomeKind::Undetermined)
                throw std::logic_error("abc_strip_check: orbit through " + labels.front() + " is "
                                       + to_string(out.kind));
            return out.kind == OutcomeKind::Escaping;
        }
    }
    throw DomainError("abc_strip_check: no regular leaf through two of A, B, C in direction "
                      + table_slope.to_string());
}

std::map<std::string, std::string> weierstrass_permutation(const Origami& o, std::string_view word)
{
    const Origami g = sl2z_act(o, word);
    if (!isomorphic(g, o))
        throw DomainError("weierstrass_permutation: word " + std::string(word) + " is not in the Veech group");
    const CanonicalForm cg = canonical_form(g);
    const std::vector<int> back = inverse_permutation(canonical_form(o).relabel);
    const VertexData vd = vertex_data(o);
    std::map<std::string, std::string> perm;
    for (const MarkedPoint& m : g.marked_points) {
        MarkedPoint moved = m;
        moved.cell = back[idx(cg.relabel[idx(m.cell)])];
        for (const MarkedPoint& target : o.marked_points)
            if (same_point(o, vd, moved, target))
                perm[m.label] = target.label;
        if (!perm.count(m.label))
            throw std::logic_error("weierstrass_permutation: image of " + m.label + " is not a marked point");
    }
    return perm;
}

std::vector<std::set<std::string>> wpoint_orbit_partition(const Params& prm)
{
    if (!(prm == parse_params("1/2,1/2")))
        throw DomainError("wpoint_orbit_partition: only defined for (1/2,1/2)");
    const Origami o = build_origami(prm);
    std::map<std::string, std::string> parent;
    for (const MarkedPoint& m : o.marked_points)
        parent[m.label] = m.label;
    auto find = [&](std::string x) {
        while (parent[x] != x)
            x = parent[x];
        return x;
    };
    for (const char* generator : {"TT", "S"})
        for (const auto& [from, to] : weierstrass_permutation(o, generator))
            parent[find(from)] = find(to);
    std::map<std::string, std::set<std::string>> classes;
    for (const auto& [label, unused] : parent)
        classes[find(label)].insert(label);
    std::vector<std::set<std::string>> out;
    for (auto& [root, members] : classes)
        out.push_back(members);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace windtree
