#include <doctest.h>

#include "windtree/lift.hpp"

#include <random>

using namespace windtree;

namespace {

bool is_odd_odd(const Slope& s) { return s.rise() % 2 != 0 && s.run() % 2 != 0; }

const ClosesWithFactor* closes(const CylinderLift& c) { return std::get_if<ClosesWithFactor>(&c.behavior); }

// A random point of the table outside the obstacles, with small denominators.
PointQ random_start(std::mt19937& rng, const Params& prm)
{
    std::uniform_int_distribution<long> num(0, 996);
    for (;;) {
        const PointQ p{Rational(num(rng), 997), Rational(num(rng), 997)};
        if (!inside_obstacle(p, prm))
            return p;
    }
}

} // namespace

TEST_CASE("table points of the Weierstrass points")
{
    const Params prm = parse_params("1/2,1/2");
    std::map<std::string, PointQ> at;
    for (const MarkedPoint& m : build_origami(prm).marked_points)
        at[m.label] = table_point(prm, m);
    // A, B, C are centres of symmetry of the table
    CHECK(at["A"] == PointQ{Rational(-1, 2), Rational(-1, 2)});
    CHECK(at["B"] == PointQ{0, Rational(-1, 2)});
    CHECK(at["C"] == PointQ{Rational(-1, 2), 0});
    // E and F are midpoints of obstacle sides
    CHECK(at["E"] == PointQ{0, Rational(-3, 4)});
    CHECK(at["F"] == PointQ{Rational(-3, 4), 0});
    // D is an obstacle corner
    CHECK(at["D"] == PointQ{Rational(-3, 4), Rational(-3, 4)});
}

TEST_CASE("good one-cylinder directions lift with factor exactly 2")
{
    for (const char* ps : {"1/2,1/2", "1/4,3/4", "3/4,1/6"}) {
        const Params prm = parse_params(ps);
        for (const Slope& s : enumerate_good_directions(prm, 7)) {
            CAPTURE(ps);
            CAPTURE(s.to_string());
            const LiftReport r = lift_direction(prm, s);
            CHECK(r.strongly_parabolic);
            REQUIRE(r.cylinders.size() == 1);
            REQUIRE(closes(r.cylinders[0]));
            CHECK(closes(r.cylinders[0])->factor == 2);
        }
    }
}

TEST_CASE("(1/2,1/2): the other directions have a strip")
{
    const Params prm = parse_params("1/2,1/2");
    for (const Slope& s : mediant_enumerate(7)) {
        const LiftReport r = lift_direction(prm, s);
        CAPTURE(s.to_string());
        CHECK(r.strongly_parabolic == is_odd_odd(s));
        CHECK((r.strip_count() > 0) == !is_odd_odd(s));
        for (const CylinderLift& c : r.cylinders)
            if (closes(c))
                CHECK(closes(c)->factor == 2);
    }
}

TEST_CASE("strongly parabolic directions: random starts are periodic")
{
    const Params prm = parse_params("1/2,1/2");
    std::mt19937 rng(5);
    for (const char* sl : {"1/1", "3/7", "5/3"}) {
        const Slope s = Slope::parse(sl);
        REQUIRE(lift_direction(prm, s).strongly_parabolic);
        int periodic = 0, singular = 0;
        while (periodic < 20) {
            const TrajectoryOutcome out = classify_from_point(random_start(rng, prm), Orientation{1, 1}, s, prm);
            if (out.kind == OutcomeKind::Singular) {
                ++singular;
                continue;
            }
            CHECK(out.kind == OutcomeKind::Periodic);
            ++periodic;
        }
        CHECK(singular < 20);
    }
}

TEST_CASE("E' class: no completely periodic direction")
{
    const Params prm = parse_params("2/3,2/3");
    std::mt19937 rng(17);
    for (const Slope& s : mediant_enumerate(7)) {
        CAPTURE(s.to_string());
        const LiftReport r = lift_direction(prm, s);
        CHECK_FALSE(r.strongly_parabolic);
        CHECK(r.strip_count() >= 1);
        if (r.cylinders.size() != 1)
            continue;
        // one cylinder, and it is a strip: no periodic orbit at all
        int regular = 0;
        while (regular < 10) {
            const TrajectoryOutcome out = classify_from_point(random_start(rng, prm), Orientation{1, 1}, s, prm);
            if (out.kind == OutcomeKind::Singular)
                continue;
            CHECK(out.kind == OutcomeKind::Escaping);
            ++regular;
        }
    }
}

TEST_CASE("lift_direction rejects axis directions")
{
    CHECK_THROWS_AS(lift_direction(parse_params("1/2,1/2"), Slope(0, 1)), DomainError);
    CHECK_THROWS_AS(lift_direction(parse_params("1/2,1/2"), Slope(1, 0)), DomainError);
}

TEST_CASE("a leaf through two of A, B, C lifts to an infinite orbit")
{
    const Params half = parse_params("1/2,1/2");
    CHECK(abc_strip_check(half, Slope(1, 2)));
    CHECK(abc_strip_check(half, Slope(2, 1)));
    for (const Slope& s : mediant_enumerate(9)) {
        CAPTURE(s.to_string());
        if (is_odd_odd(s))
            CHECK_THROWS_AS(abc_strip_check(half, s), DomainError);
        else
            CHECK(abc_strip_check(half, s));
    }
    const Params twothirds = parse_params("2/3,2/3");
    for (const char* sl : {"16/17", "14/17", "13/15", "8/7"})
        CHECK(abc_strip_check(twothirds, Slope::parse(sl)));
}

TEST_CASE("orbits of the Weierstrass points of the 3-square L")
{
    const Params half = parse_params("1/2,1/2");
    const std::vector<std::set<std::string>> expected = {{"A", "B", "C"}, {"D"}, {"E", "F"}};
    CHECK(wpoint_orbit_partition(half) == expected);
    CHECK_THROWS_AS(wpoint_orbit_partition(parse_params("2/3,2/3")), DomainError);

    const Origami o = build_origami(half);
    CHECK_THROWS_AS(weierstrass_permutation(o, "T"), DomainError);
    const auto rot = weierstrass_permutation(o, "S");
    CHECK(rot.at("D") == "D");

    // any word in the generators permutes labels inside the classes
    std::mt19937 rng(3);
    const std::vector<std::string> letters = {"TT", "tt", "S", "s"};
    std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
    for (int k = 0; k < 10; ++k) {
        std::string word;
        for (int i = 0; i < 6; ++i)
            word += letters[pick(rng)];
        CAPTURE(word);
        for (const auto& [from, to] : weierstrass_permutation(o, word)) {
            const bool same_class = std::any_of(expected.begin(), expected.end(), [&](const auto& cls) {
                return cls.count(from) && cls.count(to);
            });
            CHECK(same_class);
        }
    }
}
