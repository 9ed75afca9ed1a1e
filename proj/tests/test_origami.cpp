#include <doctest.h>

#include "oracles.hpp"
#include "windtree/origami.hpp"

#include <algorithm>
#include <random>

using namespace windtree;

namespace {

const std::vector<const char*> kEClass = {"1/2,1/2", "1/4,3/4", "3/4,1/6", "1/2,5/8", "5/6,3/10"};
const std::vector<const char*> kEPrimeClass = {"2/3,2/3", "2/5,4/7", "4/5,2/3", "2/7,6/7", "4/9,2/5"};

std::string random_word(std::mt19937& rng, int length)
{
    static const char letters[] = {'T', 't', 'S', 's'};
    std::uniform_int_distribution<int> pick(0, 3);
    std::string w;
    for (int i = 0; i < length; ++i)
        w += letters[pick(rng)];
    return w;
}

// Applies the 2x2 integer matrix of a word to (x, y).
std::pair<long, long> act_on_vector(std::string_view word, long x, long y)
{
    for (char c : word) {
        switch (c) {
        case 'T': x += y; break;
        case 't': x -= y; break;
        case 'S': std::tie(x, y) = std::pair{-y, x}; break;
        case 's': std::tie(x, y) = std::pair{y, -x}; break;
        }
    }
    return {x, y};
}

int integer_fixed_points(const Origami& o)
{
    const auto iota = hyperelliptic_involution(o);
    REQUIRE(iota);
    int k = 0;
    for (const auto& f : involution_fixed_points(o, *iota))
        if (f.x.is_zero() && f.y.is_zero())
            ++k;
    return k;
}

} // namespace

TEST_CASE("L-shaped origami of Y_{a,b}")
{
    const Origami half = build_origami(parse_params("1/2,1/2"));
    CHECK(half.n_cells() == 3);
    CHECK(build_origami(parse_params("1/3,1/2")).n_cells() == 5);
    CHECK(build_origami(parse_params("2/3,2/3")).n_cells() == 5);
    // the 3-square L: cells 0 1 on the bottom row, 2 above 0
    CHECK(half.sigma_h == std::vector<int>{1, 0, 2});
    CHECK(half.sigma_v == std::vector<int>{2, 1, 0});
    for (long q = 2; q <= 7; ++q)
        for (long p = 1; p < q; ++p)
            for (long s = 2; s <= 6; ++s)
                for (long r = 1; r < s; ++r) {
                    if (std::gcd(p, q) != 1 || std::gcd(r, s) != 1)
                        continue;
                    const Origami o = build_origami(classify_params(p, q, r, s));
                    CHECK(o.n_cells() == q * s - p * r);
                    CHECK(stratum(o) == std::vector<int>{2});
                    CHECK(vertex_data(o).multiplicity.size() == static_cast<std::size_t>(o.n_cells() - 2));
                }
}

TEST_CASE("Weierstrass points")
{
    const WeierstrassSet w = locate_weierstrass(parse_params("1/2,1/2"));
    CHECK(w.integer_count == 1);
    CHECK(w.points.at("E") == PointQ{Rational(3, 2), 0});
    CHECK(w.points.at("F") == PointQ{0, Rational(3, 2)});
    CHECK(w.points.at("A") == PointQ{Rational(1, 2), Rational(1, 2)});

    for (const char* ps : kEClass) {
        CAPTURE(ps);
        const WeierstrassSet we = locate_weierstrass(parse_params(ps));
        CHECK(we.integer_count == 1);
        for (const char* label : {"A", "B", "C"})
            CHECK(we.torus_projection(label) == PointQ{Rational(1, 2), Rational(1, 2)});
        // Cross-check with the fixed points of the combinatorial involution.
        CHECK(integer_fixed_points(build_origami(parse_params(ps))) == 1);
    }
    for (const char* ps : kEPrimeClass) {
        CAPTURE(ps);
        const WeierstrassSet we = locate_weierstrass(parse_params(ps));
        CHECK(we.integer_count == 3);
        CHECK(integer_fixed_points(build_origami(parse_params(ps))) == 3);
    }
}

TEST_CASE("hyperelliptic involution")
{
    for (const char* ps : {"1/2,1/2", "2/3,2/3", "1/3,1/2", "3/4,1/6", "2/5,4/7"}) {
        CAPTURE(ps);
        const Origami o = build_origami(parse_params(ps));
        const auto iota = hyperelliptic_involution(o);
        REQUIRE(iota);
        const VertexData vd = vertex_data(o);
        const auto fixed = involution_fixed_points(o, *iota);
        CHECK(fixed.size() == 6);
        // every marked point is one of them, and they are distinct
        for (const auto& m : o.marked_points) {
            CHECK(same_point(o, vd, apply_involution(o, *iota, m), m));
            CHECK(std::count_if(fixed.begin(), fixed.end(),
                                [&](const MarkedPoint& f) { return same_point(o, vd, f, m); })
                  == 1);
        }
        // a non-Weierstrass point moves
        const MarkedPoint g{"", 0, Rational(1, 3), Rational(1, 5)};
        CHECK_FALSE(same_point(o, vd, apply_involution(o, *iota, g), g));
    }
}

TEST_CASE("orbit invariant")
{
    for (const char* ps : kEClass) {
        const Origami o = build_origami(parse_params(ps));
        const OrbitInvariant inv = orbit_invariant(o);
        CHECK(inv.integer_weierstrass == 1);
        if (o.n_cells() >= 5)
            CHECK(inv.orbit == OrbitClass::OrbitA);
    }
    for (const char* ps : kEPrimeClass)
        CHECK(orbit_invariant(build_origami(parse_params(ps))).orbit == OrbitClass::OrbitB);
    const OrbitInvariant small = orbit_invariant(build_origami(parse_params("1/2,1/2")));
    CHECK(small.orbit == OrbitClass::NotApplicable);
    CHECK(small.integer_weierstrass == 1);
    const Origami torus{{0}, {0}, {}};
    CHECK_THROWS_AS(orbit_invariant(torus), DomainError);
}

TEST_CASE("SL(2,Z) action")
{
    const Origami half = build_origami(parse_params("1/2,1/2"));
    CHECK(sl2z_act(half, "") == half);
    CHECK(sl2z_act(half, "Tt") == half);
    {
        // S^4 fixes the permutations; a corner mark may move to another cell
        // at the same vertex
        const Origami g = sl2z_act(half, "SSSS");
        CHECK(g.sigma_h == half.sigma_h);
        CHECK(g.sigma_v == half.sigma_v);
        const VertexData vd = vertex_data(half);
        for (std::size_t k = 0; k < g.marked_points.size(); ++k)
            CHECK(same_point(half, vd, g.marked_points[k], half.marked_points[k]));
    }
    CHECK(sl2z_act(half, "sS") == half);
    // Veech group elements of the 3-square L
    CHECK(isomorphic(sl2z_act(half, "TT"), half));
    CHECK(isomorphic(sl2z_act(half, "S"), half));
    CHECK_FALSE(isomorphic(sl2z_act(half, "T"), half));
    CHECK_THROWS_AS(sl2z_act(half, "X"), DomainError);
    CHECK(inverse_word("TsS") == "sSt");

    std::mt19937 rng(11);
    for (const char* ps : {"1/2,1/2", "2/3,2/3", "1/4,3/4", "2/5,4/7", "1/3,1/2"}) {
        const Origami o = build_origami(parse_params(ps));
        const int before = integer_fixed_points(o);
        for (int k = 0; k < 10; ++k) {
            const std::string w = random_word(rng, 1 + k * 2);
            CAPTURE(w);
            const Origami g = sl2z_act(o, w);
            validate_origami(g);
            CHECK(g.n_cells() == o.n_cells());
            CHECK(stratum(g) == stratum(o));
            CHECK(integer_fixed_points(g) == before);
            CHECK(sl2z_act(g, inverse_word(w)) == o);
            // transported Weierstrass points are still fixed by the involution
            const auto iota = hyperelliptic_involution(g);
            REQUIRE(iota);
            const VertexData vd = vertex_data(g);
            for (const auto& m : g.marked_points)
                CHECK(same_point(g, vd, apply_involution(g, *iota, m), m));
        }
    }
}

TEST_CASE("canonical form")
{
    const Origami half = build_origami(parse_params("1/2,1/2"));
    // relabel cells by a permutation
    const std::vector<int> perm = {2, 0, 1};
    Origami r{{0, 0, 0}, {0, 0, 0}, {}};
    for (int c = 0; c < 3; ++c) {
        r.sigma_h[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])]
            = perm[static_cast<std::size_t>(half.sigma_h[static_cast<std::size_t>(c)])];
        r.sigma_v[static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])]
            = perm[static_cast<std::size_t>(half.sigma_v[static_cast<std::size_t>(c)])];
    }
    CHECK(isomorphic(r, half));
    CHECK(canonical_form(r).sigma_h == canonical_form(half).sigma_h);
    CHECK_FALSE(isomorphic(Origami{{1, 0}, {0, 1}, {}}, Origami{{0, 1}, {1, 0}, {}}));
}

TEST_CASE("reduction word sends the direction to the horizontal")
{
    for (const Slope& s : mediant_enumerate(12)) {
        const std::string w = reduction_word(s);
        CHECK(act_on_vector(w, s.run().get_si(), s.rise().get_si()) == std::pair{1L, 0L});
    }
    CHECK(reduction_word(Slope(0, 1)).empty());
    CHECK(act_on_vector(reduction_word(Slope(1, 0)), 0, 1) == std::pair{1L, 0L});
}

TEST_CASE("cylinder decompositions")
{
    const Params half = parse_params("1/2,1/2");
    const Origami o = build_origami(half);
    const auto horiz = decompose_direction(o, Slope(0, 1));
    REQUIRE(horiz.cylinders.size() == 2);
    CHECK(oracle::library_cylinders(o, Slope(0, 1)) == std::multiset<std::pair<long, long>>{{1, 1}, {2, 1}});

    const auto diag = decompose_table_direction(half, Slope(1, 1));
    REQUIRE(diag.cylinders.size() == 1);
    CHECK(diag.cylinders[0].waist_marked_points == std::vector<std::string>{"E", "F"});
    CHECK(diag.cylinders[0].modulus == Rational(1, 3));

    for (const char* ps : {"1/2,1/2", "2/3,2/3", "1/4,3/4", "1/3,1/2"}) {
        const Origami l = build_origami(parse_params(ps));
        for (const Slope& s : mediant_enumerate(7)) {
            const auto dec = decompose_direction(l, s);
            std::int64_t area = 0;
            for (const auto& c : dec.cylinders) {
                area += c.circumference * c.height;
                CHECK(c.modulus == Rational(BigInt(c.height), BigInt(c.circumference)));
            }
            CHECK(area == l.n_cells());
        }
    }
}

TEST_CASE("one-cylinder waists of orbit A surfaces carry exactly E and F")
{
    for (const char* ps : kEClass) {
        const Params prm = parse_params(ps);
        const Origami o = build_origami(prm);
        int one_cylinder = 0;
        for (const Slope& s : mediant_enumerate(8)) {
            const auto dec = decompose_direction(o, s);
            if (dec.cylinders.size() != 1)
                continue;
            ++one_cylinder;
            CAPTURE(ps);
            CAPTURE(s.to_string());
            CHECK(dec.cylinders[0].waist_marked_points == std::vector<std::string>{"E", "F"});
        }
        CHECK(one_cylinder > 0);
    }
}

TEST_CASE("decompose_direction matches the separatrix oracle (origamis up to 6 cells)")
{
    long compared = 0;
    for (int n = 1; n <= 6; ++n)
        for (const Origami& o : oracle::all_origamis(n))
            for (const Slope& s : mediant_enumerate(5)) {
                ++compared;
                CHECK(oracle::library_cylinders(o, s)
                      == oracle::separatrix_cylinders(o.sigma_h, o.sigma_v, s.run().get_si(), s.rise().get_si()));
            }
    CHECK(compared == (1 + 3 + 7 + 26 + 97 + 624) * 19);
}

TEST_CASE("good one-cylinder directions")
{
    const Params half = parse_params("1/2,1/2");
    CHECK(is_good_one_cylinder(half, Slope(1, 1)));
    CHECK_FALSE(is_good_one_cylinder(half, Slope(1, 2)));
    std::vector<Slope> odd_odd;
    for (const Slope& s : mediant_enumerate(9))
        if (s.rise() % 2 != 0 && s.run() % 2 != 0)
            odd_odd.push_back(s);
    CHECK(enumerate_good_directions(half, 9) == odd_odd);
    const auto upto30 = enumerate_good_directions(half, 30);
    for (const char* s : {"1/1", "3/7", "7/9", "9/11", "9/29"})
        CHECK(std::find(upto30.begin(), upto30.end(), Slope::parse(s)) != upto30.end());

    for (const char* ps : kEPrimeClass)
        CHECK(enumerate_good_directions(parse_params(ps), 9).empty());
    CHECK(enumerate_good_directions(parse_params("1/3,1/2"), 9).empty());
    for (const char* ps : kEClass)
        CHECK_FALSE(enumerate_good_directions(parse_params(ps), 9).empty());
}

TEST_CASE("E reaches F after half a circumference")
{
    for (const char* ps : {"1/2,1/2", "1/4,3/4", "3/4,1/6"}) {
        const Params prm = parse_params(ps);
        for (const Slope& s : enumerate_good_directions(prm, 9)) {
            CAPTURE(ps);
            CAPTURE(s.to_string());
            CHECK(e_to_f_half_period(prm, s));
        }
    }
    CHECK_THROWS_AS(e_to_f_half_period(parse_params("1/2,1/2"), Slope(1, 2)), DomainError);
}

TEST_CASE("cylinder bounds")
{
    const Origami torus{{0}, {0}, {}};
    CHECK(cylinder_bounds_constant(torus, 1) == Rational(2));
    CHECK(cylinder_bounds_constant(torus, 20) == Rational(2));
    const Origami half = build_origami(parse_params("1/2,1/2"));
    Rational previous(0);
    for (long limit = 1; limit <= 20; ++limit) {
        const Rational k2 = cylinder_bounds_constant(half, limit);
        CHECK(k2 >= previous);
        previous = k2;
    }
    // K <= d sqrt 2 with d = 3 cells
    CHECK(previous <= Rational(18));
}

TEST_CASE("text serialization round-trips")
{
    for (const char* ps : {"1/2,1/2", "2/5,4/7"}) {
        const Origami o = sl2z_act(build_origami(parse_params(ps)), "TsT");
        const std::string text = serialize(o);
        CHECK(parse_origami(text) == o);
    }
    CHECK(serialize(build_origami(parse_params("1/2,1/2"))).rfind("3\n1 2\n0 1\n2 0\n", 0) == 0);
    CHECK_THROWS_AS(parse_origami("2\n0 0\n1 1\n"), DomainError);  // disconnected
    CHECK_THROWS_AS(parse_origami("2\n0 0\n0 1\n"), DomainError);  // not a permutation
}
