#include <doctest.h>

#include "windtree/experiments.hpp"
#include "windtree/origami.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <sstream>

using namespace windtree;

namespace {

std::string recurrence_csv(const RecurrenceReport& r)
{
    std::ostringstream os;
    write_recurrence_csv(os, r);
    return os.str();
}

// Continued fraction partial quotients of a positive rational.
std::vector<BigInt> partial_quotients(Rational x, int n)
{
    std::vector<BigInt> out;
    for (int i = 0; i < n; ++i) {
        const BigInt a = x.floor();
        out.push_back(a);
        const Rational f = x - Rational(a);
        if (f.sign() == 0)
            break;
        x = Rational(1) / f;
    }
    return out;
}

} // namespace

TEST_CASE("theta forms")
{
    const Theta exact = Theta::parse("3/7", 0);
    CHECK(exact.exact());
    CHECK(exact.value == Rational(3, 7));
    CHECK(exact.to_string() == "3/7");

    const Theta dec = Theta::parse("0.75", 53);
    CHECK(dec.value == Rational(3, 4));
    CHECK(dec.to_string() == "0x1.8p-1@53");
    CHECK_THROWS_AS(Theta::parse("0.75", 0), DomainError);
    CHECK_THROWS_AS(Theta::parse("abc", 53), DomainError);

    const Theta golden = Theta::parse("cf:0,1,1,1,1,1,1,1,1,1", 53);
    CHECK(golden.value == Rational(34, 55));  // nine partial quotients 1
    CHECK(Theta::continued_fraction({0, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 53).value == golden.value);

    const Theta root = Theta::parse("sqrt:2,-1,1", 64);
    CHECK(root.value.to_double() == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
    // rounded to 64 significant bits: the denominator is a power of two
    const BigInt den = root.value.denominator();
    CHECK((den & (den - 1)) == 0);
    CHECK_THROWS_AS(Theta::parse("sqrt:2,-1", 64), DomainError);
}

TEST_CASE("boundary starts")
{
    const Params prm = parse_params("1/2,1/4");
    const auto a = sample_boundary(prm, 4000, 7);
    const auto b = sample_boundary(prm, 4000, 7);
    REQUIRE(a.size() == 4000);
    int vertical = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].side == b[i].side);
        CHECK(a[i].fraction == b[i].fraction);
        CHECK(a[i].fraction.sign() > 0);
        CHECK(a[i].fraction < Rational(1));
        vertical += is_vertical_side(a[i].side) ? 1 : 0;
        // the direction points away from the obstacle
        const BilliardState s = start_state(prm, Theta::parse("1/3", 0), a[i]);
        CHECK_NOTHROW(validate_state(s, prm));
    }
    // vertical sides carry b / (a + b) = 1/3 of the perimeter
    CHECK(vertical / 4000.0 == doctest::Approx(1.0 / 3).epsilon(0.1));
    CHECK(sample_boundary(prm, 10, 8)[0].fraction != a[0].fraction);

    const BoundaryStart parsed = parse_boundary_start("left:2/7:-+");
    CHECK(parsed.side == Side::Left);
    CHECK(parsed.fraction == Rational(2, 7));
    CHECK(parsed.orientation == Orientation{-1, 1});
    CHECK(to_string(parsed) == "left:2/7:-+");
    CHECK_THROWS_AS(parse_boundary_start("left:0:++"), DomainError);
    CHECK_THROWS_AS(parse_boundary_start("left:1/2:+"), DomainError);
}

TEST_CASE("parallel_for runs every index once")
{
    std::vector<std::atomic<int>> hits(97);
    parallel_for(97, 4, [&](int i) { ++hits[static_cast<std::size_t>(i)]; });
    for (const auto& h : hits)
        CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(5, 2, [](int i) {
                        if (i == 3)
                            throw DomainError("boom");
                    }),
                    DomainError);
}

TEST_CASE("recurrence in exact directions")
{
    const Params half = parse_params("1/2,1/2");
    // strongly parabolic: every orbit is closed and comes back
    const RecurrenceReport closed = recurrence_experiment(half, Theta::parse("3/7", 0), 20, 10000, 3);
    CHECK(closed.returned_fraction == 1);
    // 5/8 (even rise) at these parameters: the orbits escape
    const RecurrenceReport open = recurrence_experiment(half, Theta::parse("5/8", 0), 20, 10000, 3);
    CHECK(open.returned_fraction == 0);
    for (const RecurrenceSample& s : open.samples)
        CHECK((s.outcome == "no_return" || s.outcome == "singular"));
}

TEST_CASE("recurrence: float and exact agree on a dyadic slope")
{
    const Params half = parse_params("1/2,1/2");
    const auto exact = recurrence_experiment(half, Theta::parse("3/4", 0), 40, 2000, 11);
    const auto fl = recurrence_experiment(half, Theta::parse("0.75", 53), 40, 2000, 11);
    CHECK(exact.returned_fraction == fl.returned_fraction);
    for (std::size_t i = 0; i < exact.samples.size(); ++i) {
        CHECK(exact.samples[i].outcome == fl.samples[i].outcome);
        CHECK(exact.samples[i].first_return == fl.samples[i].first_return);
    }
    CHECK_THROWS_AS(recurrence_experiment(half, Theta::parse("0.75", 100), 4, 100, 1), DomainError);
}

TEST_CASE("recurrence is reproducible and monotone in the horizon")
{
    const Params half = parse_params("1/2,1/2");
    const Theta theta = Theta::parse("sqrt:2,-1,1", 53);
    const auto one = recurrence_experiment(half, theta, 30, 2000, 5, 1);
    const auto three = recurrence_experiment(half, theta, 30, 2000, 5, 3);
    CHECK(recurrence_csv(one) == recurrence_csv(three));
    CHECK(recurrence_csv(one).starts_with(
        "sample_id,start_side,start_offset,outcome,first_return_collisions,drift_m,drift_n,geometric_length\n"));

    Rational previous(0);
    for (std::int64_t h : {10, 100, 1000, 10000}) {
        const auto r = recurrence_experiment(half, theta, 30, h, 5);
        CHECK(r.returned_fraction >= previous);
        previous = r.returned_fraction;
    }
}

TEST_CASE("iterated logarithms")
{
    CHECK_FALSE(iterated_log_product(2.0, 1).has_value());
    CHECK(*iterated_log_product(std::exp(2.0), 1) == doctest::Approx(2.0));
    CHECK_FALSE(iterated_log_product(std::exp(2.0), 2).has_value());
    const double t = std::exp(std::exp(2.0));
    CHECK(*iterated_log_product(t, 2) == doctest::Approx(std::exp(2.0) * 2.0));
}

TEST_CASE("diffusion statistic")
{
    const Params twothirds = parse_params("2/3,2/3");
    CHECK_THROWS_AS(diffusion_experiment(parse_params("1/2,1/2"), Theta::parse("1/1", 0), 1, 100, 1), DomainError);

    // a strip direction: the statistic keeps growing
    const DiffusionReport strip = diffusion_experiment(twothirds, Theta::parse("1/1", 0), 1, 100000, 4);
    REQUIRE(strip.by_horizon.size() == 5);
    for (std::size_t i = 1; i < strip.by_horizon.size(); ++i)
        CHECK(strip.by_horizon[i].second > strip.by_horizon[i - 1].second);
    CHECK(strip.statistic == strip.by_horizon.back().second);

    // strongly parabolic on the E class: closed orbits, bounded statistic
    const DiffusionReport closed =
        diffusion_experiment(parse_params("1/2,1/2"), Theta::parse("3/7", 0), 1, 100000, 4, 0, true);
    CHECK(closed.by_horizon.back().second == closed.by_horizon[2].second);
    CHECK(closed.statistic < 10);

    // float theta: reproducible, witnesses increasing
    const Theta theta = Theta::parse("sqrt:2,-1,1", 53);
    const auto a = diffusion_experiment(twothirds, theta, 1, 20000, 9, 2);
    const auto b = diffusion_experiment(twothirds, theta, 1, 20000, 9, 2);
    std::ostringstream ca, cb;
    write_diffusion_csv(ca, a);
    write_diffusion_csv(cb, b);
    CHECK(ca.str() == cb.str());
    CHECK(ca.str().starts_with("t,dist,statistic\n"));
    for (std::size_t i = 1; i < a.witnesses.size(); ++i)
        CHECK(a.witnesses[i].statistic > a.witnesses[i - 1].statistic);

    const auto ensemble = diffusion_ensemble(twothirds, theta, 1, 1000, 9, 3, 2);
    REQUIRE(ensemble.size() == 3);
    CHECK(ensemble[2].statistic == a.by_horizon[2].second);
}

TEST_CASE("approximation by good directions")
{
    const Params half = parse_params("1/2,1/2");
    const auto sqrt2 = approximation_search(Theta::parse("sqrt:2,-1,1", 64), half, 6);
    REQUIRE(sqrt2.size() == 6);
    for (std::size_t i = 0; i < sqrt2.size(); ++i) {
        CHECK(sqrt2[i].p % 2 != 0);
        CHECK(sqrt2[i].q % 2 != 0);
        if (i > 0)
            CHECK(sqrt2[i].q > sqrt2[i - 1].q);
    }
    CHECK(sqrt2[0].p == 1);
    CHECK(sqrt2[0].q == 1);

    const auto one = approximation_search(Theta::parse("1/1", 0), half, 5);
    REQUIRE(one.size() == 1);
    CHECK(one[0].quality == 0);

    CHECK_THROWS_AS(approximation_search(Theta::parse("sqrt:2,-1,1", 10), half, 10), PrecisionError);
    CHECK_THROWS_AS(approximation_search(Theta::parse("1/1", 0), parse_params("1/3,1/2"), 3), DomainError);

    // the E' class: one-cylinder directions of the surface
    for (const Approximant& a : approximation_search(Theta::parse("sqrt:2,-1,1", 64), parse_params("2/3,2/3"), 4))
        CHECK(decompose_table_direction(parse_params("2/3,2/3"), Slope(a.p, a.q)).cylinders.size() == 1);
}

TEST_CASE("approximation quality over random directions")
{
    // Convergents satisfy q^2 |theta - p/q| < 1. Intermediate fractions can be
    // worse by the size of the next partial quotient; 32 is the empirical
    // bound over these seeded directions.
    const Params half = parse_params("1/2,1/2");
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i) {
        BigInt num = 0, den = 1;
        for (int w = 0; w < 4; ++w) {
            num = num * BigInt(1L << 32) + BigInt(static_cast<long>(rng() >> 32));
            den *= BigInt(1L << 32);
        }
        const Theta theta{Rational(num + den / 8, den), 256};
        const auto found = approximation_search(theta, half, 10);
        REQUIRE(found.size() == 10);
        const auto quotients = partial_quotients(theta.value, 200);
        for (const Approximant& a : found) {
            CHECK(a.quality < 32);
            // a convergent p_n/q_n: quality below 1
            BigInt p0 = 1, q0 = 0, p1 = quotients[0], q1 = 1;
            for (std::size_t k = 1; k < quotients.size() && q1 < a.q; ++k) {
                const BigInt p2 = quotients[k] * p1 + p0, q2 = quotients[k] * q1 + q0;
                p0 = p1, q0 = q1, p1 = p2, q1 = q2;
            }
            if (p1 == a.p && q1 == a.q)
                CHECK(a.quality < 1);
        }
    }
}

TEST_CASE("stability of periodic orbits")
{
    const Params half = parse_params("1/2,1/2");
    CHECK(stability_check(half, Slope(1, 1), Rational(0), 8).passed);

    const StabilityReport r = stability_check(half, Slope(1, 1), Rational(1, 1000), 8);
    CHECK(r.passed);
    CHECK(r.period == 4);
    REQUIRE(r.probes.size() == 8);
    for (const StabilityProbe& p : r.probes) {
        CHECK(p.outcome == OutcomeKind::Periodic);
        CHECK(p.same_combinatorics);
        CHECK(std::abs(p.slope.value().to_double() - 1) < 0.01);
    }
    // the probes include (1/2 + d, 1/2 - d) and (1/2 - d, 1/2 + d)
    int anti = 0;
    for (const StabilityProbe& p : r.probes)
        anti += (p.params.a - Rational(1, 2)) == -(p.params.b - Rational(1, 2)) && p.params.a != p.params.b ? 1 : 0;
    CHECK(anti == 2);

    for (const char* s : {"3/7", "7/9", "9/11", "9/29"})
        CHECK(find_stable_delta(half, Slope::parse(s), Rational(1, 1000), 8).has_value());

    CHECK_THROWS_AS(stability_check(half, Slope(3, 4), Rational(1, 1000), 8), DomainError);
    CHECK_THROWS_AS(stability_check(half, Slope(1, 1), Rational(-1, 1000), 8), DomainError);

    const BilliardState s = start_state(half, Slope(1, 1), r.start);
    const auto comb = combinatorics(s, half, 4);
    REQUIRE(comb.size() == 4);
    CHECK(comb.back().second == Cell{0, 0});
}
