#include <doctest.h>

#include "windtree/params.hpp"
#include "windtree/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>

using namespace windtree;

namespace {

Rational random_rational(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long> num(-1'000'000, 1'000'000);
    std::uniform_int_distribution<long> den(1, 1'000'000);
    return Rational(BigInt(num(rng)), BigInt(den(rng)));
}

// Brute-force list of reduced u/v with 1 <= u, v <= limit, sorted by value.
std::vector<std::pair<long, long>> brute_force_slopes(long limit)
{
    std::vector<std::pair<long, long>> out;
    for (long v = 1; v <= limit; ++v)
        for (long u = 1; u <= limit; ++u)
            if (std::gcd(u, v) == 1)
                out.emplace_back(u, v);
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.first * b.second < b.first * a.second; });
    return out;
}

// Closest p/q in (0,1) with the requested parities, or nothing.
std::optional<Rational> nearest_with_parity(double x, long q, bool p_odd)
{
    std::optional<Rational> best;
    double best_err = 2.0;
    const long centre = static_cast<long>(x * static_cast<double>(q));
    for (long p = std::max(1L, centre - 2); p <= std::min(q - 1, centre + 2); ++p) {
        if ((p % 2 != 0) != p_odd || std::gcd(p, q) != 1)
            continue;
        const double err = std::abs(static_cast<double>(p) / static_cast<double>(q) - x);
        if (err < best_err) {
            best_err = err;
            best = Rational(BigInt(p), BigInt(q));
        }
    }
    return best;
}

} // namespace

TEST_CASE("rational arithmetic is exact and canonical")
{
    const Rational x(BigInt(6), BigInt(-4));
    CHECK(x.numerator() == -3);
    CHECK(x.denominator() == 2);
    CHECK(Rational::parse("10/4") == Rational(5, 2));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(5, 2).round_half_up() == 3);
    CHECK(Rational(-5, 2).round_half_up() == -2);
    CHECK(Rational(3, 4).to_fraction_string() == "3/4");
    CHECK(Rational(3).to_fraction_string() == "3/1");
    CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
    CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
    CHECK_THROWS_AS(Rational::parse("x/2"), DomainError);
}

TEST_CASE("no-rounding witness: (x+y)-y = x and (x*y)/y = x")
{
    std::mt19937_64 rng(20091002);
    for (int i = 0; i < 2000; ++i) {
        const Rational x = random_rational(rng);
        const Rational y = random_rational(rng);
        CHECK((x + y) - y == x);
        if (!y.is_zero())
            CHECK((x * y) / y == x);
    }
}

TEST_CASE("slope reduction and ordering")
{
    const Slope s(6, 4);
    CHECK(s.rise() == 3);
    CHECK(s.run() == 2);
    CHECK(Slope::parse("0/5") == Slope(0, 1));
    CHECK(Slope::parse("1/0").is_vertical());
    CHECK(Slope(1, 3) < Slope(1, 2));
    CHECK(Slope(5, 1) < Slope(1, 0));
    CHECK_THROWS_AS(Slope(0, 0), DomainError);
    CHECK_THROWS_AS(Slope(-1, 2), DomainError);
}

TEST_CASE("classify_params")
{
    CHECK(classify_params(1, 2, 1, 2).parity == ParityClass::E);
    CHECK(classify_params(2, 3, 2, 3).parity == ParityClass::EPrime);
    CHECK(classify_params(1, 3, 1, 2).parity == ParityClass::Other);
    CHECK(classify_params(3, 4, 1, 6).parity == ParityClass::E);
    CHECK(classify_params(2, 5, 4, 7).parity == ParityClass::EPrime);

    CHECK_THROWS_AS(classify_params(2, 4, 1, 2), DomainError);
    CHECK_THROWS_AS(classify_params(0, 2, 1, 2), DomainError);
    CHECK_THROWS_AS(classify_params(3, 2, 1, 2), DomainError);
    CHECK_THROWS_AS(classify_params(1, 2, 2, 2), DomainError);
    CHECK_THROWS_AS(parse_params("2/4,1/2"), DomainError);
    CHECK(parse_params("2/3,2/3").parity == ParityClass::EPrime);
    CHECK(parse_params("1/2,1/2").to_string() == "1/2,1/2");
}

TEST_CASE("parity classes partition valid inputs and match direct checks")
{
    int counts[3] = {0, 0, 0};
    for (long q = 2; q <= 12; ++q)
        for (long p = 1; p < q; ++p)
            for (long s = 2; s <= 12; ++s)
                for (long r = 1; r < s; ++r) {
                    if (std::gcd(p, q) != 1 || std::gcd(r, s) != 1)
                        continue;
                    const Params prm = classify_params(p, q, r, s);
                    const bool in_e = p % 2 == 1 && r % 2 == 1 && q % 2 == 0 && s % 2 == 0;
                    const bool in_e_prime = p % 2 == 0 && r % 2 == 0 && q % 2 == 1 && s % 2 == 1;
                    CHECK(!(in_e && in_e_prime));
                    CHECK((prm.parity == ParityClass::E) == in_e);
                    CHECK((prm.parity == ParityClass::EPrime) == in_e_prime);
                    ++counts[static_cast<int>(prm.parity)];
                }
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);
    CHECK(counts[2] > 0);
}

TEST_CASE("mediant_enumerate")
{
    auto as_pairs = [](const std::vector<Slope>& v) {
        std::vector<std::pair<long, long>> out;
        for (const auto& s : v)
            out.emplace_back(s.rise().get_si(), s.run().get_si());
        return out;
    };
    CHECK(as_pairs(mediant_enumerate(1)) == std::vector<std::pair<long, long>>{{1, 1}});
    CHECK(as_pairs(mediant_enumerate(2)) == std::vector<std::pair<long, long>>{{1, 2}, {1, 1}, {2, 1}});
    CHECK(as_pairs(mediant_enumerate(3))
          == std::vector<std::pair<long, long>>{{1, 3}, {1, 2}, {2, 3}, {1, 1}, {3, 2}, {2, 1}, {3, 1}});
    for (long limit = 1; limit <= 25; ++limit)
        CHECK(as_pairs(mediant_enumerate(limit)) == brute_force_slopes(limit));
    CHECK_THROWS_AS(mediant_enumerate(0), DomainError);
}

TEST_CASE("E and E' come within eps of any target with denominators up to 4/eps")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const long qmax = static_cast<long>(4.0 / eps);
        for (int trial = 0; trial < 10; ++trial) {
            const double x = unit(rng), y = unit(rng);
            bool found_e = false, found_e_prime = false;
            for (int cls = 0; cls < 2; ++cls) {
                // class E: numerators odd over even denominators; E': even over odd.
                std::optional<Rational> bx, by;
                for (long q = 2; q <= qmax && !(bx && by); ++q) {
                    if ((q % 2 == 0) != (cls == 0))
                        continue;
                    if (!bx)
                        if (auto c = nearest_with_parity(x, q, cls == 0); c && std::abs(c->to_double() - x) <= eps)
                            bx = c;
                    if (!by)
                        if (auto c = nearest_with_parity(y, q, cls == 0); c && std::abs(c->to_double() - y) <= eps)
                            by = c;
                }
                REQUIRE(bx);
                REQUIRE(by);
                const Params prm = params_from(*bx, *by);
                if (cls == 0)
                    found_e = prm.parity == ParityClass::E;
                else
                    found_e_prime = prm.parity == ParityClass::EPrime;
            }
            CHECK(found_e);
            CHECK(found_e_prime);
        }
    }
}

TEST_CASE("arc lengths along one direction")
{
    const ArcLength a{Rational(3, 4), BigInt(2)};
    const ArcLength b{Rational(1, 4), BigInt(2)};
    CHECK((a + b).coeff == Rational(1));
    CHECK(a.ratio_to(b) == Rational(3));
    CHECK(ArcLength{Rational(1), BigInt(8)} == ArcLength{Rational(2), BigInt(2)});
    const ArcLength other{Rational(1), BigInt(5)};
    CHECK_THROWS_AS(a + other, DomainError);
}
