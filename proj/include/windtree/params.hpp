#pragma once

#include "windtree/rational.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace windtree {

/// Parity class of the obstacle dimensions (a, b) = (p/q, r/s).
///   E       : p, r odd and q, s even
///   EPrime  : p, r even and q, s odd
enum class ParityClass { E, EPrime, Other };

std::string to_string(ParityClass c);

/// Obstacle dimensions of the wind-tree table: each obstacle is an a x b
/// rectangle centered at a point of Z^2.
struct Params {
    std::int64_t p = 1;
    std::int64_t q = 2;
    std::int64_t r = 1;
    std::int64_t s = 2;
    Rational a{1, 2};
    Rational b{1, 2};
    ParityClass parity = ParityClass::E;

    Rational half_a() const { return a / Rational(2); }
    Rational half_b() const { return b / Rational(2); }
    /// "p/q,r/s", the command-line form.
    std::string to_string() const;

    friend bool operator==(const Params& x, const Params& y)
    {
        return x.p == y.p && x.q == y.q && x.r == y.r && x.s == y.s;
    }
};

/// Validates (p, q, r, s) and classifies the parity. Throws DomainError unless
/// gcd(p,q) = gcd(r,s) = 1, 0 < p < q and 0 < r < s.
Params classify_params(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s);

/// Same, from two rationals in (0,1) (reduced automatically).
Params params_from(const Rational& a, const Rational& b);

/// Parses "p/q,r/s".
Params parse_params(std::string_view text);

} // namespace windtree
