#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace windtree {

using BigInt = mpz_class;

/// Invalid input to an operation (bad parameters, precondition violated).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A floating-point computation could not certify its own result.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. Thin value wrapper over GMP's mpq_class.
class Rational {
public:
    Rational() = default;
    Rational(long n) : v_(n) {}  // NOLINT: implicit from integers is intended
    Rational(int n) : v_(static_cast<long>(n)) {}  // NOLINT
    Rational(const BigInt& n) : v_(n) {}  // NOLINT
    /// Accepts unevaluated GMP integer expressions such as `2 * k`.
    template <class Expr>
    Rational(const __gmp_expr<mpz_t, Expr>& e) : v_(BigInt(e)) {}  // NOLINT
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    /// Parses "n", "n/d" or "-n/d". Throws DomainError on malformed input or
    /// a zero denominator.
    static Rational parse(std::string_view text);

    BigInt numerator() const { return v_.get_num(); }
    BigInt denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    Rational abs() const { return Rational(::abs(v_)); }
    BigInt floor() const;
    BigInt ceil() const;
    /// Nearest integer, halves rounded up.
    BigInt round_half_up() const;
    /// x - floor(x), in [0, 1).
    Rational frac() const { return *this - Rational(floor()); }

    double to_double() const { return v_.get_d(); }
    long double to_long_double() const;
    /// "num/den", or "num" when the denominator is 1.
    std::string to_string() const;
    /// Always "num/den", the serialization form used in data files.
    std::string to_fraction_string() const;

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class v_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Exact planar point in table units.
struct PointQ {
    Rational x;
    Rational y;

    friend bool operator==(const PointQ&, const PointQ&) = default;
    friend auto operator<=>(const PointQ&, const PointQ&) = default;
};

std::ostream& operator<<(std::ostream& os, const PointQ& p);

/// Sign class of a direction vector (dx, dy); each component is +1 or -1.
struct Orientation {
    int sx = 1;
    int sy = 1;

    Orientation flipped_x() const { return {-sx, sy}; }
    Orientation flipped_y() const { return {sx, -sy}; }
    Orientation reversed() const { return {-sx, -sy}; }
    /// Index in 0..3, usable as the unfolding copy label (I..IV).
    int index() const { return (sx > 0 ? 0 : 1) + (sy > 0 ? 0 : 2); }
    std::string to_string() const;
    static Orientation parse(std::string_view text);

    friend bool operator==(const Orientation&, const Orientation&) = default;
    friend auto operator<=>(const Orientation&, const Orientation&) = default;
};

/// Unsigned reduced slope u/v (rise over run). The sign of the actual motion
/// lives in Orientation; reflections only flip signs, so the magnitude here is
/// conserved along a billiard trajectory. Vertical is represented as 1/0.
class Slope {
public:
    Slope() : u_(1), v_(1) {}
    Slope(BigInt u, BigInt v);
    Slope(long u, long v) : Slope(BigInt(u), BigInt(v)) {}

    /// Parses "u/v" (u >= 0, v >= 0, not both zero) or a bare integer.
    static Slope parse(std::string_view text);

    const BigInt& rise() const { return u_; }
    const BigInt& run() const { return v_; }
    bool is_horizontal() const { return u_ == 0; }
    bool is_vertical() const { return v_ == 0; }
    bool is_axis() const { return is_horizontal() || is_vertical(); }
    /// u/v as a rational; throws DomainError for the vertical slope.
    Rational value() const;
    /// u^2 + v^2, the squared norm of the direction vector (v, u).
    BigInt norm_squared() const { return u_ * u_ + v_ * v_; }
    std::string to_string() const;

    friend bool operator==(const Slope& a, const Slope& b) { return a.u_ == b.u_ && a.v_ == b.v_; }
    /// Ordered by value, vertical last.
    friend std::strong_ordering operator<=>(const Slope& a, const Slope& b);
    friend std::ostream& operator<<(std::ostream& os, const Slope& s) { return os << s.to_string(); }

private:
    BigInt u_;
    BigInt v_;
};

/// A length of the form coeff * sqrt(radicand). Every segment of a trajectory
/// with slope u/v has length t * sqrt(u^2 + v^2) for a rational t, so lengths
/// along one direction stay exact and comparable.
struct ArcLength {
    Rational coeff;
    BigInt radicand = 1;

    /// Sum of two lengths along the same direction (radicands must match).
    ArcLength& operator+=(const ArcLength& o);
    friend ArcLength operator+(ArcLength a, const ArcLength& b) { return a += b; }
    /// Exact ratio of two lengths along the same direction.
    Rational ratio_to(const ArcLength& o) const;
    double to_double() const;
    std::string to_string() const;
    friend bool operator==(const ArcLength& a, const ArcLength& b);
};

/// Lists every reduced u/v with 1 <= u, v <= limit exactly once, in increasing
/// order, by in-order traversal of the Stern-Brocot tree.
std::vector<Slope> mediant_enumerate(long limit);

/// Greatest common divisor of two non-negative machine integers.
std::int64_t gcd64(std::int64_t a, std::int64_t b);

} // namespace windtree
