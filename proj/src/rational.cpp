#include "windtree/rational.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace windtree {

namespace {

BigInt parse_integer(std::string_view text)
{
    if (text.empty())
        throw DomainError("empty integer");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size())
        throw DomainError("malformed integer: " + std::string(text));
    for (std::size_t j = i; j < text.size(); ++j)
        if (text[j] < '0' || text[j] > '9')
            throw DomainError("malformed integer: " + std::string(text));
    std::string digits(text.substr(text[0] == '+' ? 1 : 0));
    return BigInt(digits, 10);
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

Rational::Rational(const BigInt& num, const BigInt& den)
{
    if (den == 0)
        throw DomainError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text)
{
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_integer(text));
    return Rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
}

BigInt Rational::floor() const
{
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
}

BigInt Rational::ceil() const
{
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return r;
}

BigInt Rational::round_half_up() const
{
    return (*this + Rational(1, 2)).floor();
}

long double Rational::to_long_double() const
{
    // Split into integer part and fraction so large integer parts keep the
    // fractional digits.
    const BigInt fl = floor();
    const Rational fr = *this - Rational(fl);
    long double whole = static_cast<long double>(fl.get_d());
    const BigInt scaled = (fr * Rational(BigInt(BigInt(1) << 64))).floor();
    long double part = static_cast<long double>(scaled.get_d()) / 18446744073709551616.0L;
    return whole + part;
}

std::string Rational::to_string() const
{
    if (is_integer())
        return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::to_fraction_string() const
{
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const PointQ& p)
{
    return os << "(" << p.x << ", " << p.y << ")";
}

std::string Orientation::to_string() const
{
    std::string s;
    s += sx > 0 ? '+' : '-';
    s += sy > 0 ? '+' : '-';
    return s;
}

Orientation Orientation::parse(std::string_view text)
{
    text = trim(text);
    if (text.size() != 2 || (text[0] != '+' && text[0] != '-') || (text[1] != '+' && text[1] != '-'))
        throw DomainError("orientation must be one of ++, +-, -+, --");
    return {text[0] == '+' ? 1 : -1, text[1] == '+' ? 1 : -1};
}

Slope::Slope(BigInt u, BigInt v) : u_(std::move(u)), v_(std::move(v))
{
    if (u_ < 0 || v_ < 0)
        throw DomainError("slope components must be non-negative; signs belong to the orientation");
    if (u_ == 0 && v_ == 0)
        throw DomainError("slope 0/0 is undefined");
    BigInt g;
    mpz_gcd(g.get_mpz_t(), u_.get_mpz_t(), v_.get_mpz_t());
    u_ /= g;
    v_ /= g;
}

Slope Slope::parse(std::string_view text)
{
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Slope(parse_integer(text), BigInt(1));
    return Slope(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

Rational Slope::value() const
{
    if (is_vertical())
        throw DomainError("vertical slope has no finite value");
    return Rational(u_, v_);
}

std::string Slope::to_string() const
{
    return u_.get_str() + "/" + v_.get_str();
}

std::strong_ordering operator<=>(const Slope& a, const Slope& b)
{
    // u1/v1 vs u2/v2 with v >= 0: compare u1*v2 and u2*v1.
    const BigInt lhs = a.u_ * b.v_;
    const BigInt rhs = b.u_ * a.v_;
    const int c = cmp(lhs, rhs);
    return c < 0 ? std::strong_ordering::less
         : c > 0 ? std::strong_ordering::greater
                 : std::strong_ordering::equal;
}

ArcLength& ArcLength::operator+=(const ArcLength& o)
{
    if (o.coeff.is_zero())
        return *this;
    if (coeff.is_zero()) {
        *this = o;
        return *this;
    }
    if (radicand != o.radicand)
        throw DomainError("adding lengths along different directions");
    coeff += o.coeff;
    return *this;
}

Rational ArcLength::ratio_to(const ArcLength& o) const
{
    if (radicand != o.radicand)
        throw DomainError("ratio of lengths along different directions");
    return coeff / o.coeff;
}

double ArcLength::to_double() const
{
    return coeff.to_double() * std::sqrt(radicand.get_d());
}

std::string ArcLength::to_string() const
{
    if (radicand == 1)
        return coeff.to_string();
    return coeff.to_string() + "*sqrt(" + radicand.get_str() + ")";
}

bool operator==(const ArcLength& a, const ArcLength& b)
{
    if (a.coeff.is_zero() || b.coeff.is_zero())
        return a.coeff.is_zero() && b.coeff.is_zero();
    // Radicands are squared norms of primitive vectors; compare a^2 r exactly.
    return a.coeff.sign() == b.coeff.sign()
        && a.coeff * a.coeff * Rational(a.radicand) == b.coeff * b.coeff * Rational(b.radicand);
}

namespace {

void stern_brocot(const BigInt& lu, const BigInt& lv, const BigInt& ru, const BigInt& rv,
                  long limit, std::vector<Slope>& out)
{
    const BigInt mu = lu + ru;
    const BigInt mv = lv + rv;
    if (mu > limit || mv > limit)
        return;
    stern_brocot(lu, lv, mu, mv, limit, out);
    out.emplace_back(mu, mv);
    stern_brocot(mu, mv, ru, rv, limit, out);
}

} // namespace

std::vector<Slope> mediant_enumerate(long limit)
{
    if (limit < 1)
        throw DomainError("mediant_enumerate: limit must be >= 1");
    std::vector<Slope> out;
    stern_brocot(BigInt(0), BigInt(1), BigInt(1), BigInt(0), limit, out);
    return out;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
    return std::gcd(a, b);
}

} // namespace windtree
