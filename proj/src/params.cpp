#include "windtree/params.hpp"

namespace windtree {

std::string to_string(ParityClass c)
{
    switch (c) {
    case ParityClass::E: return "E";
    case ParityClass::EPrime: return "E'";
    case ParityClass::Other: return "OTHER";
    }
    return "?";
}

std::string Params::to_string() const
{
    return std::to_string(p) + "/" + std::to_string(q) + "," + std::to_string(r) + "/" + std::to_string(s);
}

Params classify_params(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s)
{
    if (!(0 < p && p < q) || !(0 < r && r < s))
        throw DomainError("obstacle dimensions must lie in (0,1): got " + std::to_string(p) + "/"
                          + std::to_string(q) + ", " + std::to_string(r) + "/" + std::to_string(s));
    if (gcd64(p, q) != 1 || gcd64(r, s) != 1)
        throw DomainError("obstacle dimensions must be reduced fractions");

    Params out;
    out.p = p;
    out.q = q;
    out.r = r;
    out.s = s;
    out.a = Rational(BigInt(static_cast<long>(p)), BigInt(static_cast<long>(q)));
    out.b = Rational(BigInt(static_cast<long>(r)), BigInt(static_cast<long>(s)));

    const bool p_odd = p % 2 != 0, q_odd = q % 2 != 0, r_odd = r % 2 != 0, s_odd = s % 2 != 0;
    if (p_odd && r_odd && !q_odd && !s_odd)
        out.parity = ParityClass::E;
    else if (!p_odd && !r_odd && q_odd && s_odd)
        out.parity = ParityClass::EPrime;
    else
        out.parity = ParityClass::Other;
    return out;
}

Params params_from(const Rational& a, const Rational& b)
{
    auto to64 = [](const BigInt& v) {
        if (!v.fits_slong_p())
            throw DomainError("obstacle dimension denominator too large");
        return static_cast<std::int64_t>(v.get_si());
    };
    return classify_params(to64(a.numerator()), to64(a.denominator()), to64(b.numerator()),
                           to64(b.denominator()));
}

Params parse_params(std::string_view text)
{
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        throw DomainError("params must be written p/q,r/s");
    const Rational a = Rational::parse(text.substr(0, comma));
    const Rational b = Rational::parse(text.substr(comma + 1));
    // Reject non-reduced input rather than silently reducing it.
    auto raw_part = [](std::string_view t) {
        const auto slash = t.find('/');
        if (slash == std::string_view::npos)
            throw DomainError("params must be written p/q,r/s");
        return std::pair{Rational::parse(t.substr(0, slash)), Rational::parse(t.substr(slash + 1))};
    };
    const auto [pn, pd] = raw_part(text.substr(0, comma));
    const auto [rn, rd] = raw_part(text.substr(comma + 1));
    if (pn.numerator() != a.numerator() || pd.numerator() != a.denominator()
        || rn.numerator() != b.numerator() || rd.numerator() != b.denominator())
        throw DomainError("obstacle dimensions must be reduced fractions");
    return params_from(a, b);
}

} // namespace windtree
