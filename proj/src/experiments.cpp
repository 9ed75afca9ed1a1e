#include "windtree/experiments.hpp"
#include "windtree/origami.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace windtree {

// ---------------------------------------------------------------------------
// Theta

std::string Theta::to_string() const
{
    if (exact())
        return value.to_string();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a@%d", value.to_double(), precision_bits);
    return buf;
}

Theta Theta::exact_slope(const Slope& s)
{
    if (s.is_vertical())
        throw DomainError("Theta: vertical direction has no slope value");
    return Theta{s.value(), 0};
}

Theta Theta::continued_fraction(const std::vector<long>& terms, int bits)
{
    if (terms.empty())
        throw DomainError("Theta: empty continued fraction");
    Rational x(terms.back());
    for (auto it = std::next(terms.rbegin()); it != terms.rend(); ++it)
        x = Rational(*it) + Rational(1) / x;
    return Theta{x, bits};
}

namespace {

// Rounds a positive mpf value to `bits` significant bits, exactly.
Rational round_to_bits(const mpf_class& v, int bits)
{
    long exp2 = 0;
    mpf_get_d_2exp(&exp2, v.get_mpf_t());
    const long shift = bits - exp2;
    mpf_class scaled(v, static_cast<mp_bitcnt_t>(bits + 64));
    if (shift >= 0)
        mpf_mul_2exp(scaled.get_mpf_t(), v.get_mpf_t(), static_cast<mp_bitcnt_t>(shift));
    else
        mpf_div_2exp(scaled.get_mpf_t(), v.get_mpf_t(), static_cast<mp_bitcnt_t>(-shift));
    const mpf_class rounded = floor(scaled + 0.5);
    const BigInt m(rounded);
    BigInt pow2 = 1;
    mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), static_cast<mp_bitcnt_t>(std::abs(shift)));
    return shift >= 0 ? Rational(m, pow2) : Rational(m * pow2);
}

} // namespace

Theta Theta::quadratic(long n, long shift, long scale, int bits)
{
    if (bits < 1 || n < 0 || scale == 0)
        throw DomainError("Theta::quadratic: bad arguments");
    const mpf_class root = sqrt(mpf_class(n, static_cast<mp_bitcnt_t>(bits + 128)));
    const mpf_class v = (root + shift) / scale;
    if (v <= 0)
        throw DomainError("Theta::quadratic: slope must be positive");
    return Theta{round_to_bits(v, bits), bits};
}

namespace {

std::vector<long> parse_long_list(std::string_view text)
{
    std::vector<long> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item(text.substr(pos, comma - pos));
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (item.empty() || used != item.size())
            throw DomainError("Theta: bad integer list '" + std::string(text) + "'");
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

} // namespace

Theta Theta::parse(std::string_view text, int bits)
{
    if (text.starts_with("cf:") || text.starts_with("sqrt:")) {
        if (bits < 1)
            throw DomainError("Theta: '" + std::string(text) + "' needs a precision in bits");
        const bool cf = text.starts_with("cf:");
        const std::vector<long> v = parse_long_list(text.substr(cf ? 3 : 5));
        if (cf)
            return continued_fraction(v, bits);
        if (v.size() != 3)
            throw DomainError("Theta: sqrt:n,shift,scale expects three integers");
        return quadratic(v[0], v[1], v[2], bits);
    }
    if (text.find('/') != std::string_view::npos) {
        const Slope s = Slope::parse(text);
        return exact_slope(s);
    }
    // decimal: digits [. digits]
    BigInt num = 0, den = 1;
    bool point = false, any = false;
    for (char c : text) {
        if (c == '.' && !point) {
            point = true;
            continue;
        }
        if (c < '0' || c > '9')
            throw DomainError("Theta: cannot parse '" + std::string(text) + "'");
        any = true;
        num = num * 10 + (c - '0');
        if (point)
            den *= 10;
    }
    if (!any || num == 0)
        throw DomainError("Theta: slope must be a positive number");
    if (bits < 1)
        throw DomainError("Theta: a decimal slope needs a precision in bits");
    return Theta{Rational(num, den), bits};
}

// ---------------------------------------------------------------------------
// Boundary starts and threading.

std::vector<BoundaryStart> sample_boundary(const Params& prm, int n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const BigInt grid = BigInt(1) << 32;
    const Rational perimeter = Rational(2) * (prm.a + prm.b);
    auto uniform = [&] { return Rational(BigInt(2) * BigInt(static_cast<unsigned long>(rng() >> 32)) + 1, grid * 2); };
    std::vector<BoundaryStart> out;
    for (int i = 0; i < n; ++i) {
        const Rational pos = uniform() * perimeter;
        BoundaryStart b;
        const int tangential = (rng() & 1) ? 1 : -1;
        if (pos < prm.a) {
            b.side = Side::Bottom;
            b.orientation = {tangential, -1};
        } else if (pos < prm.a + prm.b) {
            b.side = Side::Right;
            b.orientation = {1, tangential};
        } else if (pos < Rational(2) * prm.a + prm.b) {
            b.side = Side::Top;
            b.orientation = {tangential, 1};
        } else {
            b.side = Side::Left;
            b.orientation = {-1, tangential};
        }
        b.fraction = uniform();
        out.push_back(b);
    }
    return out;
}

std::string to_string(const BoundaryStart& b)
{
    return windtree::to_string(b.side) + ":" + b.fraction.to_string() + ":" + (b.orientation.sx > 0 ? "+" : "-")
         + (b.orientation.sy > 0 ? "+" : "-");
}

BoundaryStart parse_boundary_start(std::string_view text)
{
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw DomainError("start: expected side:fraction:orientation, got '" + std::string(text) + "'");
    BoundaryStart b;
    b.side = parse_side(text.substr(0, c1));
    b.fraction = Rational::parse(text.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view o = text.substr(c2 + 1);
    if (o.size() != 2 || (o[0] != '+' && o[0] != '-') || (o[1] != '+' && o[1] != '-'))
        throw DomainError("start: orientation must be one of ++, +-, -+, --");
    b.orientation = Orientation{o[0] == '+' ? 1 : -1, o[1] == '+' ? 1 : -1};
    if (b.fraction.sign() <= 0 || b.fraction >= Rational(1))
        throw DomainError("start: fraction must lie in (0, 1)");
    return b;
}

BoundaryStart regular_start(const Params& prm, const Slope& slope)
{
    // a horizontal direction leaves from a vertical side
    const Side side = slope.is_horizontal() ? Side::Right : Side::Top;
    BoundaryStart b;
    for (long n = 1; n <= 10; ++n) {
        b = BoundaryStart{side, Rational(n, 4 * n - 1), Orientation{1, 1}};
        if (classify_trajectory(start_state(prm, slope, b), prm).kind != OutcomeKind::Singular)
            return b;
    }
    return b;
}

BilliardState start_state(const Params& prm, const Slope& slope, const BoundaryStart& b)
{
    return state_on_side(b.side, Cell{0, 0}, b.fraction, b.orientation, slope, prm);
}

BilliardState start_state(const Params& prm, const Theta& theta, const BoundaryStart& b)
{
    // Float orbits ignore the exact slope; 1/1 keeps the state valid.
    const Slope slope = theta.exact() ? Slope(theta.value.numerator(), theta.value.denominator()) : Slope(1, 1);
    return state_on_side(b.side, Cell{0, 0}, b.fraction, b.orientation, slope, prm);
}

void parallel_for(int n, int jobs, const std::function<void(int)>& f)
{
    const int workers = std::max(1, std::min(jobs, n));
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);
}

namespace {

// Runs `body(orbit)` with the orbit type matching theta.
template <class Body>
void with_orbit(const Params& prm, const Theta& theta, const BilliardState& start, Body&& body)
{
    if (theta.exact()) {
        ExactOrbit orbit(prm, start);
        body(orbit);
    } else if (theta.precision_bits <= 53) {
        ShadowedOrbit<double> orbit(prm, theta.value, start);
        body(orbit);
    } else if (theta.precision_bits <= 64) {
        ShadowedOrbit<long double> orbit(prm, theta.value, start);
        body(orbit);
    } else {
        throw DomainError("float mode supports at most 64 bits of precision");
    }
}

template <class Orbit>
bool stopped_at_corner(const Orbit& orbit)
{
    if constexpr (std::is_same_v<Orbit, ExactOrbit>)
        return orbit.corner();
    else
        return false;
}

} // namespace

// ---------------------------------------------------------------------------
// Recurrence

RecurrenceReport recurrence_experiment(const Params& prm, const Theta& theta, int n_samples, std::int64_t horizon,
                                       std::uint64_t seed, int jobs)
{
    if (horizon < 1)
        throw DomainError("recurrence_experiment: horizon must be at least 1");
    if (n_samples < 1)
        throw DomainError("recurrence_experiment: need at least one sample");
    RecurrenceReport rep{prm, theta, n_samples, horizon, seed, Rational(0), {}};
    const std::vector<BoundaryStart> starts = sample_boundary(prm, n_samples, seed);
    rep.samples.resize(static_cast<std::size_t>(n_samples));
    parallel_for(n_samples, jobs, [&](int i) {
        RecurrenceSample& s = rep.samples[static_cast<std::size_t>(i)];
        s.id = i;
        s.start = starts[static_cast<std::size_t>(i)];
        s.outcome = "no_return";
        try {
            with_orbit(prm, theta, start_state(prm, theta, s.start), [&](auto& orbit) {
                while (orbit.collisions() < horizon) {
                    if (!orbit.step()) {
                        s.outcome = stopped_at_corner(orbit) ? "singular" : "escaped";
                        break;
                    }
                    if (orbit.cell() == Cell{0, 0}) {
                        s.outcome = "returned";
                        s.first_return = orbit.collisions();
                        break;
                    }
                }
                s.last_cell = orbit.cell();
                s.length = orbit.time();
            });
        } catch (const PrecisionError&) {
            s.outcome = "precision_abort";
        }
    });
    const auto returned = std::count_if(rep.samples.begin(), rep.samples.end(),
                                        [](const RecurrenceSample& s) { return s.outcome == "returned"; });
    rep.returned_fraction = Rational(static_cast<long>(returned), n_samples);
    return rep;
}

namespace {

std::string offset_text(const Rational& fraction, const Theta& theta)
{
    if (theta.exact())
        return fraction.to_string();
    return hex_float(fraction.to_double());
}

} // namespace

void write_recurrence_csv(std::ostream& os, const RecurrenceReport& r)
{
    os << "sample_id,start_side,start_offset,outcome,first_return_collisions,drift_m,drift_n,geometric_length\n";
    char len[64];
    for (const RecurrenceSample& s : r.samples) {
        std::snprintf(len, sizeof len, "%a", s.length);
        os << s.id << ',' << to_string(s.start.side) << ',' << offset_text(s.start.fraction, r.theta) << ','
           << s.outcome << ',' << s.first_return << ',' << s.last_cell.m << ',' << s.last_cell.n << ',' << len
           << "@53\n";
    }
}

// ---------------------------------------------------------------------------
// Diffusion

std::optional<double> iterated_log_product(double t, int k)
{
    double product = 1;
    double x = t;
    for (int j = 1; j <= k; ++j) {
        if (!(x > 1))
            return std::nullopt;
        x = std::log(x);
        if (x < 1)
            return std::nullopt;
        product *= x;
    }
    return product;
}

namespace {

// Witnesses are thinned to increases of at least this factor.
constexpr double kWitnessGrowth = 1.01;

} // namespace

DiffusionReport diffusion_experiment(const Params& prm, const Theta& theta, int k, std::int64_t horizon,
                                     std::uint64_t seed, int sample, bool allow_any_class)
{
    if (!allow_any_class && prm.parity != ParityClass::EPrime)
        throw DomainError("diffusion_experiment: parameters must be in the E' class");
    if (k < 1)
        throw DomainError("diffusion_experiment: k must be at least 1");
    if (horizon < 1)
        throw DomainError("diffusion_experiment: horizon must be at least 1");
    DiffusionReport rep;
    rep.params = prm;
    rep.theta = theta;
    rep.k = k;
    rep.horizon = horizon;
    rep.seed = seed;
    rep.start = sample_boundary(prm, sample + 1, seed).back();
    rep.stop = "horizon";
    with_orbit(prm, theta, start_state(prm, theta, rep.start), [&](auto& orbit) {
        const double x0 = orbit.x(), y0 = orbit.y();
        std::int64_t checkpoint = 10;
        double recorded = 0;
        while (orbit.collisions() < horizon) {
            if (!orbit.step()) {
                rep.stop = stopped_at_corner(orbit) ? "singular" : "escaped";
                break;
            }
            const double t = orbit.time();
            const double d = std::hypot(orbit.x() - x0, orbit.y() - y0);
            if (const auto logs = iterated_log_product(t, k)) {
                const double s = d / *logs;
                if (s > rep.statistic) {
                    rep.statistic = s;
                    if (s >= recorded * kWitnessGrowth) {
                        rep.witnesses.push_back({t, d, s});
                        recorded = s;
                    }
                }
            }
            if (orbit.collisions() == checkpoint) {
                rep.by_horizon.emplace_back(checkpoint, rep.statistic);
                checkpoint *= 10;
            }
        }
    });
    return rep;
}

std::vector<DiffusionReport> diffusion_ensemble(const Params& prm, const Theta& theta, int k, std::int64_t horizon,
                                                std::uint64_t seed, int n_starts, int jobs, bool allow_any_class)
{
    std::vector<DiffusionReport> out(static_cast<std::size_t>(n_starts));
    parallel_for(n_starts, jobs, [&](int i) {
        try {
            out[static_cast<std::size_t>(i)] = diffusion_experiment(prm, theta, k, horizon, seed, i, allow_any_class);
        } catch (const PrecisionError&) {
            DiffusionReport& r = out[static_cast<std::size_t>(i)];
            r.params = prm;
            r.theta = theta;
            r.k = k;
            r.horizon = horizon;
            r.seed = seed;
            r.start = sample_boundary(prm, i + 1, seed).back();
            r.stop = "precision_abort";
        }
    });
    return out;
}

void write_diffusion_csv(std::ostream& os, const DiffusionReport& r)
{
    os << "t,dist,statistic\n";
    char buf[160];
    for (const DiffusionPoint& p : r.witnesses) {
        std::snprintf(buf, sizeof buf, "%a@53,%a@53,%a@53\n", p.t, p.dist, p.statistic);
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// Approximation by good directions

std::vector<Approximant> approximation_search(const Theta& theta, const Params& prm, int n_terms)
{
    if (prm.parity == ParityClass::Other)
        throw DomainError("approximation_search: parameters have neither the E nor the E' parity");
    if (theta.value.sign() <= 0)
        throw DomainError("approximation_search: theta must be positive");
    auto good = [&](const BigInt& p, const BigInt& q) {
        const Slope s(p, q);
        if (prm.parity == ParityClass::E)
            return is_good_one_cylinder(prm, s);
        return decompose_table_direction(prm, s).cylinders.size() == 1;
    };
    // |theta_true - value| <= err
    Rational err(0);
    if (!theta.exact()) {
        BigInt pow2 = 1;
        mpz_mul_2exp(pow2.get_mpz_t(), pow2.get_mpz_t(), static_cast<mp_bitcnt_t>(theta.precision_bits));
        err = theta.value / Rational(pow2);
    }

    std::vector<Approximant> out;
    auto consider = [&](const BigInt& p, const BigInt& q) {
        if (p == 0 || static_cast<int>(out.size()) >= n_terms)
            return;
        if (good(p, q)) {
            const Rational diff = (theta.value - Rational(p, q)).abs();
            out.push_back({p, q, diff * Rational(q * q)});
        }
    };

    BigInt h2 = 0, h1 = 1, k2 = 1, k1 = 0;
    Rational x = theta.value;
    bool exhausted = false;
    for (int level = 0; level < 400 && static_cast<int>(out.size()) < n_terms; ++level) {
        const BigInt a = x.floor();
        // intermediate fractions closest to the next convergent
        const BigInt lo = std::max(BigInt((a + 1) / 2), std::max(BigInt(1), BigInt(a - kMaxIntermediatePerLevel)));
        for (BigInt j = lo; j < a; ++j)
            consider(h2 + j * h1, k2 + j * k1);
        const BigInt h = a * h1 + h2;
        const BigInt kq = a * k1 + k2;
        const Rational gap = (theta.value - Rational(h, kq)).abs();
        if (!theta.exact() && gap <= Rational(2) * err) {
            exhausted = true;
            break;
        }
        consider(h, kq);
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = kq;
        const Rational rest = x - Rational(a);
        if (rest.is_zero())
            break;
        x = Rational(1) / rest;
    }
    if (exhausted && static_cast<int>(out.size()) < n_terms)
        throw PrecisionError("approximation_search: " + std::to_string(theta.precision_bits)
                             + " bits of theta certify only " + std::to_string(out.size()) + " approximants");
    return out;
}

// ---------------------------------------------------------------------------
// Stability

std::vector<std::pair<Side, Cell>> combinatorics(const BilliardState& start, const Params& prm, std::int64_t period)
{
    const Trace tr = trace(start, prm, period);
    if (tr.singular || tr.free_flight)
        throw DomainError("combinatorics: orbit ends before one period");
    std::vector<std::pair<Side, Cell>> out;
    for (std::size_t i = 1; i < tr.states.size(); ++i)
        out.push_back({tr.states[i].side,
                       Cell{tr.states[i].cell.m - start.cell.m, tr.states[i].cell.n - start.cell.n}});
    return out;
}

namespace {

// Unfolds the collision sequence `seq` at the given parameters: the start
// point is carried through the reflections in the mirror lines of the sides
// hit, and the segment from the start to its image closes up. Its direction
// is the slope of the perturbed periodic orbit; nullopt when the sequence
// does not unfold to a translation in the quadrant of the start orientation.
std::optional<Slope> closing_slope(const Params& prm, const BoundaryStart& start,
                                   const std::vector<std::pair<Side, Cell>>& seq)
{
    const BilliardState s0 = start_state(prm, Theta::exact_slope(Slope(1, 1)), start);
    const Rational ha = prm.half_a(), hb = prm.half_b();
    int ex = 1, ey = 1;
    Rational cx(0), cy(0);
    for (const auto& [side, off] : seq) {
        const Rational m(BigInt(static_cast<long>(s0.cell.m + off.m)));
        const Rational n(BigInt(static_cast<long>(s0.cell.n + off.n)));
        switch (side) {
        case Side::Left: cx += Rational(2 * ex) * (m - ha); ex = -ex; break;
        case Side::Right: cx += Rational(2 * ex) * (m + ha); ex = -ex; break;
        case Side::Bottom: cy += Rational(2 * ey) * (n - hb); ey = -ey; break;
        case Side::Top: cy += Rational(2 * ey) * (n + hb); ey = -ey; break;
        }
    }
    if (ex != 1 || ey != 1)
        return std::nullopt;
    if (cx.sign() != start.orientation.sx || cy.sign() != start.orientation.sy)
        return std::nullopt;
    const Rational ratio = cy.abs() / cx.abs();
    return Slope(ratio.numerator(), ratio.denominator());
}

} // namespace

StabilityReport stability_check(const Params& prm, const Slope& slope, const Rational& delta, int n_probes,
                                std::optional<BoundaryStart> start)
{
    if (delta.sign() < 0)
        throw DomainError("stability_check: delta must be non-negative");
    if (slope.is_axis())
        throw DomainError("stability_check: axis directions are not handled");
    const Theta theta = Theta::exact_slope(slope);
    StabilityReport rep;
    TrajectoryOutcome base;
    rep.start = start ? *start : regular_start(prm, slope);
    base = classify_trajectory(start_state(prm, theta, rep.start), prm);
    if (base.kind != OutcomeKind::Periodic)
        throw DomainError("stability_check: slope " + slope.to_string() + " is " + to_string(base.kind)
                          + " from the start, not periodic");
    rep.period = base.combinatorial_length;
    const auto reference = combinatorics(start_state(prm, theta, rep.start), prm, rep.period);

    static const int dirs[8][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    rep.passed = true;
    for (int i = 0; i < n_probes; ++i) {
        const Rational scale = Rational(1, 1L << std::min(i / 8, 30));
        const Rational a = prm.a + Rational(dirs[i % 8][0]) * delta * scale;
        const Rational b = prm.b + Rational(dirs[i % 8][1]) * delta * scale;
        if (a.sign() <= 0 || a >= Rational(1) || b.sign() <= 0 || b >= Rational(1))
            throw DomainError("stability_check: delta leaves the parameter square");
        StabilityProbe probe;
        probe.params = params_from(a, b);
        const auto adjusted = closing_slope(probe.params, rep.start, reference);
        if (!adjusted) {
            rep.passed = false;
            rep.probes.push_back(probe);
            continue;
        }
        probe.slope = *adjusted;
        const BilliardState moved = start_state(probe.params, Theta::exact_slope(probe.slope), rep.start);
        const TrajectoryOutcome out = classify_trajectory(moved, probe.params);
        probe.outcome = out.kind;
        probe.same_combinatorics = out.kind == OutcomeKind::Periodic && out.combinatorial_length == rep.period
                                && combinatorics(moved, probe.params, rep.period) == reference;
        rep.passed = rep.passed && probe.same_combinatorics;
        rep.probes.push_back(probe);
    }
    return rep;
}

std::optional<Rational> find_stable_delta(const Params& prm, const Slope& slope, Rational delta, int n_probes,
                                          int max_halvings)
{
    for (int i = 0; i <= max_halvings; ++i) {
        if (stability_check(prm, slope, delta, n_probes).passed)
            return delta;
        delta = delta / Rational(2);
    }
    return std::nullopt;
}

} // namespace windtree
