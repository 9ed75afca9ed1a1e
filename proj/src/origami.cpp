#include "windtree/origami.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace windtree {

namespace {

bool is_permutation_of_size(const std::vector<int>& p, std::size_t n)
{
    if (p.size() != n)
        return false;
    std::vector<char> seen(n, 0);
    for (int x : p) {
        if (x < 0 || static_cast<std::size_t>(x) >= n || seen[static_cast<std::size_t>(x)])
            return false;
        seen[static_cast<std::size_t>(x)] = 1;
    }
    return true;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

bool is_corner(const MarkedPoint& p) { return p.x.is_zero() && p.y.is_zero(); }

std::size_t idx(int c) { return static_cast<std::size_t>(c); }

} // namespace

void validate_origami(const Origami& o)
{
    const std::size_t n = o.sigma_h.size();
    if (n == 0)
        throw DomainError("origami must have at least one cell");
    if (!is_permutation_of_size(o.sigma_h, n) || !is_permutation_of_size(o.sigma_v, n))
        throw DomainError("origami gluings must be permutations of the cells");
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        for (int nb : {o.sigma_h[idx(c)], o.sigma_v[idx(c)]})
            if (!seen[idx(nb)]) {
                seen[idx(nb)] = 1;
                ++count;
                stack.push_back(nb);
            }
    }
    if (count != n)
        throw DomainError("origami is not connected");
    for (const auto& m : o.marked_points) {
        if (m.cell < 0 || idx(m.cell) >= n)
            throw DomainError("marked point " + m.label + " refers to a missing cell");
        if (m.x.sign() < 0 || m.x >= Rational(1) || m.y.sign() < 0 || m.y >= Rational(1))
            throw DomainError("marked point " + m.label + " is not normalized to [0,1)^2");
    }
}

std::vector<int> inverse_permutation(const std::vector<int>& p)
{
    std::vector<int> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        inv[idx(p[i])] = static_cast<int>(i);
    return inv;
}

VertexData vertex_data(const Origami& o)
{
    const int n = o.n_cells();
    // The top-right corner of c is the bottom-left corner of both v(h(c)) and
    // h(v(c)); these are the only identifications between bottom-left corners.
    UnionFind uf(n);
    for (int c = 0; c < n; ++c)
        uf.unite(o.sigma_v[idx(o.sigma_h[idx(c)])], o.sigma_h[idx(o.sigma_v[idx(c)])]);
    VertexData vd;
    vd.of_cell.assign(idx(n), -1);
    std::vector<int> id_of_root(idx(n), -1);
    for (int c = 0; c < n; ++c) {
        const int root = uf.find(c);
        if (id_of_root[idx(root)] < 0) {
            id_of_root[idx(root)] = static_cast<int>(vd.multiplicity.size());
            vd.multiplicity.push_back(0);
        }
        vd.of_cell[idx(c)] = id_of_root[idx(root)];
        ++vd.multiplicity[idx(vd.of_cell[idx(c)])];
    }
    return vd;
}

std::vector<int> stratum(const Origami& o)
{
    std::vector<int> zeros;
    for (int m : vertex_data(o).multiplicity)
        if (m > 1)
            zeros.push_back(m - 1);
    std::sort(zeros.rbegin(), zeros.rend());
    return zeros;
}

MarkedPoint normalize_point(const Origami& o, MarkedPoint p)
{
    const Rational one(1);
    while (p.x >= one) {
        p.cell = o.sigma_h[idx(p.cell)];
        p.x -= one;
    }
    while (p.y >= one) {
        p.cell = o.sigma_v[idx(p.cell)];
        p.y -= one;
    }
    return p;
}

bool same_point(const Origami& o, const VertexData& vd, const MarkedPoint& a, const MarkedPoint& b)
{
    (void)o;
    if (is_corner(a) && is_corner(b))
        return vd.of_cell[idx(a.cell)] == vd.of_cell[idx(b.cell)];
    return a.cell == b.cell && a.x == b.x && a.y == b.y;
}

namespace {

Origami apply_letter(const Origami& o, char letter)
{
    const std::vector<int>& h = o.sigma_h;
    const std::vector<int>& v = o.sigma_v;
    const std::size_t n = h.size();
    const Rational one(1);
    Origami out;
    out.marked_points.reserve(o.marked_points.size());
    switch (letter) {
    case 'T': {
        // (x, y) -> (x + y, y): the new square on the bottom edge of c is
        // covered by c and its left neighbour; above it sits v(h^-1(c)).
        const std::vector<int> hi = inverse_permutation(h);
        out.sigma_h = h;
        out.sigma_v.resize(n);
        for (std::size_t c = 0; c < n; ++c)
            out.sigma_v[c] = v[idx(hi[c])];
        for (MarkedPoint m : o.marked_points) {
            m.x += m.y;
            if (m.x >= one) {
                m.x -= one;
                m.cell = h[idx(m.cell)];
            }
            out.marked_points.push_back(std::move(m));
        }
        break;
    }
    case 't': {
        const std::vector<int> hi = inverse_permutation(h);
        out.sigma_h = h;
        out.sigma_v.resize(n);
        for (std::size_t c = 0; c < n; ++c)
            out.sigma_v[c] = v[idx(h[c])];
        for (MarkedPoint m : o.marked_points) {
            m.x -= m.y;
            if (m.x.sign() < 0) {
                m.x += one;
                m.cell = hi[idx(m.cell)];
            }
            out.marked_points.push_back(std::move(m));
        }
        break;
    }
    case 'S': {
        // (x, y) -> (-y, x): the old bottom neighbour becomes the right one,
        // the old right neighbour the upper one.
        const std::vector<int> vi = inverse_permutation(v);
        out.sigma_h = vi;
        out.sigma_v = h;
        for (MarkedPoint m : o.marked_points) {
            Rational nx = one - m.y;
            Rational ny = m.x;
            if (nx == one) {
                nx = Rational(0);
                m.cell = vi[idx(m.cell)];
            }
            m.x = std::move(nx);
            m.y = std::move(ny);
            out.marked_points.push_back(std::move(m));
        }
        break;
    }
    case 's': {
        const std::vector<int> hi = inverse_permutation(h);
        out.sigma_h = v;
        out.sigma_v = hi;
        for (MarkedPoint m : o.marked_points) {
            Rational nx = m.y;
            Rational ny = one - m.x;
            if (ny == one) {
                ny = Rational(0);
                m.cell = hi[idx(m.cell)];
            }
            m.x = std::move(nx);
            m.y = std::move(ny);
            out.marked_points.push_back(std::move(m));
        }
        break;
    }
    default:
        throw DomainError(std::string("unknown SL(2,Z) generator '") + letter + "'; use T, t, S or s");
    }
    return out;
}

} // namespace

Origami sl2z_act(const Origami& o, std::string_view word)
{
    Origami cur = o;
    for (char c : word)
        cur = apply_letter(cur, c);
    return cur;
}

std::string inverse_word(std::string_view word)
{
    std::string out;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        switch (*it) {
        case 'T': out += 't'; break;
        case 't': out += 'T'; break;
        case 'S': out += 's'; break;
        case 's': out += 'S'; break;
        default: throw DomainError(std::string("unknown SL(2,Z) generator '") + *it + "'");
        }
    }
    return out;
}

CanonicalForm canonical_form(const Origami& o)
{
    const int n = o.n_cells();
    CanonicalForm best;
    for (int base = 0; base < n; ++base) {
        std::vector<int> label(idx(n), -1);
        std::vector<int> order;
        order.reserve(idx(n));
        label[idx(base)] = 0;
        order.push_back(base);
        for (std::size_t head = 0; head < order.size(); ++head) {
            const int c = order[head];
            for (int nb : {o.sigma_h[idx(c)], o.sigma_v[idx(c)]})
                if (label[idx(nb)] < 0) {
                    label[idx(nb)] = static_cast<int>(order.size());
                    order.push_back(nb);
                }
        }
        if (order.size() != idx(n))
            throw DomainError("canonical_form: origami is not connected");
        CanonicalForm cand;
        cand.sigma_h.resize(idx(n));
        cand.sigma_v.resize(idx(n));
        for (int c = 0; c < n; ++c) {
            cand.sigma_h[idx(label[idx(c)])] = label[idx(o.sigma_h[idx(c)])];
            cand.sigma_v[idx(label[idx(c)])] = label[idx(o.sigma_v[idx(c)])];
        }
        cand.relabel = std::move(label);
        if (base == 0 || std::tie(cand.sigma_h, cand.sigma_v) < std::tie(best.sigma_h, best.sigma_v))
            best = std::move(cand);
    }
    return best;
}

bool isomorphic(const Origami& a, const Origami& b)
{
    if (a.n_cells() != b.n_cells())
        return false;
    const CanonicalForm ca = canonical_form(a);
    const CanonicalForm cb = canonical_form(b);
    return ca.sigma_h == cb.sigma_h && ca.sigma_v == cb.sigma_v;
}

MarkedPoint apply_involution(const Origami& o, const std::vector<int>& iota, const MarkedPoint& p)
{
    MarkedPoint q = p;
    q.cell = iota[idx(p.cell)];
    q.x = Rational(1) - p.x;
    q.y = Rational(1) - p.y;
    return normalize_point(o, q);
}

std::vector<MarkedPoint> involution_fixed_points(const Origami& o, const std::vector<int>& iota)
{
    const int n = o.n_cells();
    const std::vector<int> hi = inverse_permutation(o.sigma_h);
    const std::vector<int> vi = inverse_permutation(o.sigma_v);
    const VertexData vd = vertex_data(o);
    const Rational half(1, 2);
    std::vector<MarkedPoint> out;
    for (int c = 0; c < n; ++c) {
        if (iota[idx(c)] == c)
            out.push_back({"", c, half, half});
        // right edge of c = left edge of h(c)
        if (hi[idx(iota[idx(c)])] == c)
            out.push_back({"", o.sigma_h[idx(c)], Rational(0), half});
        // top edge of c = bottom edge of v(c)
        if (vi[idx(iota[idx(c)])] == c)
            out.push_back({"", o.sigma_v[idx(c)], half, Rational(0)});
    }
    std::vector<char> done(vd.multiplicity.size(), 0);
    for (int c = 0; c < n; ++c) {
        const int k = vd.of_cell[idx(c)];
        if (done[idx(k)])
            continue;
        done[idx(k)] = 1;
        const int image = o.sigma_v[idx(o.sigma_h[idx(iota[idx(c)])])];
        if (vd.of_cell[idx(image)] == k)
            out.push_back({"", c, Rational(0), Rational(0)});
    }
    return out;
}

std::optional<std::vector<int>> hyperelliptic_involution(const Origami& o)
{
    const int n = o.n_cells();
    const std::vector<int> hi = inverse_permutation(o.sigma_h);
    const std::vector<int> vi = inverse_permutation(o.sigma_v);
    std::optional<std::vector<int>> found;
    for (int d = 0; d < n; ++d) {
        std::vector<int> iota(idx(n), -1);
        iota[0] = d;
        std::vector<int> stack{0};
        bool ok = true;
        while (ok && !stack.empty()) {
            const int c = stack.back();
            stack.pop_back();
            const int img = iota[idx(c)];
            // iota h = h^-1 iota, iota v = v^-1 iota, and the same for inverses
            const std::pair<int, int> rules[] = {{o.sigma_h[idx(c)], hi[idx(img)]},
                                                 {o.sigma_v[idx(c)], vi[idx(img)]},
                                                 {hi[idx(c)], o.sigma_h[idx(img)]},
                                                 {vi[idx(c)], o.sigma_v[idx(img)]}};
            for (auto [nb, want] : rules) {
                if (iota[idx(nb)] < 0) {
                    iota[idx(nb)] = want;
                    stack.push_back(nb);
                } else if (iota[idx(nb)] != want) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok)
            continue;
        bool involutive = true;
        for (int c = 0; c < n && involutive; ++c)
            involutive = iota[idx(iota[idx(c)])] == c;
        if (!involutive)
            continue;
        if (involution_fixed_points(o, iota).size() != 6)
            continue;
        if (found)
            throw DomainError("hyperelliptic_involution: more than one candidate");
        found = std::move(iota);
    }
    return found;
}

// ---------------------------------------------------------------------------

namespace {

std::int64_t row_width(const Params& prm, std::int64_t j) { return j < prm.s - prm.r ? prm.q : prm.q - prm.p; }
std::int64_t column_height(const Params& prm, std::int64_t i) { return i < prm.q - prm.p ? prm.s : prm.s - prm.r; }

} // namespace

int l_cell_index(const Params& prm, std::int64_t i, std::int64_t j)
{
    if (j < 0 || j >= prm.s || i < 0 || i >= row_width(prm, j))
        throw DomainError("l_cell_index: square outside the L-polygon");
    const std::int64_t low = prm.s - prm.r;
    const std::int64_t base = j <= low ? j * prm.q : low * prm.q + (j - low) * (prm.q - prm.p);
    return static_cast<int>(base + i);
}

MarkedPoint l_point(const Params& prm, const std::string& label, const PointQ& p)
{
    const BigInt i = p.x.floor();
    const BigInt j = p.y.floor();
    MarkedPoint m;
    m.label = label;
    m.cell = l_cell_index(prm, i.get_si(), j.get_si());
    m.x = p.x - Rational(i);
    m.y = p.y - Rational(j);
    return m;
}

PointQ l_coordinates(const Params& prm, const MarkedPoint& m)
{
    const std::int64_t low = prm.s - prm.r;
    std::int64_t c = m.cell;
    std::int64_t i = 0, j = 0;
    if (c < low * prm.q) {
        j = c / prm.q;
        i = c % prm.q;
    } else {
        c -= low * prm.q;
        j = low + c / (prm.q - prm.p);
        i = c % (prm.q - prm.p);
    }
    return {Rational(static_cast<long>(i)) + m.x, Rational(static_cast<long>(j)) + m.y};
}

namespace {

std::map<std::string, PointQ> weierstrass_coordinates(const Params& prm)
{
    const Rational q(static_cast<long>(prm.q)), p(static_cast<long>(prm.p));
    const Rational s(static_cast<long>(prm.s)), r(static_cast<long>(prm.r));
    const Rational two(2);
    return {
        {"A", {(q - p) / two, (s - r) / two}},  // centre of the bottom-left block
        {"B", {q - p / two, (s - r) / two}},    // centre of the arm below the notch
        {"C", {(q - p) / two, s - r / two}},    // centre of the top block
        {"D", {Rational(0), Rational(0)}},      // the cone point
        {"E", {q - p / two, Rational(0)}},      // bottom edge of the arm below the notch
        {"F", {Rational(0), s - r / two}},      // outer vertical edge of the top block
    };
}

} // namespace

Origami build_origami(const Params& prm)
{
    Origami o;
    const std::int64_t low = prm.s - prm.r;
    const std::int64_t n = prm.q * prm.s - prm.p * prm.r;
    o.sigma_h.resize(static_cast<std::size_t>(n));
    o.sigma_v.resize(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < prm.s; ++j)
        for (std::int64_t i = 0; i < row_width(prm, j); ++i) {
            const int c = l_cell_index(prm, i, j);
            o.sigma_h[idx(c)] = l_cell_index(prm, (i + 1) % row_width(prm, j), j);
            o.sigma_v[idx(c)] = l_cell_index(prm, i, (j + 1) % column_height(prm, i));
        }
    (void)low;
    for (const auto& [label, pt] : weierstrass_coordinates(prm))
        o.marked_points.push_back(l_point(prm, label, pt));
    validate_origami(o);
    return o;
}

PointQ WeierstrassSet::torus_projection(const std::string& label) const
{
    const PointQ& p = points.at(label);
    return {p.x.frac(), p.y.frac()};
}

WeierstrassSet locate_weierstrass(const Params& prm)
{
    WeierstrassSet w;
    w.points = weierstrass_coordinates(prm);
    for (const auto& [label, pt] : w.points)
        if (pt.x.is_integer() && pt.y.is_integer())
            ++w.integer_count;

    // Check against the involution computed from the gluings alone.
    const Origami o = build_origami(prm);
    const auto iota = hyperelliptic_involution(o);
    if (!iota)
        throw std::logic_error("locate_weierstrass: L-origami has no hyperelliptic involution");
    const VertexData vd = vertex_data(o);
    const std::vector<MarkedPoint> fixed = involution_fixed_points(o, *iota);
    for (const MarkedPoint& m : o.marked_points) {
        const bool is_fixed = std::any_of(fixed.begin(), fixed.end(),
                                          [&](const MarkedPoint& f) { return same_point(o, vd, f, m); });
        if (!is_fixed)
            throw std::logic_error("locate_weierstrass: " + m.label + " is not fixed by the involution");
    }
    if (vd.multiplicity[idx(vd.of_cell[0])] != 3)
        throw std::logic_error("locate_weierstrass: D is not the cone point");
    return w;
}

std::string to_string(OrbitClass c)
{
    switch (c) {
    case OrbitClass::OrbitA: return "A";
    case OrbitClass::OrbitB: return "B";
    case OrbitClass::NotApplicable: return "n/a";
    }
    return "?";
}

OrbitInvariant orbit_invariant(const Origami& o)
{
    if (stratum(o) != std::vector<int>{2})
        throw DomainError("orbit_invariant: origami is not in H(2)");
    const auto iota = hyperelliptic_involution(o);
    if (!iota)
        throw std::logic_error("orbit_invariant: no hyperelliptic involution found");
    OrbitInvariant inv;
    for (const MarkedPoint& f : involution_fixed_points(o, *iota))
        if (is_corner(f))
            ++inv.integer_weierstrass;
    const int n = o.n_cells();
    if (n % 2 == 1 && n >= 5) {
        if (inv.integer_weierstrass == 1)
            inv.orbit = OrbitClass::OrbitA;
        else if (inv.integer_weierstrass == 3)
            inv.orbit = OrbitClass::OrbitB;
    }
    return inv;
}

// ---------------------------------------------------------------------------

Rational CylinderDecomposition::height_in_cylinder(const MarkedPoint& p) const
{
    return Rational(row_of_cell[idx(p.cell)]) + p.y;
}

std::string reduction_word(const Slope& slope)
{
    BigInt x = slope.run();
    BigInt y = slope.rise();
    std::string word;
    while (y != 0) {
        if (x == 0) {
            // (0, 1) -> (1, 0)
            word += 's';
            break;
        }
        if (x >= y) {
            const BigInt k = x / y;
            word.append(k.get_ui(), 't');
            x -= k * y;
        } else {
            // vertical shear (x, y) -> (x, y - x) is s T S
            const BigInt k = y / x;
            word += 's';
            word.append(k.get_ui(), 'T');
            word += 'S';
            y -= k * x;
        }
    }
    return word;
}

CylinderDecomposition decompose_direction(const Origami& o, const Slope& slope)
{
    CylinderDecomposition dec;
    dec.direction = slope;
    dec.dir_x = slope.run();
    dec.dir_y = slope.rise();
    dec.word = reduction_word(slope);
    dec.reduced = sl2z_act(o, dec.word);
    const Origami& r = dec.reduced;
    const int n = r.n_cells();
    const VertexData vd = vertex_data(r);
    const bool has_cone_point
        = std::any_of(vd.multiplicity.begin(), vd.multiplicity.end(), [](int m) { return m > 1; });
    auto boundary_vertex = [&](int c) {
        return !has_cone_point || vd.multiplicity[idx(vd.of_cell[idx(c)])] > 1;
    };

    // Rows are the cycles of sigma_h.
    std::vector<int> row_of(idx(n), -1);
    std::vector<std::vector<int>> rows;
    for (int c = 0; c < n; ++c) {
        if (row_of[idx(c)] >= 0)
            continue;
        std::vector<int> row;
        for (int d = c; row_of[idx(d)] < 0; d = r.sigma_h[idx(d)]) {
            row_of[idx(d)] = static_cast<int>(rows.size());
            row.push_back(d);
        }
        rows.push_back(std::move(row));
    }
    std::vector<char> bottom_is_boundary(rows.size(), 0);
    for (std::size_t k = 0; k < rows.size(); ++k)
        bottom_is_boundary[k] = std::any_of(rows[k].begin(), rows[k].end(), boundary_vertex);

    dec.cylinder_of_cell.assign(idx(n), -1);
    dec.row_of_cell.assign(idx(n), -1);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!bottom_is_boundary[k])
            continue;
        Cylinder cyl;
        cyl.circumference = static_cast<std::int64_t>(rows[k].size());
        const int index = static_cast<int>(dec.cylinders.size());
        std::size_t cur = k;
        for (;;) {
            if (static_cast<std::int64_t>(rows[cur].size()) != cyl.circumference)
                throw std::logic_error("decompose_direction: rows of one cylinder differ in length");
            for (int c : rows[cur]) {
                dec.cylinder_of_cell[idx(c)] = index;
                dec.row_of_cell[idx(c)] = static_cast<int>(cyl.height);
                cyl.cells.push_back(c);
            }
            ++cyl.height;
            const auto next = static_cast<std::size_t>(row_of[idx(r.sigma_v[idx(rows[cur][0])])]);
            if (bottom_is_boundary[next])
                break;
            cur = next;
        }
        cyl.modulus = Rational(BigInt(cyl.height), BigInt(cyl.circumference));
        dec.cylinders.push_back(std::move(cyl));
    }
    if (std::any_of(dec.cylinder_of_cell.begin(), dec.cylinder_of_cell.end(), [](int k) { return k < 0; }))
        throw std::logic_error("decompose_direction: cell outside every cylinder");

    for (const MarkedPoint& m : r.marked_points) {
        Cylinder& cyl = dec.cylinders[idx(dec.cylinder_of_cell[idx(m.cell)])];
        if (dec.height_in_cylinder(m) * Rational(2) == Rational(cyl.height))
            cyl.waist_marked_points.push_back(m.label);
    }
    for (Cylinder& cyl : dec.cylinders)
        std::sort(cyl.waist_marked_points.begin(), cyl.waist_marked_points.end());
    return dec;
}

Slope scaled_slope(const Params& prm, const Slope& table_slope)
{
    return Slope(table_slope.rise() * BigInt(static_cast<long>(prm.s)),
                 table_slope.run() * BigInt(static_cast<long>(prm.q)));
}

CylinderDecomposition decompose_table_direction(const Params& prm, const Slope& table_slope)
{
    return decompose_direction(build_origami(prm), scaled_slope(prm, table_slope));
}

bool is_good_one_cylinder(const Params& prm, const Slope& table_slope)
{
    const CylinderDecomposition dec = decompose_table_direction(prm, table_slope);
    if (dec.cylinders.size() != 1)
        return false;
    const auto& waist = dec.cylinders[0].waist_marked_points;
    return std::find(waist.begin(), waist.end(), "E") != waist.end()
        && std::find(waist.begin(), waist.end(), "F") != waist.end();
}

Rational cylinder_bounds_constant(const Origami& o, long slope_limit)
{
    if (slope_limit < 1)
        throw DomainError("cylinder_bounds_constant: slope_limit must be >= 1");
    Rational k2(0);
    for (long q = 1; q <= slope_limit; ++q)
        for (long p = 1; p <= q; ++p) {
            if (std::gcd(p, q) != 1)
                continue;
            const CylinderDecomposition dec = decompose_direction(o, Slope(p, q));
            const Rational norm2(p * p + q * q);
            const Rational q2(q * q);
            for (const Cylinder& cyl : dec.cylinders) {
                const Rational c(static_cast<long>(cyl.circumference));
                const Rational h(static_cast<long>(cyl.height));
                // circumference = c |(q,p)|, height = h / |(q,p)|
                k2 = max(k2, c * c * norm2 / q2);
                k2 = max(k2, norm2 / (h * h * q2));
            }
        }
    return k2;
}

std::vector<Slope> enumerate_good_directions(const Params& prm, long denominator_limit)
{
    std::vector<Slope> out;
    for (const Slope& s : mediant_enumerate(denominator_limit))
        if (is_good_one_cylinder(prm, s))
            out.push_back(s);
    return out;
}

// ---------------------------------------------------------------------------

std::vector<FlowHit> flow_marked_hits(const Origami& o, const std::string& from, const Slope& slope,
                                      const Rational& max_time)
{
    const auto start_it = std::find_if(o.marked_points.begin(), o.marked_points.end(),
                                       [&](const MarkedPoint& m) { return m.label == from; });
    if (start_it == o.marked_points.end())
        throw DomainError("flow_marked_hits: no marked point " + from);
    const VertexData vd = vertex_data(o);
    if (is_corner(*start_it) && vd.multiplicity[idx(vd.of_cell[idx(start_it->cell)])] > 1)
        throw DomainError("flow_marked_hits: cannot start at a cone point");

    const Rational dx(slope.run()), dy(slope.rise());
    std::vector<std::vector<const MarkedPoint*>> in_cell(idx(o.n_cells()));
    for (const MarkedPoint& m : o.marked_points)
        if (!is_corner(m))
            in_cell[idx(m.cell)].push_back(&m);

    std::vector<FlowHit> hits;
    int cell = start_it->cell;
    Rational x = start_it->x, y = start_it->y, t(0);
    const Rational one(1);
    bool first = true;
    while (t <= max_time) {
        const std::optional<Rational> tx = dx.is_zero() ? std::nullopt : std::optional<Rational>((one - x) / dx);
        const std::optional<Rational> ty = dy.is_zero() ? std::nullopt : std::optional<Rational>((one - y) / dy);
        const Rational dt = tx && ty ? min(*tx, *ty) : (tx ? *tx : *ty);

        // marked points on this piece, in time order
        std::vector<FlowHit> here;
        for (const MarkedPoint* m : in_cell[idx(cell)]) {
            Rational tau;
            if (!dx.is_zero()) {
                tau = (m->x - x) / dx;
                if (y + dy * tau != m->y)
                    continue;
            } else {
                if (m->x != x)
                    continue;
                tau = (m->y - y) / dy;
            }
            if (tau.sign() < 0 || tau >= dt || (first && tau.is_zero()))
                continue;
            here.push_back({m->label, t + tau});
        }
        std::sort(here.begin(), here.end(), [](const FlowHit& a, const FlowHit& b) { return a.time < b.time; });
        for (FlowHit& h : here) {
            if (h.time > max_time)
                return hits;
            hits.push_back(h);
            if (h.label == from)
                return hits;
        }
        first = false;
        t += dt;
        if (tx && ty && *tx == *ty) {
            cell = o.sigma_v[idx(o.sigma_h[idx(cell)])];
            x = Rational(0);
            y = Rational(0);
            const int vertex = vd.of_cell[idx(cell)];
            if (t > max_time)
                return hits;
            std::string label;
            for (const MarkedPoint& m : o.marked_points)
                if (is_corner(m) && vd.of_cell[idx(m.cell)] == vertex)
                    label = m.label;
            if (vd.multiplicity[idx(vertex)] > 1) {
                hits.push_back({label.empty() ? "singularity" : label, t});
                return hits;
            }
            if (!label.empty()) {
                hits.push_back({label, t});
                if (label == from)
                    return hits;
            }
        } else if (tx && *tx == dt) {
            cell = o.sigma_h[idx(cell)];
            x = Rational(0);
            y += dy * dt;
        } else {
            cell = o.sigma_v[idx(cell)];
            y = Rational(0);
            x += dx * dt;
        }
    }
    return hits;
}

bool e_to_f_half_period(const Params& prm, const Slope& table_slope)
{
    const Origami o = build_origami(prm);
    const Slope s = scaled_slope(prm, table_slope);
    const CylinderDecomposition dec = decompose_direction(o, s);
    if (dec.cylinders.size() != 1)
        throw DomainError("e_to_f_half_period: not a one-cylinder direction");
    const Rational c(static_cast<long>(dec.cylinders[0].circumference));
    const std::vector<FlowHit> hits = flow_marked_hits(o, "E", s, c);
    return hits.size() == 2 && hits[0].label == "F" && hits[0].time == c / Rational(2) && hits[1].label == "E"
        && hits[1].time == c;
}

// ---------------------------------------------------------------------------

std::string serialize(const Origami& o)
{
    std::ostringstream out;
    out << o.n_cells() << "\n";
    for (int c = 0; c < o.n_cells(); ++c)
        out << o.sigma_h[idx(c)] << " " << o.sigma_v[idx(c)] << "\n";
    for (const MarkedPoint& m : o.marked_points)
        out << m.label << " " << m.cell << " " << m.x.to_fraction_string() << " " << m.y.to_fraction_string()
            << "\n";
    return out.str();
}

Origami parse_origami(std::string_view text)
{
    std::istringstream in{std::string(text)};
    int n = 0;
    if (!(in >> n) || n <= 0)
        throw DomainError("origami text: missing cell count");
    Origami o;
    o.sigma_h.resize(idx(n));
    o.sigma_v.resize(idx(n));
    for (int c = 0; c < n; ++c)
        if (!(in >> o.sigma_h[idx(c)] >> o.sigma_v[idx(c)]))
            throw DomainError("origami text: expected " + std::to_string(n) + " gluing lines");
    std::string label, x, y;
    int cell = 0;
    while (in >> label) {
        if (!(in >> cell >> x >> y))
            throw DomainError("origami text: malformed marked point " + label);
        o.marked_points.push_back({label, cell, Rational::parse(x), Rational::parse(y)});
    }
    validate_origami(o);
    return o;
}

} // namespace windtree
