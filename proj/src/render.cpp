#include "windtree/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace windtree {

namespace {

// Obstacle rectangles drawn at most; beyond that only the orbit is drawn.
constexpr std::int64_t kMaxObstacles = 40'000;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    // "-0.000" and "0.000" must print the same
    return std::string(buf) == "-0.000" ? "0.000" : buf;
}

} // namespace

std::vector<Cell> repeat_obstacles(const TrajectoryOutcome& outcome, const Trace& trace)
{
    if (outcome.kind != OutcomeKind::Escaping || outcome.corridor)
        return {};
    const auto first = static_cast<std::size_t>(outcome.pre_period);
    const auto second = first + static_cast<std::size_t>(outcome.combinatorial_length);
    if (second >= trace.states.size())
        return {};
    return {trace.states[first].cell, trace.states[second].cell};
}

std::string render_svg(const Params& params, const Trace& trace, const std::vector<Cell>& highlight,
                       const RenderOptions& options)
{
    if (!(options.scale > 0) || !(options.margin >= 0))
        throw DomainError("render_svg: scale must be positive and margin non-negative");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(trace.points.size());
    for (const PointQ& p : trace.points)
        pts.emplace_back(p.x.to_double(), p.y.to_double());
    if (pts.empty())
        pts.emplace_back(0.0, 0.0);

    double x0 = pts[0].first, x1 = x0, y0 = pts[0].second, y1 = y0;
    for (const auto& [x, y] : pts) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    x0 -= options.margin;
    y0 -= options.margin;
    x1 += options.margin;
    y1 += options.margin;
    const double sc = options.scale;
    auto sx = [&](double x) { return num((x - x0) * sc); };
    auto sy = [&](double y) { return num((y1 - y) * sc); };

    const double ha = params.half_a().to_double();
    const double hb = params.half_b().to_double();

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num((x1 - x0) * sc)
       << "\" height=\"" << num((y1 - y0) * sc) << "\" viewBox=\"0 0 " << num((x1 - x0) * sc) << ' '
       << num((y1 - y0) * sc) << "\">\n"
       << "<!-- table " << params.to_string() << ", " << trace.points.size() << " points -->\n";

    const auto m0 = static_cast<std::int64_t>(std::floor(x0 + ha)), m1 = static_cast<std::int64_t>(std::ceil(x1 - ha));
    const auto n0 = static_cast<std::int64_t>(std::floor(y0 + hb)), n1 = static_cast<std::int64_t>(std::ceil(y1 - hb));
    auto rect = [&](const Cell& c, const char* style) {
        const double cx = static_cast<double>(c.m), cy = static_cast<double>(c.n);
        os << "<rect x=\"" << sx(cx - ha) << "\" y=\"" << sy(cy + hb) << "\" width=\"" << num(2 * ha * sc)
           << "\" height=\"" << num(2 * hb * sc) << "\" " << style << "/>\n";
    };
    os << "<g fill=\"none\" stroke=\"#1f3a93\" stroke-width=\"1.5\">\n";
    if ((m1 - m0 + 1) * (n1 - n0 + 1) <= kMaxObstacles)
        for (std::int64_t m = m0; m <= m1; ++m)
            for (std::int64_t n = n0; n <= n1; ++n)
                rect(Cell{m, n}, "");
    os << "</g>\n";
    for (const Cell& c : highlight)
        rect(c, "fill=\"#b0b0b0\" stroke=\"#1f3a93\" stroke-width=\"1.5\"");

    os << "<path fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" d=\"M " << sx(pts[0].first) << ' '
       << sy(pts[0].second);
    for (std::size_t i = 1; i < pts.size(); ++i)
        os << " L " << sx(pts[i].first) << ' ' << sy(pts[i].second);
    os << "\"/>\n</svg>\n";
    return os.str();
}

} // namespace windtree
