#pragma once

#include "windtree/billiard.hpp"

#include <string>
#include <vector>

namespace windtree {

struct RenderOptions {
    double scale = 100;  ///< pixels per table unit
    double margin = 0.75;  ///< table units of lattice drawn around the orbit
};

/// SVG 1.1 drawing of a trajectory: the obstacles meeting the bounding box of
/// the polyline, the polyline itself, and the obstacles listed in
/// `highlight` filled in gray. The y axis points up, as in the table.
/// Coordinates are printed with three decimals, so equal inputs give
/// byte-identical output.
std::string render_svg(const Params& params, const Trace& trace, const std::vector<Cell>& highlight,
                       const RenderOptions& options = {});

/// For an escaping outcome: the obstacles of the two collisions one repeat
/// apart at the end of the pre-period, which are hit at the same relative
/// location. Empty for other outcomes or if the trace is too short.
std::vector<Cell> repeat_obstacles(const TrajectoryOutcome& outcome, const Trace& trace);

} // namespace windtree
