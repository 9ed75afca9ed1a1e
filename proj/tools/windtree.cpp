// Command-line front end: classification, rendering, surface decompositions,
// lifts and the statistical experiments, all driven by one RunConfig.

#include "windtree/experiments.hpp"
#include "windtree/lift.hpp"
#include "windtree/origami.hpp"
#include "windtree/render.hpp"
#include "windtree/run_config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace windtree;

namespace {

constexpr int kExitDefinite = 0;
constexpr int kExitError = 1;
constexpr int kExitUndetermined = 2;

// Default polyline length for render when the orbit does not repeat.
constexpr std::int64_t kRenderFallbackCollisions = 200;

// CSV goes to --out when given, otherwise after the text on stdout.
void emit_csv(const RunConfig& cfg, const std::string& csv)
{
    if (cfg.out.empty()) {
        std::cout << "\n" << csv;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f)
        throw DomainError("cannot write '" + cfg.out + "'");
    f << csv;
    std::cout << "wrote " << cfg.out << "\n";
}

Slope exact_slope(const RunConfig& cfg)
{
    if (cfg.precision_bits != 0)
        throw DomainError(cfg.command + " needs an exact u/v slope; --precision-bits applies to recur/diffuse");
    return Slope::parse(cfg.slope);
}

BoundaryStart start_of(const RunConfig& cfg, const Slope& slope)
{
    return cfg.start.empty() ? regular_start(cfg.params, slope) : parse_boundary_start(cfg.start);
}

std::string describe(const TrajectoryOutcome& out)
{
    std::ostringstream os;
    os << to_string(out.kind);
    switch (out.kind) {
    case OutcomeKind::Periodic:
        os << ": period " << out.combinatorial_length << " collisions, length " << out.geometric_length.to_string();
        break;
    case OutcomeKind::Escaping:
        if (out.corridor)
            os << ": runs along an obstacle-free corridor, drift (" << out.drift.m << "," << out.drift.n
               << ") per period of the lattice";
        else
            os << ": drift (" << out.drift.m << "," << out.drift.n << ") every " << out.combinatorial_length
               << " collisions, after " << out.pre_period;
        break;
    case OutcomeKind::Singular:
        if (out.corner)
            os << ": hits the corner (" << out.corner->x.to_string() << "," << out.corner->y.to_string() << ")";
        break;
    case OutcomeKind::Undetermined:
        os << ": no repeat within " << out.collisions_simulated << " collisions";
        break;
    }
    return os.str();
}

int cmd_classify(const RunConfig& cfg)
{
    const Slope slope = exact_slope(cfg);
    const BoundaryStart start = start_of(cfg, slope);
    const TrajectoryOutcome out = classify_trajectory(start_state(cfg.params, slope, start),
                                                      cfg.params, cfg.max_collisions);
    std::cout << "params " << cfg.params.to_string() << " (" << to_string(cfg.params.parity) << "), slope "
              << slope.to_string() << ", start " << to_string(start) << "\n"
              << describe(out) << "\n";
    std::ostringstream csv;
    csv << "params,slope,start,outcome,combinatorial_length,geometric_length,drift_m,drift_n,pre_period\n"
        << '"' << cfg.params.to_string() << "\"," << slope.to_string() << ',' << to_string(start) << ','
        << to_string(out.kind) << ',' << out.combinatorial_length << ',' << out.geometric_length.to_string() << ','
        << out.drift.m << ',' << out.drift.n << ',' << out.pre_period << "\n";
    emit_csv(cfg, csv.str());
    return out.kind == OutcomeKind::Undetermined ? kExitUndetermined : kExitDefinite;
}

int cmd_render(const RunConfig& cfg)
{
    const Slope slope = exact_slope(cfg);
    if (slope.is_axis())
        throw DomainError("render: axis directions have no collision polyline to draw");
    const BoundaryStart start = start_of(cfg, slope);
    const BilliardState s0 = start_state(cfg.params, slope, start);
    const TrajectoryOutcome out = classify_trajectory(s0, cfg.params, cfg.max_collisions);
    std::int64_t n = cfg.collisions;
    if (n < 0) {
        const bool repeats = out.kind == OutcomeKind::Periodic || out.kind == OutcomeKind::Escaping;
        n = repeats ? out.pre_period + out.combinatorial_length : kRenderFallbackCollisions;
    }
    const Trace tr = trace(s0, cfg.params, n);
    const std::string svg = render_svg(cfg.params, tr, repeat_obstacles(out, tr), RenderOptions{cfg.scale});
    std::cout << describe(out) << "\n" << tr.points.size() << " points drawn\n";
    if (cfg.out.empty()) {
        std::cout << svg;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f)
            throw DomainError("cannot write '" + cfg.out + "'");
        f << svg;
        std::cout << "wrote " << cfg.out << "\n";
    }
    return kExitDefinite;
}

std::string join(const std::vector<std::string>& v, const char* sep)
{
    std::string out;
    for (const auto& s : v)
        out += (out.empty() ? "" : sep) + s;
    return out;
}

int cmd_decompose(const RunConfig& cfg)
{
    const Slope slope = exact_slope(cfg);
    const CylinderDecomposition d = decompose_table_direction(cfg.params, slope);
    std::cout << "Y_{" << cfg.params.to_string() << "} in table direction " << slope.to_string()
              << " (surface direction " << d.direction.to_string() << "): " << d.cylinders.size() << " cylinder"
              << (d.cylinders.size() == 1 ? "" : "s") << "\n";
    std::ostringstream csv;
    csv << "cylinder,circumference,height,modulus,cells,waist_points\n";
    for (std::size_t i = 0; i < d.cylinders.size(); ++i) {
        const Cylinder& c = d.cylinders[i];
        std::cout << "  #" << i << " circumference " << c.circumference << ", height " << c.height << ", modulus "
                  << c.modulus.to_string() << ", waist {" << join(c.waist_marked_points, ",") << "}\n";
        std::vector<std::string> cells;
        for (int cell : c.cells)
            cells.push_back(std::to_string(cell));
        csv << i << ',' << c.circumference << ',' << c.height << ',' << c.modulus.to_string() << ','
            << join(cells, " ") << ',' << join(c.waist_marked_points, " ") << "\n";
    }
    emit_csv(cfg, csv.str());
    return kExitDefinite;
}

int cmd_good_dirs(const RunConfig& cfg)
{
    const std::vector<Slope> dirs = enumerate_good_directions(cfg.params, cfg.limit);
    std::cout << dirs.size() << " good one-cylinder directions with u, v <= " << cfg.limit << ":";
    std::ostringstream csv;
    csv << "slope\n";
    for (const Slope& s : dirs) {
        std::cout << ' ' << s.to_string();
        csv << s.to_string() << "\n";
    }
    std::cout << "\n";
    emit_csv(cfg, csv.str());
    return kExitDefinite;
}

int cmd_lift(const RunConfig& cfg)
{
    const Slope slope = exact_slope(cfg);
    const LiftReport r = lift_direction(cfg.params, slope, cfg.max_collisions);
    std::cout << "direction " << slope.to_string() << ": " << r.cylinders.size() << " cylinder(s), "
              << r.strip_count() << " strip(s)" << (r.strongly_parabolic ? ", strongly parabolic" : "") << "\n";
    std::ostringstream csv;
    csv << "cylinder,behavior,factor,drift_m,drift_n,starts\n";
    for (std::size_t i = 0; i < r.cylinders.size(); ++i) {
        const CylinderLift& c = r.cylinders[i];
        std::cout << "  #" << i << ' ' << to_string(c.behavior) << "\n";
        csv << i << ',';
        if (const auto* cl = std::get_if<ClosesWithFactor>(&c.behavior))
            csv << "closes," << cl->factor << ",0,0,";
        else {
            const Cell d = std::get<Strip>(c.behavior).drift;
            csv << "strip,0," << d.m << ',' << d.n << ',';
        }
        csv << c.starts.size() << "\n";
    }
    emit_csv(cfg, csv.str());
    return kExitDefinite;
}

int cmd_recur(const RunConfig& cfg)
{
    const Theta theta = Theta::parse(cfg.slope, cfg.precision_bits);
    const RecurrenceReport r =
        recurrence_experiment(cfg.params, theta, cfg.samples, cfg.max_collisions, cfg.seed, cfg.jobs);
    std::map<std::string, int> counts;
    for (const RecurrenceSample& s : r.samples)
        ++counts[s.outcome];
    std::cout << "params " << cfg.params.to_string() << ", theta " << theta.to_string() << ", seed " << cfg.seed
              << ", horizon " << cfg.max_collisions << "\nreturned fraction " << r.returned_fraction.to_string()
              << " (" << r.returned_fraction.to_double() << ")\n";
    for (const auto& [k, v] : counts)
        std::cout << "  " << k << ": " << v << "\n";
    std::ostringstream csv;
    write_recurrence_csv(csv, r);
    emit_csv(cfg, csv.str());
    return kExitDefinite;
}

int cmd_diffuse(const RunConfig& cfg)
{
    const Theta theta = Theta::parse(cfg.slope, cfg.precision_bits);
    const std::vector<DiffusionReport> runs =
        diffusion_ensemble(cfg.params, theta, cfg.k, cfg.max_collisions, cfg.seed, cfg.samples, cfg.jobs);
    std::cout << "params " << cfg.params.to_string() << ", theta " << theta.to_string() << ", k " << cfg.k
              << ", seed " << cfg.seed << ", horizon " << cfg.max_collisions << "\n";
    std::ostringstream csv;
    if (runs.size() == 1) {
        write_diffusion_csv(csv, runs[0]);
    } else {
        // one block per start, prefixed by its index
        csv << "sample,t,dist,statistic\n";
        for (std::size_t i = 0; i < runs.size(); ++i) {
            std::ostringstream one;
            write_diffusion_csv(one, runs[i]);
            std::istringstream lines(one.str());
            std::string line;
            std::getline(lines, line);  // header
            while (std::getline(lines, line))
                csv << i << ',' << line << "\n";
        }
    }
    for (std::size_t i = 0; i < runs.size(); ++i)
        std::cout << "  start " << i << " (" << to_string(runs[i].start) << "): statistic " << runs[i].statistic
                  << ", stop " << runs[i].stop << "\n";
    emit_csv(cfg, csv.str());
    return kExitDefinite;
}

int cmd_stability(const RunConfig& cfg)
{
    const Slope slope = exact_slope(cfg);
    std::optional<BoundaryStart> start;
    if (!cfg.start.empty())
        start = parse_boundary_start(cfg.start);
    const StabilityReport r = stability_check(cfg.params, slope, Rational::parse(cfg.delta), cfg.probes, start);
    std::cout << "base orbit from " << to_string(r.start) << ": period " << r.period << "\n";
    std::ostringstream csv;
    csv << "a,b,slope,outcome,same_combinatorics\n";
    for (const StabilityProbe& p : r.probes) {
        std::cout << "  (" << p.params.a.to_string() << ", " << p.params.b.to_string() << ") slope "
                  << p.slope.to_string() << ": " << to_string(p.outcome)
                  << (p.same_combinatorics ? ", same combinatorics" : ", different") << "\n";
        csv << p.params.a.to_string() << ',' << p.params.b.to_string() << ',' << p.slope.to_string() << ','
            << to_string(p.outcome) << ',' << (p.same_combinatorics ? 1 : 0) << "\n";
    }
    std::cout << (r.passed ? "stable" : "not stable at this delta") << "\n";
    emit_csv(cfg, csv.str());
    return kExitDefinite;
}

// A few fast exact checks of the installation.
int cmd_selftest(const RunConfig&)
{
    const Params half = parse_params("1/2,1/2");
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
        failures += ok ? 0 : 1;
    };
    auto kind = [&](const char* sl) {
        const Slope s = Slope::parse(sl);
        return classify_trajectory(start_state(half, s, regular_start(half, s)), half).kind;
    };
    for (const char* sl : {"1/1", "3/7", "9/29"})
        check(kind(sl) == OutcomeKind::Periodic, std::string("slope ") + sl + " periodic");
    for (const char* sl : {"3/4", "16/39"})
        check(kind(sl) == OutcomeKind::Escaping, std::string("slope ") + sl + " escaping");
    check(is_good_one_cylinder(half, Slope(1, 1)), "slope 1/1 is a good one-cylinder direction");
    check(lift_direction(parse_params("2/3,2/3"), Slope(1, 1)).strip_count() > 0, "E' lift has a strip");
    const RunConfig rc = parse_json_config(to_json_config(RunConfig{}));
    check(rc == RunConfig{}, "config JSON round trip");
    return failures == 0 ? kExitDefinite : kExitError;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact and floating-point experiments on the periodic wind-tree billiard"};
    app.require_subcommand(1);

    // Every option is kept as text and applied through set_option, so the
    // command line, key=value files and JSON configs share one parser.
    std::map<std::string, std::string> values;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    auto add = [&](const std::string& key, const std::string& help) {
        options.emplace_back(key, app.add_option("--" + key, values[key], help));
    };
    add("params", "obstacle size p/q,r/s (default 1/2,1/2)");
    add("slope", "u/v, or for recur/diffuse a decimal, cf:a0,a1,... or sqrt:n,shift,scale");
    add("start", "side:fraction:orientation, e.g. top:1/3:++ (default: first regular start)");
    add("max-collisions", "collision budget; the horizon for recur and diffuse");
    add("collisions", "render: number of collisions drawn (default one repeat)");
    add("seed", "random seed");
    add("precision-bits", "bits to which a non-rational theta is known");
    add("out", "output file (SVG for render, CSV otherwise)");
    add("jobs", "worker threads for experiments");
    add("scale", "SVG pixels per table unit");
    add("limit", "good-dirs: largest u and v");
    add("samples", "recur: boundary samples; diffuse: number of starts");
    add("k", "diffuse: number of iterated logarithms");
    add("delta", "stability: perturbation radius");
    add("probes", "stability: number of perturbed parameter pairs");
    std::string config_path, json_path, write_path;
    app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    app.add_option("--json-config", json_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--write-config", write_path, "write the effective config as JSON and continue");

    const std::map<std::string, std::function<int(const RunConfig&)>> commands = {
        {"classify", cmd_classify},   {"render", cmd_render}, {"decompose", cmd_decompose},
        {"good-dirs", cmd_good_dirs}, {"lift", cmd_lift},     {"recur", cmd_recur},
        {"diffuse", cmd_diffuse},     {"stability", cmd_stability}, {"selftest", cmd_selftest},
    };
    const std::map<std::string, std::string> help = {
        {"classify", "classify the trajectory from a boundary start"},
        {"render", "draw a trajectory as SVG"},
        {"decompose", "cylinder decomposition of Y in a direction"},
        {"good-dirs", "list good one-cylinder directions"},
        {"lift", "lift the cylinders of Y to the billiard"},
        {"recur", "recurrence fraction of boundary starts"},
        {"diffuse", "displacement statistic along orbits"},
        {"stability", "periodic orbit under perturbation of (a, b)"},
        {"selftest", "quick exact checks"},
    };
    for (const auto& [name, text] : help)
        app.add_subcommand(name, text)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitDefinite : kExitError;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty())
            cfg = load_config(config_path);
        if (!json_path.empty())
            cfg = parse_json_config([&] {
                std::ifstream in(json_path, std::ios::binary);
                std::ostringstream ss;
                ss << in.rdbuf();
                return ss.str();
            }());
        for (const auto& [key, opt] : options)
            if (opt->count() > 0)
                set_option(cfg, key, values[key]);
        cfg.command = app.get_subcommands().front()->get_name();
        if (!write_path.empty()) {
            std::ofstream f(write_path, std::ios::binary);
            if (!f)
                throw DomainError("cannot write '" + write_path + "'");
            f << to_json_config(cfg);
        }
        return commands.at(cfg.command)(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
