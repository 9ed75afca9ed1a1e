#pragma once

#include "windtree/billiard.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace windtree {

/// Everything a command-line run depends on. A run is reproducible from its
/// config alone; the same config gives byte-identical CSV and SVG output.
struct RunConfig {
    std::string command;                 ///< classify, render, decompose, ...
    Params params;                       ///< "p/q,r/s"
    std::string slope = "1/1";           ///< "u/v", or a theta form for recur/diffuse
    std::string start;                   ///< "side:fraction:orientation"; empty = first regular start
    std::int64_t max_collisions = kDefaultMaxCollisions;  ///< budget, or horizon for experiments
    std::int64_t collisions = -1;        ///< render: polyline length, -1 = one repeat
    std::uint64_t seed = 1;
    int precision_bits = 0;              ///< 0 = exact slope
    std::string out;                     ///< output path, empty = stdout
    int jobs = 1;
    double scale = 100;                  ///< SVG pixels per table unit
    int limit = 9;                       ///< good-dirs: largest u, v
    int samples = 200;                   ///< recur: boundary samples; diffuse: starts
    int k = 1;                           ///< diffuse: number of iterated logs
    std::string delta = "1/1000";        ///< stability: perturbation radius
    int probes = 8;                      ///< stability: parameter probes

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Sets one option from its key and text value; DomainError for an unknown
/// key or a malformed value.
void set_option(RunConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" text, one option per line, '#' starts a comment.
RunConfig parse_key_value(std::string_view text);
std::string to_key_value(const RunConfig& config);

/// JSON object with the same keys (numbers as JSON numbers).
RunConfig parse_json_config(std::string_view text);
std::string to_json_config(const RunConfig& config);

/// Reads a file in either format, chosen by a leading '{'.
RunConfig load_config(const std::string& path);

} // namespace windtree
