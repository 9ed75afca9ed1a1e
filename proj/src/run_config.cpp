#include "windtree/run_config.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace windtree {

namespace {

template <class Int>
Int parse_int(std::string_view key, std::string_view v)
{
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw DomainError("config: '" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    return out;
}

double parse_double(std::string_view key, std::string_view v)
{
    const std::string s(v);
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size())
        throw DomainError("config: '" + std::string(key) + "' expects a number, got '" + s + "'");
    return out;
}

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Keys in output order, with their text values.
std::vector<std::pair<std::string, std::string>> entries(const RunConfig& c)
{
    return {
        {"command", c.command},
        {"params", c.params.to_string()},
        {"slope", c.slope},
        {"start", c.start},
        {"max-collisions", std::to_string(c.max_collisions)},
        {"collisions", std::to_string(c.collisions)},
        {"seed", std::to_string(c.seed)},
        {"precision-bits", std::to_string(c.precision_bits)},
        {"out", c.out},
        {"jobs", std::to_string(c.jobs)},
        {"scale", format_double(c.scale)},
        {"limit", std::to_string(c.limit)},
        {"samples", std::to_string(c.samples)},
        {"k", std::to_string(c.k)},
        {"delta", c.delta},
        {"probes", std::to_string(c.probes)},
    };
}

bool is_text_key(const std::string& key)
{
    return key == "command" || key == "params" || key == "slope" || key == "start" || key == "out"
        || key == "delta";
}

} // namespace

void set_option(RunConfig& c, std::string_view key, std::string_view v)
{
    if (key == "command")
        c.command = v;
    else if (key == "params")
        c.params = parse_params(v);
    else if (key == "slope")
        c.slope = v;
    else if (key == "start")
        c.start = v;
    else if (key == "max-collisions")
        c.max_collisions = parse_int<std::int64_t>(key, v);
    else if (key == "collisions")
        c.collisions = parse_int<std::int64_t>(key, v);
    else if (key == "seed")
        c.seed = parse_int<std::uint64_t>(key, v);
    else if (key == "precision-bits")
        c.precision_bits = parse_int<int>(key, v);
    else if (key == "out")
        c.out = v;
    else if (key == "jobs")
        c.jobs = parse_int<int>(key, v);
    else if (key == "scale")
        c.scale = parse_double(key, v);
    else if (key == "limit")
        c.limit = parse_int<int>(key, v);
    else if (key == "samples")
        c.samples = parse_int<int>(key, v);
    else if (key == "k")
        c.k = parse_int<int>(key, v);
    else if (key == "delta")
        c.delta = v;
    else if (key == "probes")
        c.probes = parse_int<int>(key, v);
    else
        throw DomainError("config: unknown option '" + std::string(key) + "'");
}

RunConfig parse_key_value(std::string_view text)
{
    RunConfig c;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        const std::size_t nl = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw DomainError("config line " + std::to_string(line_no) + ": expected key = value");
        set_option(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

std::string to_key_value(const RunConfig& c)
{
    std::string out;
    for (const auto& [k, v] : entries(c))
        out += k + " = " + v + "\n";
    return out;
}

RunConfig parse_json_config(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw DomainError("config: JSON must be an object");
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string())
            set_option(c, key, value.get<std::string>());
        else if (value.is_number_unsigned())
            set_option(c, key, std::to_string(value.get<std::uint64_t>()));
        else if (value.is_number_integer())
            set_option(c, key, std::to_string(value.get<std::int64_t>()));
        else if (value.is_number_float())
            set_option(c, key, format_double(value.get<double>()));
        else
            throw DomainError("config: '" + key + "' must be a string or a number");
    }
    return c;
}

std::string to_json_config(const RunConfig& c)
{
    nlohmann::ordered_json j;
    for (const auto& [k, v] : entries(c)) {
        if (is_text_key(k))
            j[k] = v;
        else if (k == "scale")
            j[k] = c.scale;
        else if (k == "seed")
            j[k] = c.seed;
        else
            j[k] = std::stoll(v);
    }
    return j.dump(2) + "\n";
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DomainError("config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return parse_json_config(text);
    return parse_key_value(text);
}

} // namespace windtree
