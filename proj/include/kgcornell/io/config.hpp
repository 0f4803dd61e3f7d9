#pragma once

#include "kgcornell/errors.hpp"
#include "kgcornell/params.hpp"
#include "kgcornell/thermo.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kgcornell::io {

enum class Subcommand { Spectrum, Thermo, Wavefunction, Ode, Validate };

/// Fully resolved settings for one CLI run.
struct RunConfig {
    CouplingParams params = CouplingParams::table1();
    std::optional<std::pair<int, int>> dims;
    int n_max = 5;
    KVariant variant = KVariant::Table1;
    int l = 0;
    double mu_min = 0.5;
    double mu_max = 20.0;
    int points = 200;
    ThermoMethod method = ThermoMethod::Direct;
    int n = 0;
    std::optional<double> rmax;
    int samples = 200;
    std::vector<int> nodes{0};
    std::optional<std::pair<double, double>> bracket;
    std::string out;

    /// Dimension range, defaulting to the full table for `spectrum` and D = 3 otherwise.
    std::pair<int, int> dim_range(Subcommand cmd) const
    {
        if (dims)
            return *dims;
        return cmd == Subcommand::Spectrum ? std::pair{1, 6} : std::pair{3, 3};
    }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] inline void bad_value(std::string_view key, std::string_view value, std::string_view why)
{
    throw Error(ErrorKind::UsageError,
                "--" + std::string(key) + ": invalid value '" + std::string(value) + "' (" + std::string(why) + ")");
}

inline double to_double(std::string_view key, std::string_view v)
{
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        bad_value(key, v, "expected a finite number");
    return out;
}

inline int to_int(std::string_view key, std::string_view v)
{
    v = trim(v);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        bad_value(key, v, "expected an integer");
    return out;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

} // namespace detail

/// Keys accepted both as `--key value` flags and as `key = value` config lines.
inline constexpr std::string_view setting_keys[] = {
    "M", "av", "as", "bv", "bs", "dims", "nmax", "variant", "l", "mu-min", "mu-max", "points",
    "method", "n", "rmax", "samples", "nodes", "bracket", "out",
};

inline bool is_setting_key(std::string_view key)
{
    for (auto k : setting_keys)
        if (k == key)
            return true;
    return false;
}

/// Applies one textual setting. Throws UsageError naming the key on malformed values.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value)
{
    using namespace detail;
    value = trim(value);
    if (key == "M")
        cfg.params.M = to_double(key, value);
    else if (key == "av")
        cfg.params.a_v = to_double(key, value);
    else if (key == "as")
        cfg.params.a_s = to_double(key, value);
    else if (key == "bv")
        cfg.params.b_v = to_double(key, value);
    else if (key == "bs")
        cfg.params.b_s = to_double(key, value);
    else if (key == "dims") {
        const auto dots = value.find("..");
        int lo = 0;
        int hi = 0;
        if (dots == std::string_view::npos) {
            lo = hi = to_int(key, value);
        } else {
            lo = to_int(key, value.substr(0, dots));
            hi = to_int(key, value.substr(dots + 2));
        }
        if (lo < 1 || hi < lo)
            bad_value(key, value, "expected A..B with 1 <= A <= B");
        cfg.dims = std::pair{lo, hi};
    } else if (key == "nmax") {
        cfg.n_max = to_int(key, value);
        if (cfg.n_max < 1)
            bad_value(key, value, "must be >= 1");
    } else if (key == "variant") {
        const auto v = parse_variant(value);
        if (!v)
            bad_value(key, value, "expected table1, eq27 or half");
        cfg.variant = *v;
    } else if (key == "l") {
        cfg.l = to_int(key, value);
        if (cfg.l < 0)
            bad_value(key, value, "must be >= 0");
    } else if (key == "mu-min")
        cfg.mu_min = to_double(key, value);
    else if (key == "mu-max")
        cfg.mu_max = to_double(key, value);
    else if (key == "points") {
        cfg.points = to_int(key, value);
        if (cfg.points < 2)
            bad_value(key, value, "must be >= 2");
    } else if (key == "method") {
        const auto m = parse_method(value);
        if (!m)
            bad_value(key, value, "expected direct or em");
        cfg.method = *m;
    } else if (key == "n") {
        cfg.n = to_int(key, value);
        if (cfg.n < 0)
            bad_value(key, value, "must be >= 0");
    } else if (key == "rmax") {
        const double r = to_double(key, value);
        if (!(r > 0.0))
            bad_value(key, value, "must be positive");
        cfg.rmax = r;
    } else if (key == "samples") {
        cfg.samples = to_int(key, value);
        if (cfg.samples < 2)
            bad_value(key, value, "must be >= 2");
    } else if (key == "nodes") {
        cfg.nodes.clear();
        for (auto part : split(value, ',')) {
            const int v = to_int(key, part);
            if (v < 0)
                bad_value(key, value, "node counts must be >= 0");
            cfg.nodes.push_back(v);
        }
    } else if (key == "bracket") {
        const auto parts = split(value, ',');
        if (parts.size() != 2)
            bad_value(key, value, "expected LO,HI");
        const double lo = to_double(key, parts[0]);
        const double hi = to_double(key, parts[1]);
        if (!(lo < hi))
            bad_value(key, value, "need LO < HI");
        cfg.bracket = std::pair{lo, hi};
    } else if (key == "out")
        cfg.out = std::string(value);
    else
        throw Error(ErrorKind::UsageError, "unknown setting '" + std::string(key) + "'");
}

struct ConfigEntry {
    std::string key;
    std::string value;
    int line;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
inline std::vector<ConfigEntry> parse_config_text(std::string_view text)
{
    std::vector<ConfigEntry> entries;
    int line_no = 0;
    for (auto raw : detail::split(text, '\n')) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        const auto line = detail::trim(raw);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorKind::ConfigParseError,
                        "line " + std::to_string(line_no) + ": expected 'key = value'", line_no);
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (!is_setting_key(key))
            throw Error(ErrorKind::ConfigParseError,
                        "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'", line_no);
        if (value.empty())
            throw Error(ErrorKind::ConfigParseError,
                        "line " + std::to_string(line_no) + ": missing value for '" + std::string(key) + "'",
                        line_no);
        entries.push_back({std::string(key), std::string(value), line_no});
    }
    return entries;
}

inline std::vector<ConfigEntry> parse_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::ConfigParseError, "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Config entries first, then flags, so flags win. Values are checked against the
/// preconditions of the subcommand before anything is computed.
inline RunConfig resolve_config(const std::vector<ConfigEntry>& file_entries,
                                const std::vector<std::pair<std::string, std::string>>& flags, Subcommand cmd)
{
    RunConfig cfg;
    for (const auto& e : file_entries) {
        try {
            apply_setting(cfg, e.key, e.value);
        } catch (const Error& err) {
            throw Error(ErrorKind::ConfigParseError, "line " + std::to_string(e.line) + ": " + err.what(), e.line);
        }
    }
    for (const auto& [key, value] : flags)
        apply_setting(cfg, key, value);

    const auto& p = cfg.params;
    if (!p.finite() || p.M < 0.0)
        throw Error(ErrorKind::UsageError, "--M: mass must be finite and non-negative");
    if (p.b_s < std::abs(p.b_v))
        throw Error(ErrorKind::UsageError, "--bs: need b_s >= |b_v| (got bs=" + std::to_string(p.b_s)
                                               + ", bv=" + std::to_string(p.b_v) + ")");
    if (cmd != Subcommand::Ode && !(p.b_s > 0.0))
        throw Error(ErrorKind::UsageError, "--bs: must be positive");
    if (cmd == Subcommand::Thermo) {
        if (!(cfg.mu_min > 0.0))
            throw Error(ErrorKind::UsageError, "--mu-min: must be positive");
        if (!(cfg.mu_max > cfg.mu_min))
            throw Error(ErrorKind::UsageError, "--mu-max: must exceed --mu-min");
        if (!(p.M > 0.0))
            throw Error(ErrorKind::UsageError, "--M: thermodynamics needs M > 0");
    }
    if (cmd != Subcommand::Spectrum && cmd != Subcommand::Validate) {
        const auto [lo, hi] = cfg.dim_range(cmd);
        if (lo != hi)
            throw Error(ErrorKind::UsageError, "--dims: this subcommand takes a single dimension");
        if (lo == 1 && cfg.l != 0)
            throw Error(ErrorKind::UsageError, "--l: D = 1 requires l = 0");
    }
    return cfg;
}

} // namespace kgcornell::io
