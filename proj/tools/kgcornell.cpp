// Command-line front end: spectrum, thermo, wavefunction, ode and validate subcommands.

#include "kgcornell/acceptance.hpp"
#include "kgcornell/io/config.hpp"
#include "kgcornell/io/csv.hpp"
#include "kgcornell/ode.hpp"
#include "kgcornell/spectrum.hpp"
#include "kgcornell/thermo.hpp"
#include "kgcornell/wavefunction.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace {

using namespace kgcornell;
using io::RunConfig;
using io::Subcommand;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

/// Raw flag values as typed; resolved together with the config file.
struct FlagSink {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config_path;
};

void add_setting_flags(CLI::App& cmd, FlagSink& sink, std::initializer_list<std::string_view> keys)
{
    for (auto key : keys) {
        const std::string k(key);
        sink.options[k] = cmd.add_option("--" + k, sink.values[k]);
    }
    cmd.add_option("--config", sink.config_path, "plain-text file of `key = value` lines");
}

RunConfig resolve(const FlagSink& sink, Subcommand which)
{
    std::vector<std::pair<std::string, std::string>> flags;
    for (const auto& [key, opt] : sink.options)
        if (opt->count() > 0)
            flags.emplace_back(key, sink.values.at(key));
    std::vector<io::ConfigEntry> entries;
    if (!sink.config_path.empty())
        entries = io::parse_config_file(sink.config_path);
    return io::resolve_config(entries, flags, which);
}

std::vector<int> dim_list(const RunConfig& cfg, Subcommand which)
{
    const auto [lo, hi] = cfg.dim_range(which);
    std::vector<int> dims(static_cast<std::size_t>(hi - lo + 1));
    std::iota(dims.begin(), dims.end(), lo);
    return dims;
}

int run_spectrum(const RunConfig& cfg)
{
    const auto dims = dim_list(cfg, Subcommand::Spectrum);
    io::write_csv(io::spectrum_csv(spectrum_table(cfg.params, dims, cfg.n_max, cfg.variant)), cfg.out);
    return exit_ok;
}

int run_thermo(const RunConfig& cfg)
{
    const int D = cfg.dim_range(Subcommand::Thermo).first;
    const auto spec = linear_form(cfg.params, D, cfg.l, cfg.variant);
    std::vector<io::ThermoCsvRow> rows;
    for (const auto& pt : thermo_curve(spec, cfg.mu_min, cfg.mu_max, cfg.points, cfg.method))
        rows.push_back({partition_direct(spec, pt.mu, 1e-10), partition_em(spec, pt.mu), pt});
    io::write_csv(io::thermo_csv(rows), cfg.out);
    return exit_ok;
}

int run_wavefunction(const RunConfig& cfg)
{
    const int D = cfg.dim_range(Subcommand::Wavefunction).first;
    const auto wf = build_wavefunction(cfg.params, QuantumState{cfg.n, cfg.l, D, cfg.variant}, Branch::Plus);
    const auto q = norm_quadrature(wf);
    std::fprintf(stderr, "# k=%.12g E=%.12g alpha_tilde=%.12g C_paper=%.12g C_exact=%.12g norm(R_paper)=%.12g\n",
                 wf.k, wf.energy, wf.alpha_tilde, wf.C(), q.C_exact, q.norm_of_input);
    const double r_max = cfg.rmax.value_or(q.r_max);
    io::write_csv(io::wavefunction_csv(sample_wavefunction(wf, 0.0, r_max, cfg.samples)), cfg.out);
    return exit_ok;
}

int run_ode(const RunConfig& cfg)
{
    const int D = cfg.dim_range(Subcommand::Ode).first;
    std::vector<io::OdeCsvRow> rows;
    for (int nodes : cfg.nodes) {
        const auto level = solve_level(cfg.params, D, cfg.l, nodes, cfg.bracket, cfg.rmax);
        rows.push_back({D, cfg.l, nodes, level});
        std::string closed = "n/a";
        try {
            const double e = energy_pair(cfg.params, QuantumState{nodes, cfg.l, D, cfg.variant}).e_plus;
            closed = io::fmt(e) + " (rel gap " + io::fmt(std::abs(level.E - e) / std::abs(e)) + ")";
        } catch (const Error& err) {
            closed = std::string(to_string(err.kind()));
        }
        std::fprintf(stderr, "# nodes=%d E_numeric=%.12g halving=%.3g converged=%d closed[%s]=%s\n", nodes,
                     level.E, level.halving_shift, level.converged ? 1 : 0,
                     std::string(to_string(cfg.variant)).c_str(), closed.c_str());
    }
    io::write_csv(io::ode_csv(rows), cfg.out);
    return exit_ok;
}

int run_validate(const RunConfig& cfg)
{
    bool all = true;
    for (const auto& c : acceptance::all_criteria(cfg.variant)) {
        const auto r = acceptance::run_guarded(c);
        all = all && r.passed;
        std::cout << acceptance::report_line(r) << '\n' << std::flush;
    }
    std::cout << (all ? "validate: all criteria passed" : "validate: FAILED") << '\n';
    return all ? exit_ok : exit_failure;
}

void report_error(std::string_view kind, std::string_view message)
{
    std::cerr << "error[" << kind << "]: " << message << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Klein-Gordon Cornell spectrum, wave functions and thermodynamics"};
    app.require_subcommand(1);

    FlagSink spectrum_flags, thermo_flags, wave_flags, ode_flags, validate_flags;
    auto* spectrum = app.add_subcommand("spectrum", "energy grid over n, l, D (spectrum.csv)");
    add_setting_flags(*spectrum, spectrum_flags, {"M", "av", "as", "bv", "bs", "dims", "nmax", "variant", "out"});
    auto* thermo = app.add_subcommand("thermo", "partition function and thermal quantities versus mu (thermo.csv)");
    add_setting_flags(*thermo, thermo_flags,
                      {"M", "av", "as", "bv", "bs", "dims", "l", "variant", "mu-min", "mu-max", "points", "method",
                       "out"});
    auto* wave = app.add_subcommand("wavefunction", "sampled radial wave function (wavefunction.csv)");
    add_setting_flags(*wave, wave_flags,
                      {"M", "av", "as", "bv", "bs", "dims", "l", "n", "variant", "rmax", "samples", "out"});
    auto* ode = app.add_subcommand("ode", "numerical shooting levels (ode.csv)");
    add_setting_flags(*ode, ode_flags,
                      {"M", "av", "as", "bv", "bs", "dims", "l", "variant", "nodes", "bracket", "rmax", "out"});
    auto* validate = app.add_subcommand("validate", "run every acceptance criterion");
    add_setting_flags(*validate, validate_flags, {"variant"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("UsageError", e.what());
        return exit_usage;
    }

    try {
        if (spectrum->parsed())
            return run_spectrum(resolve(spectrum_flags, Subcommand::Spectrum));
        if (thermo->parsed())
            return run_thermo(resolve(thermo_flags, Subcommand::Thermo));
        if (wave->parsed())
            return run_wavefunction(resolve(wave_flags, Subcommand::Wavefunction));
        if (ode->parsed())
            return run_ode(resolve(ode_flags, Subcommand::Ode));
        if (validate->parsed())
            return run_validate(resolve(validate_flags, Subcommand::Validate));
    } catch (const Error& e) {
        const bool usage = e.kind() == ErrorKind::UsageError || e.kind() == ErrorKind::ConfigParseError;
        report_error(to_string(e.kind()), e.message());
        return usage ? exit_usage : exit_failure;
    } catch (const std::exception& e) {
        report_error("Internal", e.what());
        return exit_failure;
    }
    return exit_usage;
}
