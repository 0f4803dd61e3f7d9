#pragma once

#include "kgcornell/ode.hpp"
#include "kgcornell/spectrum.hpp"
#include "kgcornell/thermo.hpp"
#include "kgcornell/wavefunction.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace kgcornell::acceptance {

/// Number of (n, l, D) cells with n = 1..5, l = 0..n-1, D = 1..6.
inline constexpr int table_cell_count = 90;

/// Published spectrum for M=1, b_v=0.002, b_s=2, a_v=0.2, a_s=6 (positive roots; the negative
/// roots are the same magnitudes minus 0.002). Values are truncated to three decimals.
struct PublishedCell {
    int n;
    int l;
    std::array<double, 6> e_plus;  // D = 1..6
    std::array<double, 6> e_minus;
};

inline constexpr std::array<PublishedCell, 15> published_table{{
    {1, 0, {6.012, 5.829, 5.670, 5.536, 5.427, 5.346}, {-6.010, -5.827, -5.668, -5.534, -5.425, -5.344}},
    {2, 0, {6.336, 6.163, 6.012, 5.886, 5.784, 5.708}, {-6.334, -6.161, -6.010, -5.884, -5.782, -5.706}},
    {2, 1, {6.336, 6.108, 5.899, 5.712, 5.550, 5.414}, {-6.334, -6.106, -5.897, -5.710, -5.548, -5.412}},
    {3, 0, {6.644, 6.479, 6.336, 6.216, 6.120, 6.048}, {-6.642, -6.477, -6.334, -6.214, -6.118, -6.046}},
    {3, 1, {6.644, 6.427, 6.229, 6.052, 5.899, 5.771}, {-6.642, -6.425, -6.227, -6.050, -5.897, -5.769}},
    {3, 2, {6.542, 6.264, 5.998, 5.750, 5.522, 5.321}, {-6.540, -6.262, -5.996, -5.748, -5.520, -5.319}},
    {4, 0, {6.939, 6.781, 6.644, 6.530, 6.439, 6.370}, {-6.937, -6.779, -6.642, -6.528, -6.437, -6.368}},
    {4, 1, {6.939, 6.731, 6.542, 6.374, 6.229, 6.108}, {-6.937, -6.729, -6.540, -6.372, -6.227, -6.106}},
    {4, 2, {6.841, 6.575, 6.323, 6.088, 5.873, 5.684}, {-6.839, -6.573, -6.321, -6.086, -5.871, -5.682}},
    {4, 3, {6.632, 6.289, 5.947, 5.612, 5.289, 4.984}, {-6.630, -6.287, -5.945, -5.610, -5.287, -4.982}},
    {5, 0, {7.221, 7.070, 6.939, 6.830, 6.742, 6.677}, {-7.219, -7.068, -6.937, -6.828, -6.740, -6.675}},
    {5, 1, {7.221, 7.022, 6.841, 6.680, 6.542, 6.427}, {-7.219, -7.020, -6.839, -6.678, -6.540, -6.425}},
    {5, 2, {7.127, 6.873, 6.632, 6.408, 6.205, 6.026}, {-7.125, -6.871, -6.630, -6.406, -6.203, -6.024}},
    {5, 3, {6.927, 6.599, 6.275, 5.958, 5.654, 5.370}, {-6.925, -6.597, -6.273, -5.956, -5.652, -5.368}},
    {5, 4, {6.586, 6.144, 5.676, 5.177, 4.644, 4.071}, {-6.584, -6.142, -5.674, -5.175, -4.642, -4.069}},
}};

inline constexpr double table_tolerance = 1.5e-3;
inline constexpr double vieta_tolerance = 1e-9;
inline constexpr double linear_identity_tolerance = 1e-12;
inline constexpr double em_tolerance_high = 1e-3;  // mu in [2, 20]
inline constexpr double em_tolerance_low = 1e-2;   // mu in [0.5, 2)
inline constexpr double direct_tail_tolerance = 1e-10;
inline constexpr double high_t_mu = 100.0;
inline constexpr double high_t_tolerance = 0.05;
inline constexpr double high_t_partition_tolerance = 0.02;
inline constexpr double identity_tolerance = 1e-10;
inline constexpr double heat_capacity_fd_tolerance = 1e-5;
inline constexpr double normalization_tolerance = 1e-8;
inline constexpr double ode_level_tolerance = 1e-6;
inline constexpr double ode_halving_tolerance = 1e-8;

/// Integral of R^2 r^2 with the approximate normalisation constant, default couplings at
/// (n, l, D) = (1, 0, 3); frozen from a 40-digit reference quadrature and checked against
/// a 10^6-node composite Simpson rule in the unit tests.
inline constexpr double pinned_paper_norm_deviation = 1.6857526921304198e-7;

struct CriterionResult {
    int id;
    std::string name;
    bool passed;
    std::string detail;
};

inline std::string format(const char* fmt, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline LinearSpectrum default_spectrum()
{
    return linear_form(CouplingParams::table1(), 3, 0, KVariant::Table1);
}

inline CriterionResult table_reproduction(KVariant variant = KVariant::Table1)
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::array<int, 6> dims{1, 2, 3, 4, 5, 6};
    const auto rows = spectrum_table(CouplingParams::table1(), dims, 5, variant);
    double worst = 0.0;
    int failures = 0;
    int cells = 0;
    for (const auto& cell : published_table) {
        for (int D = 1; D <= 6; ++D) {
            const auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& r) {
                return r.n == cell.n && r.l == cell.l && r.D == D;
            });
            ++cells;
            if (it == rows.end() || !it->ok()) {
                ++failures;
                continue;
            }
            const double dp = std::abs(it->e_plus - cell.e_plus[static_cast<std::size_t>(D - 1)]);
            const double dm = std::abs(it->e_minus - cell.e_minus[static_cast<std::size_t>(D - 1)]);
            worst = std::max({worst, dp, dm});
            if (!(dp <= table_tolerance && dm <= table_tolerance))
                ++failures;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool ok = failures == 0 && cells == table_cell_count && rows.size() == table_cell_count && elapsed < 1.0;
    return {1, "Table 1 reproduction",
            ok, format("variant=%s cells=%d mismatched=%d max|dE|=%.3e (tol %.1e) runtime=%.3fs",
                       std::string(to_string(variant)).c_str(), cells, failures, worst, table_tolerance, elapsed)};
}

inline CriterionResult vieta_invariant()
{
    const std::array<int, 6> dims{1, 2, 3, 4, 5, 6};
    const auto rows = spectrum_table(CouplingParams::table1(), dims, 5, KVariant::Table1);
    double worst = 0.0;
    bool all_ok = rows.size() == table_cell_count;
    for (const auto& r : rows) {
        if (!r.ok()) {
            all_ok = false;
            continue;
        }
        worst = std::max(worst, std::abs(r.e_plus + r.e_minus - 0.002));
    }
    return {2, "Vieta invariant", all_ok && worst <= vieta_tolerance,
            format("max|E+ + E- - 0.002|=%.3e (tol %.1e)", worst, vieta_tolerance)};
}

inline CriterionResult linear_form_identity()
{
    const auto p = CouplingParams::table1();
    double worst = 0.0;
    bool ok = true;
    int checked = 0;
    int skipped = 0;
    for (int D = 1; D <= 6; ++D) {
        for (int l = 0; l <= 4; ++l) {
            const auto spec = linear_coefficients(p, D, l, KVariant::Table1);
            for (int n = 0; n <= 50; ++n) {
                // (D, l) = (6, 4) has A < 0: its n = 0 level is not real on either side
                if (spec.A + spec.B * n < 0.0) {
                    ++skipped;
                    continue;
                }
                ++checked;
                const double closed = energy_pair(p, QuantumState{n, l, D, KVariant::Table1}).e_plus;
                const double recast = p.M * (p.b_v / p.b_s + std::sqrt(spec.A + spec.B * n));
                const double rel = std::abs(recast - closed) / std::abs(closed);
                worst = std::max(worst, rel);
                ok = ok && rel <= linear_identity_tolerance;
            }
        }
    }
    return {3, "Linear-form identity", ok,
            format("max rel diff=%.3e over n=0..50, D=1..6, l=0..4: %d levels checked, %d without real energy (tol %.1e)",
                   worst, checked, skipped, linear_identity_tolerance)};
}

inline CriterionResult partition_oracle()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = default_spectrum();
    double worst_high = 0.0;
    double worst_low = 0.0;
    for (double mu : uniform_grid(0.5, 20.0, 200)) {
        const double zd = partition_direct(spec, mu, direct_tail_tolerance);
        const double rel = std::abs(partition_em(spec, mu) - zd) / zd;
        (mu >= 2.0 ? worst_high : worst_low) = std::max(mu >= 2.0 ? worst_high : worst_low, rel);
    }
    const double elapsed = seconds_since(t0);
    const bool ok = worst_high <= em_tolerance_high && worst_low <= em_tolerance_low && elapsed < 10.0;
    return {4, "Partition-function oracle", ok,
            format("max rel |Z_EM-Z_direct|: mu>=2 %.3e (tol %.0e), mu<2 %.3e (tol %.0e); runtime=%.3fs", worst_high,
                   em_tolerance_high, worst_low, em_tolerance_low, elapsed)};
}

inline CriterionResult high_temperature_limits()
{
    const auto spec = default_spectrum();
    const auto pt = thermo_point(spec, high_t_mu, ThermoMethod::EulerMaclaurin);
    const double u_dev = std::abs(pt.U_bar / high_t_mu - 2.0);
    const double c_dev = std::abs(pt.Cv_bar - 2.0);
    const double z_dev = std::abs(pt.Z / (high_t_mu * high_t_mu) / (2.0 / spec.B) - 1.0);
    const bool ok = u_dev <= high_t_tolerance && c_dev <= high_t_tolerance && z_dev <= high_t_partition_tolerance;
    return {5, "High-temperature limits", ok,
            format("mu=100: |U/mu-2|=%.4f (tol %.2f), |Cv-2|=%.4f (tol %.2f), |Z/mu^2 / (2/B) - 1|=%.4f (tol %.2f)",
                   u_dev, high_t_tolerance, c_dev, high_t_tolerance, z_dev, high_t_partition_tolerance)};
}

/// Central difference of U_bar with step halving until two successive estimates agree.
inline double heat_capacity_fd(const LinearSpectrum& spec, double mu, ThermoMethod method, double tol)
{
    auto U = [&](double m) { return thermo_point(spec, m, method, tol).U_bar; };
    double step = 1e-2 * mu;
    double prev = (U(mu + step) - U(mu - step)) / (2.0 * step);
    for (int i = 0; i < 12; ++i) {
        step /= 2.0;
        const double cur = (U(mu + step) - U(mu - step)) / (2.0 * step);
        if (std::abs(cur - prev) <= 1e-7 * std::abs(cur))
            return cur;
        prev = cur;
    }
    return prev;
}

inline CriterionResult thermodynamic_identities()
{
    const auto spec = default_spectrum();
    double worst_f = 0.0;
    double worst_s = 0.0;
    double worst_c = 0.0;
    for (auto method : {ThermoMethod::Direct, ThermoMethod::EulerMaclaurin}) {
        for (const auto& pt : thermo_curve(spec, 0.5, 20.0, 200, method)) {
            worst_f = std::max(worst_f, std::abs(pt.F_bar - (pt.U_bar - pt.mu * pt.S_bar)));
            worst_s = std::max(worst_s, std::abs(pt.S_bar - (std::log(pt.Z) + pt.U_bar / pt.mu)));
        }
        for (double mu : uniform_grid(1.0, 50.0, 50)) {
            const double cv = thermo_point(spec, mu, method, 1e-13).Cv_bar;
            const double fd = heat_capacity_fd(spec, mu, method, 1e-13);
            worst_c = std::max(worst_c, std::abs(cv - fd) / std::abs(fd));
        }
    }
    const bool ok = worst_f <= identity_tolerance && worst_s <= identity_tolerance
        && worst_c <= heat_capacity_fd_tolerance;
    return {6, "Thermodynamic identities", ok,
            format("max|F-(U-muS)|=%.2e, max|S-(lnZ+U/mu)|=%.2e (tol %.0e); max rel|Cv-dU/dmu|=%.2e on [1,50] (tol %.0e)",
                   worst_f, worst_s, identity_tolerance, worst_c, heat_capacity_fd_tolerance)};
}

inline CriterionResult figure_shapes()
{
    const auto spec = default_spectrum();
    int f_violations = 0;
    int u_violations = 0;
    for (auto method : {ThermoMethod::Direct, ThermoMethod::EulerMaclaurin}) {
        const auto curve = thermo_curve(spec, 0.5, 20.0, 200, method);
        for (std::size_t i = 1; i < curve.size(); ++i) {
            f_violations += curve[i].F_bar < curve[i - 1].F_bar ? 0 : 1;
            u_violations += curve[i].U_bar > curve[i - 1].U_bar ? 0 : 1;
        }
    }
    return {7, "Figure-shape properties", f_violations == 0 && u_violations == 0,
            format("mu in [0.5,20], direct and EM: F non-decreasing steps=%d, U non-increasing steps=%d",
                   f_violations, u_violations)};
}

/// Composite Simpson rule on [0, r_max]; independent of the adaptive Gauss-Kronrod path.
inline double simpson_norm(const RadialWavefunction& wf, double r_max, int intervals)
{
    const double h = r_max / intervals;
    auto f = [&](double r) {
        const double R = wf(r);
        return R * R * std::pow(r, wf.D - 1);
    };
    double s = f(0.0) + f(r_max);
    for (int i = 1; i < intervals; ++i)
        s += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline CriterionResult normalization()
{
    double worst_unit = 0.0;
    double worst_gauss = 0.0;
    const auto t1 = CouplingParams::table1();
    for (int D : {2, 3, 4}) {
        for (int n = 0; n <= 3; ++n) {
            const auto wf = build_wavefunction(t1, QuantumState{n, 0, D, KVariant::Table1}, Branch::Plus);
            const auto q = norm_quadrature(wf);
            const auto exact = wf.with_log_scale(q.log_scale);
            worst_unit = std::max(worst_unit, std::abs(simpson_norm(exact, q.r_max, 200000) - 1.0));
        }
    }
    CouplingParams pure{0.0, 0.0, 0.5, 2.0, 1.0};
    for (int D : {2, 3, 5}) {
        for (int l = 1; l <= 2; ++l) {
            for (int n = 0; n <= 3; ++n) {
                const QuantumState s{n, l, D, KVariant::HalfQuadratic};
                const auto wf = build_wavefunction(pure, s, Branch::Plus);
                const double paper = norm_paper(pure, s, wf.energy);
                const auto q = norm_quadrature(wf);
                worst_gauss = std::max(worst_gauss, std::abs(paper - q.C_exact) / q.C_exact);
                const auto exact = wf.with_log_scale(q.log_scale);
                worst_unit = std::max(worst_unit, std::abs(simpson_norm(exact, q.r_max, 200000) - 1.0));
            }
        }
    }
    const auto wf = build_wavefunction(t1, QuantumState{1, 0, 3, KVariant::Table1}, Branch::Plus);
    const double rho = norm_quadrature(wf).norm_of_input;
    const double rho_dev = std::abs(rho - pinned_paper_norm_deviation) / pinned_paper_norm_deviation;
    const bool ok = worst_unit <= normalization_tolerance && worst_gauss <= normalization_tolerance
        && rho_dev <= normalization_tolerance;
    return {8, "Normalization", ok,
            format("max|norm-1|=%.2e; a=0 max rel|C_paper-C_exact|=%.2e; Table-1 (1,0,3) rho=%.10e pinned rel dev=%.2e "
                   "(tol %.0e)",
                   worst_unit, worst_gauss, rho, rho_dev, normalization_tolerance)};
}

/// Ground level of the KG-Coulomb problem, E = M [1 + a^2/(n_r + 1/2 + sqrt((l+1/2)^2 - a^2))^2]^{-1/2}.
inline double kg_coulomb_level(double M, double a, int n_r, int l)
{
    const double denom = n_r + 0.5 + std::sqrt((l + 0.5) * (l + 0.5) - a * a);
    return M / std::sqrt(1.0 + a * a / (denom * denom));
}

inline CriterionResult ode_validation()
{
    const CouplingParams osc{0.0, 0.0, 0.0, 2.0, 0.0};
    const auto e_osc = find_level(make_ode_problem(osc, 3, 0, 0, 1.0, 4.0));
    const double d_osc = std::abs(e_osc.E - std::sqrt(6.0));

    const CouplingParams coul{0.2, 0.0, 0.0, 0.0, 1.0};
    const double exact = kg_coulomb_level(1.0, 0.2, 0, 0);
    const auto e_coul = find_level(make_ode_problem(coul, 3, 0, 0, 0.9, 0.99));
    const double d_coul = std::abs(e_coul.E - exact);

    const bool ok = d_osc <= ode_level_tolerance && d_coul <= ode_level_tolerance
        && e_osc.halving_shift < ode_halving_tolerance && e_coul.halving_shift < ode_halving_tolerance
        && e_osc.nodes == 0 && e_coul.nodes == 0;
    return {9, "ODE-solver validation", ok,
            format("oscillator E=%.10f |dE|=%.2e halving=%.2e; KG-Coulomb E=%.10f (exact %.10f) |dE|=%.2e halving=%.2e",
                   e_osc.E, d_osc, e_osc.halving_shift, e_coul.E, exact, d_coul, e_coul.halving_shift)};
}

/// The printed exponent differs from the table variant only by the sign of l(l+D-2);
/// the table check has to reject it.
inline CriterionResult mutation_sensitivity()
{
    const auto mutated = table_reproduction(KVariant::PrintedEq27);
    return {10, "Mutation sensitivity", !mutated.passed,
            "table check under flipped l(l+D-2) sign " + std::string(mutated.passed ? "PASSED (bad)" : "failed (good)")
                + ": " + mutated.detail};
}

struct Criterion {
    int id;
    std::function<CriterionResult()> run;
};

/// Every criterion; `variant` feeds the Table-1 check so a mutated build can be exercised.
inline std::vector<Criterion> all_criteria(KVariant variant = KVariant::Table1)
{
    return {
        {1, [variant] { return table_reproduction(variant); }},
        {2, vieta_invariant},
        {3, linear_form_identity},
        {4, partition_oracle},
        {5, high_temperature_limits},
        {6, thermodynamic_identities},
        {7, figure_shapes},
        {8, normalization},
        {9, ode_validation},
        {10, mutation_sensitivity},
    };
}

/// Runs a criterion, turning computation errors into a failed result.
inline CriterionResult run_guarded(const Criterion& c)
{
    try {
        return c.run();
    } catch (const std::exception& e) {
        return {c.id, "criterion " + std::to_string(c.id), false, std::string("error: ") + e.what()};
    }
}

inline std::string report_line(const CriterionResult& r)
{
    return format("[%s] C%d %s: %s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
}

} // namespace kgcornell::acceptance
