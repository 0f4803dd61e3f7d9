#pragma once

#include "kgcornell/errors.hpp"
#include "kgcornell/spectrum.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace kgcornell {

enum class ThermoMethod { Direct, EulerMaclaurin };

constexpr std::string_view to_string(ThermoMethod m) noexcept
{
    return m == ThermoMethod::Direct ? "direct" : "em";
}

inline std::optional<ThermoMethod> parse_method(std::string_view s)
{
    if (s == "direct")
        return ThermoMethod::Direct;
    if (s == "em")
        return ThermoMethod::EulerMaclaurin;
    return std::nullopt;
}

/// Bernoulli numbers used by the Euler-Maclaurin sum, truncated after the f''' term.
struct EulerMaclaurinConstants {
    static constexpr double B2 = 1.0 / 6.0;
    static constexpr double B4 = -1.0 / 30.0;
    static constexpr int i_max = 2;
};

/// All thermal quantities in units of M (energies) or k_B (entropy, heat capacity).
struct ThermoPoint {
    double mu;
    double Z;
    double F_bar;
    double U_bar;
    double S_bar;
    double Cv_bar;
};

inline constexpr std::int64_t default_truncation_cap = 100'000'000;

/// Term-wise sums S_j = sum_n exp(-e_n/mu) e_n^j for j = 0, 1, 2 with e_n = sqrt(A + B n) - sqrt(A).
struct DirectMoments {
    double S0;
    double S1;
    double S2;
    std::int64_t terms;
};

namespace detail {

inline void require_positive_mu(double mu)
{
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw Error(ErrorKind::NonPositiveTemperature, "mu must be positive and finite", mu);
}

/// Integral bound on sum_{n>N} e_n^j exp(-e_n/mu), obtained from s = sqrt(A + B x) and the
/// closed form of the upper incomplete gamma function at integer order.
inline double moment_tail(const LinearSpectrum& spec, double mu, double t_N, int j)
{
    const double x = t_N / mu;
    const double a = std::sqrt(spec.A);
    const double ex = std::exp(-x);
    // Gamma(m+1, x) / e^{-x} for m = 0..3
    const double g0 = 1.0;
    const double g1 = 1.0 + x;
    const double g2 = 2.0 * (1.0 + x + 0.5 * x * x);
    const double g3 = 6.0 * (1.0 + x + 0.5 * x * x + x * x * x / 6.0);
    const std::array<double, 4> g{g0, g1, g2, g3};
    const double muj1 = std::pow(mu, j + 1);
    return (2.0 / spec.B) * ex * (mu * muj1 * g[j + 1] + a * muj1 * g[j]);
}

} // namespace detail

/// Direct sums truncated where the analytic tail bound of every requested moment falls below
/// tol times its partial sum. `max_order` = 0 reproduces the plain partition function.
inline DirectMoments direct_moments(const LinearSpectrum& spec, double mu, double tol, int max_order = 2,
                                    std::int64_t cap = default_truncation_cap)
{
    detail::require_positive_mu(mu);
    if (!(tol > 0.0))
        throw Error(ErrorKind::InvalidProblem, "tolerance must be positive", tol);
    DirectMoments m{0.0, 0.0, 0.0, 0};
    const double sqrtA = std::sqrt(spec.A);
    for (std::int64_t n = 0;; ++n) {
        if (n > cap)
            throw Error(ErrorKind::TruncationOverflow, "direct partition sum exceeded the term cap",
                        static_cast<double>(cap));
        const double e = std::sqrt(spec.A + spec.B * static_cast<double>(n)) - sqrtA;
        const double t = n == 0 ? 1.0 : std::exp(-e / mu);
        m.S0 += t;
        m.S1 += t * e;
        m.S2 += t * e * e;
        m.terms = n + 1;
        // weighted integrands only decrease beyond e = j mu
        if (e < max_order * mu)
            continue;
        bool done = detail::moment_tail(spec, mu, e, 0) < tol * m.S0;
        if (done && max_order >= 1)
            done = detail::moment_tail(spec, mu, e, 1) < tol * m.S1;
        if (done && max_order >= 2)
            done = detail::moment_tail(spec, mu, e, 2) < tol * m.S2;
        if (done)
            return m;
    }
}

/// Z(mu) = sum_{n>=0} exp(-(E_n - E_0)/(M mu)), truncated by the integral tail bound.
inline double partition_direct(const LinearSpectrum& spec, double mu, double tol,
                               std::int64_t cap = default_truncation_cap)
{
    return direct_moments(spec, mu, tol, 0, cap).S0;
}

/// Closed form of the Euler-Maclaurin partition function as a Laurent polynomial in mu:
///   Z = c0 + c1 mu + c2 mu^2 + d1/mu + d2/mu^2 + d3/mu^3.
struct EulerMaclaurinSeries {
    double c0, c1, c2, d1, d2, d3;

    static EulerMaclaurinSeries from(const LinearSpectrum& spec)
    {
        using K = EulerMaclaurinConstants;
        const double A = spec.A;
        const double B = spec.B;
        const double sA = std::sqrt(A);
        const double B3 = B * B * B;
        // f'(0) = -B/(2 sqrt(A) mu);  f'''(0) = -3B^3/(8 A^{5/2} mu) - 3B^3/(8 A^2 mu^2) - B^3/(8 A^{3/2} mu^3)
        const double w1 = -K::B2 / 2.0;   // -B_2/2!
        const double w2 = -K::B4 / 24.0;  // -B_4/4!
        EulerMaclaurinSeries s{};
        s.c0 = 0.5;
        s.c1 = 2.0 * sA / B;
        s.c2 = 2.0 / B;
        s.d1 = w1 * (-B / (2.0 * sA)) + w2 * (-3.0 * B3 / (8.0 * A * A * sA));
        s.d2 = w2 * (-3.0 * B3 / (8.0 * A * A));
        s.d3 = w2 * (-B3 / (8.0 * A * sA));
        return s;
    }

    double value(double mu) const
    {
        const double v = 1.0 / mu;
        return c0 + mu * (c1 + c2 * mu) + v * (d1 + v * (d2 + v * d3));
    }
    double d_mu(double mu) const
    {
        const double v = 1.0 / mu;
        return c1 + 2.0 * c2 * mu - v * v * (d1 + v * (2.0 * d2 + v * 3.0 * d3));
    }
    double d2_mu(double mu) const
    {
        const double v = 1.0 / mu;
        return 2.0 * c2 + v * v * v * (2.0 * d1 + v * (6.0 * d2 + v * 12.0 * d3));
    }
};

inline double partition_em(const LinearSpectrum& spec, double mu)
{
    detail::require_positive_mu(mu);
    return EulerMaclaurinSeries::from(spec).value(mu);
}

/// F, U, S, C_v from ln Z and its mu-derivatives. Direct uses the exact term-wise
/// differentiated sums, EulerMaclaurin differentiates the closed form analytically.
inline ThermoPoint thermo_point(const LinearSpectrum& spec, double mu, ThermoMethod method, double tol = 1e-10)
{
    detail::require_positive_mu(mu);
    if (method == ThermoMethod::Direct) {
        const auto m = direct_moments(spec, mu, tol, 2);
        const double mean = m.S1 / m.S0;
        const double var = m.S2 / m.S0 - mean * mean;
        const double lnZ = std::log(m.S0);
        return {mu, m.S0, -mu * lnZ, mean, lnZ + mean / mu, var / (mu * mu)};
    }
    const auto series = EulerMaclaurinSeries::from(spec);
    const double Z = series.value(mu);
    if (!(Z > 0.0))
        throw Error(ErrorKind::NonPositivePartition,
                    "Euler-Maclaurin partition function is not positive at this mu (asymptotic breakdown)", Z);
    // d ln Z / d mu and its derivative
    const double dlnZ = series.d_mu(mu) / Z;
    const double d2lnZ = series.d2_mu(mu) / Z - dlnZ * dlnZ;
    const double lnZ = std::log(Z);
    return {mu, Z, -mu * lnZ, mu * mu * dlnZ, lnZ + mu * dlnZ, 2.0 * mu * dlnZ + mu * mu * d2lnZ};
}

/// Uniform mu grid, endpoints included.
inline std::vector<double> uniform_grid(double lo, double hi, int points)
{
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1);
    return g;
}

inline std::vector<ThermoPoint> thermo_curve(const LinearSpectrum& spec, double mu_min, double mu_max, int points,
                                             ThermoMethod method, double tol = 1e-10)
{
    if (!(mu_min > 0.0))
        throw Error(ErrorKind::NonPositiveTemperature, "mu_min must be positive", mu_min);
    if (!(mu_max > mu_min))
        throw Error(ErrorKind::InvalidProblem, "need mu_max > mu_min", mu_max);
    if (points < 2)
        throw Error(ErrorKind::InvalidProblem, "need at least two grid points", points);
    std::vector<ThermoPoint> out;
    out.reserve(static_cast<std::size_t>(points));
    for (double mu : uniform_grid(mu_min, mu_max, points))
        out.push_back(thermo_point(spec, mu, method, tol));
    return out;
}

} // namespace kgcornell
