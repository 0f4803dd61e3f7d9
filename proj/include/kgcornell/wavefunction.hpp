#pragma once

#include "kgcornell/errors.hpp"
#include "kgcornell/params.hpp"
#include "kgcornell/spectrum.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace kgcornell {

enum class Branch { Plus, Minus };

/// Largest argument accepted by the gamma function before double overflow.
inline constexpr double gamma_argument_max = 171.0;

/// ln Gamma(x) for x in (0, 171]; outside that range the caller gets GammaDomain.
inline double log_gamma_checked(double x)
{
    if (!(x > 0.0) || x > gamma_argument_max)
        throw Error(ErrorKind::GammaDomain, "gamma argument outside (0, 171]", x);
    return std::log(std::tgamma(x));
}

/// R(r) = (C/n!) r^{k+n} exp(-beta r^2/2 - alpha_tilde r).
/// The prefactor is kept as log(C/n!) so that n! never has to be formed.
struct RadialWavefunction {
    double k;
    int n;
    double beta;
    double alpha_tilde;
    double energy;
    int D;
    /// log(C / n!)
    double log_scale;

    double C() const { return std::exp(log_scale + std::lgamma(n + 1.0)); }

    /// Log of the unnormalised shape r^{k+n} exp(-beta r^2/2 - alpha_tilde r).
    double log_shape(double r) const
    {
        return (k + n) * std::log(r) - 0.5 * beta * r * r - alpha_tilde * r;
    }

    double operator()(double r) const
    {
        if (r <= 0.0)
            return 0.0;
        return std::exp(log_scale + log_shape(r));
    }

    /// Same profile with C multiplied by `factor` (> 0).
    RadialWavefunction scaled(double factor) const
    {
        RadialWavefunction w = *this;
        w.log_scale += std::log(factor);
        return w;
    }

    /// Same profile with the prefactor replaced by an explicit C / n!.
    RadialWavefunction with_log_scale(double log_c_over_nfact) const
    {
        RadialWavefunction w = *this;
        w.log_scale = log_c_over_nfact;
        return w;
    }
};

/// log(C / n!) of the approximate normalisation C = n! sqrt(2 beta^h / Gamma(h)), h = k + n + D/2.
/// Exact when alpha_tilde = 0.
inline double log_norm_paper(double k, int n, int D, double beta)
{
    const double h = k + n + 0.5 * D;
    if (!(h > 0.0))
        throw Error(ErrorKind::GammaDomain, "k + n + D/2 must be positive", h);
    return 0.5 * (std::log(2.0) + h * std::log(beta) - log_gamma_checked(h));
}

/// Approximate normalisation constant C (including the n! factor).
inline double norm_paper(const CouplingParams& p, const QuantumState& s, double E)
{
    (void)E; // the approximate constant does not depend on the energy
    p.require_closed_form();
    const double k = k_exponent(p, s);
    return std::exp(log_norm_paper(k, s.n, s.D, p.beta()) + std::lgamma(s.n + 1.0));
}

inline RadialWavefunction build_wavefunction(const CouplingParams& p, const QuantumState& s, Branch branch)
{
    s.validate_physical();
    const auto e = energy_pair(p, s);
    if (!(e.k > 0.0))
        throw Error(ErrorKind::NonPositiveExponent, "k must be positive for a bounded wave function", e.k);
    const double beta = p.beta();
    if (!(beta > 0.0))
        throw Error(ErrorKind::InvalidCouplings, "need b_s > |b_v| for a normalisable wave function", beta);
    const double E = branch == Branch::Plus ? e.e_plus : e.e_minus;
    RadialWavefunction wf{e.k, s.n, beta, (E * p.a_v + p.M * p.a_s) / beta, E, s.D, 0.0};
    wf.log_scale = log_norm_paper(e.k, s.n, s.D, beta);
    return wf;
}

/// Result of the quadrature normalisation.
struct QuadratureNorm {
    /// Exact C (including n!) making the integral of R^2 r^{D-1} equal to one.
    double C_exact;
    /// log(C_exact / n!)
    double log_scale;
    /// Integral of R^2 r^{D-1} for the wave function as given.
    double norm_of_input;
    double r_max;
};

namespace detail {

/// log of the integrand R^2 r^{D-1} without the prefactor; log-concave in r.
inline double log_density(const RadialWavefunction& wf, double r)
{
    return 2.0 * wf.log_shape(r) + (wf.D - 1) * std::log(r);
}

inline double log_density_slope(const RadialWavefunction& wf, double r)
{
    const double p = 2.0 * (wf.k + wf.n) + wf.D - 1;
    return p / r - 2.0 * wf.beta * r - 2.0 * wf.alpha_tilde;
}

} // namespace detail

/// Adaptive Gauss-Kronrod integral of the unnormalised density on [0, r_max], split at its peak.
/// r_max grows until the log-concave tail bound g(r_max)/|g'/g| drops below 1e-14 of the integral.
inline QuadratureNorm norm_quadrature(const RadialWavefunction& wf, double r_max_hint = 0.0)
{
    using boost::math::quadrature::gauss_kronrod;
    if (!(wf.beta > 0.0) || !(wf.k > 0.0))
        throw Error(ErrorKind::InvalidProblem, "wave function needs beta > 0 and k > 0", wf.k);

    // density peak: p/r = 2 beta r + 2 alpha  =>  r* = (-alpha + sqrt(alpha^2 + 2 beta p)) / (2 beta)
    const double p = 2.0 * (wf.k + wf.n) + wf.D - 1;
    const double a = wf.alpha_tilde;
    const double r_peak = (-a + std::sqrt(a * a + 2.0 * wf.beta * p)) / (2.0 * wf.beta);
    const double shift = detail::log_density(wf, r_peak);
    auto density = [&](double r) { return r <= 0.0 ? 0.0 : std::exp(detail::log_density(wf, r) - shift); };

    constexpr double rel_tol = 1e-13;
    constexpr unsigned max_depth = 30;
    double err = 0.0;
    const double inner = gauss_kronrod<double, 31>::integrate(density, 0.0, r_peak, max_depth, rel_tol, &err);
    double total_err = err;

    const double width = 1.0 / std::sqrt(wf.beta);
    double r_max = std::max(r_max_hint, r_peak + 8.0 * width);
    double outer = 0.0;
    double lo = r_peak;
    for (int iter = 0;; ++iter) {
        if (iter > 60)
            throw Error(ErrorKind::QuadratureNonConvergence, "tail bound not reached", r_max);
        outer += gauss_kronrod<double, 31>::integrate(density, lo, r_max, max_depth, rel_tol, &err);
        total_err += err;
        const double slope = -detail::log_density_slope(wf, r_max);
        const double tail = slope > 0.0 ? density(r_max) / slope : std::numeric_limits<double>::infinity();
        if (tail < 1e-14 * (inner + outer))
            break;
        lo = r_max;
        r_max += 4.0 * width;
    }
    const double integral = inner + outer;
    if (!(integral > 0.0) || !std::isfinite(integral) || total_err > 1e-10 * integral)
        throw Error(ErrorKind::QuadratureNonConvergence, "quadrature error estimate too large", total_err);

    // integral of (C/n!)^2 shape^2 r^{D-1} = exp(2 log_scale + shift) * integral
    const double log_exact = -0.5 * (shift + std::log(integral));
    QuadratureNorm out{};
    out.log_scale = log_exact;
    out.C_exact = std::exp(log_exact + std::lgamma(wf.n + 1.0));
    out.norm_of_input = std::exp(2.0 * (wf.log_scale - log_exact));
    out.r_max = r_max;
    return out;
}

struct WavefunctionSample {
    double r;
    double R_paper;
    double R_exact;
};

inline std::vector<WavefunctionSample> sample_wavefunction(const RadialWavefunction& wf, double r_min, double r_max,
                                                           int samples)
{
    if (!(r_min >= 0.0) || !(r_max > r_min))
        throw Error(ErrorKind::InvalidProblem, "need 0 <= r_min < r_max", r_max);
    if (samples < 2)
        throw Error(ErrorKind::InvalidProblem, "need at least two samples", samples);
    const auto exact = wf.with_log_scale(norm_quadrature(wf).log_scale);
    std::vector<WavefunctionSample> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double r = i == samples - 1 ? r_max : r_min + (r_max - r_min) * i / (samples - 1);
        out.push_back({r, wf(r), exact(r)});
    }
    return out;
}

} // namespace kgcornell
