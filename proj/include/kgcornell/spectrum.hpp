#pragma once

#include "kgcornell/errors.hpp"
#include "kgcornell/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace kgcornell {

/// Discriminant under the square root of the selected k formula.
inline double k_discriminant(const CouplingParams& p, int D, int l, KVariant variant)
{
    const double dm2 = static_cast<double>(D - 2);
    const double coulomb = p.a_v * p.a_v - p.a_s * p.a_s;
    const double ang = static_cast<double>(l) * static_cast<double>(l + D - 2);
    switch (variant) {
    case KVariant::Table1: return dm2 * dm2 - 4.0 * coulomb - 4.0 * ang;
    case KVariant::PrintedEq27: return dm2 * dm2 - 4.0 * (coulomb - ang);
    case KVariant::HalfQuadratic: return dm2 * dm2 + 4.0 * ang - 4.0 * coulomb;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Positive-branch exponent k of the near-origin behaviour r^k.
inline double k_exponent(const CouplingParams& p, int D, int l, KVariant variant)
{
    const double disc = k_discriminant(p, D, l, variant);
    if (!(disc >= 0.0))
        throw Error(ErrorKind::NegativeDiscriminant, "no real k for this (D, l, a_v, a_s)", disc);
    const double k = static_cast<double>(2 - D) + std::sqrt(disc);
    return variant == KVariant::HalfQuadratic ? 0.5 * k : k;
}

inline double k_exponent(const CouplingParams& p, const QuantumState& s)
{
    s.validate();
    return k_exponent(p, s.D, s.l, s.variant);
}

/// Residual of the indicial condition k(k-1) + k(D-1) - l(l+D-2) + (a_v^2 - a_s^2).
inline double indicial_residual(const CouplingParams& p, int D, int l, double k)
{
    return k * (k - 1.0) + k * (D - 1.0) - static_cast<double>(l) * (l + D - 2.0)
        + (p.a_v * p.a_v - p.a_s * p.a_s);
}

struct EnergyPair {
    double e_plus;
    double e_minus;
    double k;
    double discriminant;
};

/// Roots of x^2 + b x + c = 0 without cancellation; returns {larger, smaller, discriminant}.
inline std::tuple<double, double, double> stable_quadratic(double b, double c)
{
    const double disc = b * b - 4.0 * c;
    if (!(disc >= 0.0))
        throw Error(ErrorKind::NegativeDiscriminant, "energy quadratic has no real root", disc);
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0)
        return {0.0, 0.0, disc};
    const double r1 = q;
    const double r2 = c / q;
    return {std::max(r1, r2), std::min(r1, r2), disc};
}

/// Both energy roots for state s. The quadratic is
///   E^2 - (2 M b_v/b_s) E - (1 - b_v^2/b_s^2)[M^2 + 2(a_v b_v - a_s b_s + (k + n + D/2) beta)] - M^2 = 0.
inline EnergyPair energy_pair(const CouplingParams& p, const QuantumState& s)
{
    p.require_closed_form();
    const double k = k_exponent(p, s);
    const double ratio = p.b_v / p.b_s;
    const double shrink = (1.0 - ratio) * (1.0 + ratio);
    const double level = p.a_v * p.b_v - p.a_s * p.b_s + (k + s.n + 0.5 * s.D) * p.beta();
    const double b = -2.0 * p.M * ratio;
    const double c = -shrink * (p.M * p.M + 2.0 * level) - p.M * p.M;
    const auto [hi, lo, disc] = stable_quadratic(b, c);
    return {hi, lo, k, disc};
}

/// Positive branch recast as E_n / M = b_v/b_s + sqrt(A + B n).
struct LinearSpectrum {
    double A;
    double B;
    double e0;

    /// (E_n - E_0) / M, the Boltzmann exponent numerator.
    double excitation(double n) const { return std::sqrt(A + B * n) - std::sqrt(A); }
};

/// (A, B) from completing the square, without the A > 0 requirement. A + B n < 0 marks
/// levels with no real energy; e0 is NaN when A < 0.
inline LinearSpectrum linear_coefficients(const CouplingParams& p, int D, int l, KVariant variant)
{
    p.require_closed_form();
    if (!(p.M > 0.0))
        throw Error(ErrorKind::InvalidCouplings, "linear recast divides by M^2; need M > 0", p.M);
    const double k = k_exponent(p, QuantumState{0, l, D, variant});
    const double ratio = p.b_v / p.b_s;
    const double shrink = (1.0 - ratio) * (1.0 + ratio);
    const double m2 = p.M * p.M;
    const double A = 2.0 + (2.0 / m2) * shrink * (p.a_v * p.b_v - p.a_s * p.b_s + (k + 0.5 * D) * p.beta());
    const double B = (2.0 / m2) * shrink * p.beta();
    return {A, B, A >= 0.0 ? ratio + std::sqrt(A) : std::numeric_limits<double>::quiet_NaN()};
}

/// Positive-branch spectrum as E_n/M = b_v/b_s + sqrt(A + B n); requires A > 0 so that the
/// n = 0 level exists.
inline LinearSpectrum linear_form(const CouplingParams& p, int D, int l, KVariant variant)
{
    const auto spec = linear_coefficients(p, D, l, variant);
    if (!(spec.A > 0.0))
        throw Error(ErrorKind::NonPositiveOffset, "spectrum offset A must be positive", spec.A);
    if (!(spec.B > 0.0))
        throw Error(ErrorKind::InvalidCouplings, "spectrum slope B must be positive (need b_s > |b_v|)", spec.B);
    return spec;
}

struct TableRow {
    int D;
    int n;
    int l;
    KVariant variant;
    double k;
    double e_plus;
    double e_minus;
    /// "ok" or the ErrorKind name of the per-cell failure.
    std::string status;

    bool ok() const { return status == "ok"; }
};

/// Spectrum grid over n = 1..n_max, l = 0..n-1, D in dims; rows sorted by (n, l, D).
inline std::vector<TableRow> spectrum_table(const CouplingParams& p, std::span<const int> dims, int n_max,
                                            KVariant variant)
{
    p.require_closed_form();
    if (n_max < 1)
        throw Error(ErrorKind::InvalidState, "n_max must be >= 1", n_max);
    std::vector<TableRow> rows;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (int n = 1; n <= n_max; ++n) {
        for (int l = 0; l < n; ++l) {
            for (int D : dims) {
                TableRow row{D, n, l, variant, nan, nan, nan, "ok"};
                try {
                    const auto e = energy_pair(p, QuantumState{n, l, D, variant});
                    row.k = e.k;
                    row.e_plus = e.e_plus;
                    row.e_minus = e.e_minus;
                } catch (const Error& err) {
                    if (err.kind() == ErrorKind::InvalidCouplings)
                        throw;
                    row.status = std::string(to_string(err.kind()));
                }
                rows.push_back(std::move(row));
            }
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
        return std::tie(a.n, a.l, a.D) < std::tie(b.n, b.l, b.D);
    });
    return rows;
}

} // namespace kgcornell
