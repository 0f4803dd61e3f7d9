#pragma once

#include "kgcornell/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace kgcornell {

/// Cornell couplings V(r) = -a_v/r + b_v r, S(r) = -a_s/r + b_s r and the rest mass.
/// Natural units: a_* dimensionless, b_* in mass^2.
struct CouplingParams {
    double a_v = 0.2;
    double a_s = 6.0;
    double b_v = 0.002;
    double b_s = 2.0;
    double M = 1.0;

    /// Oscillator scale sqrt(b_s^2 - b_v^2); only meaningful when b_s >= |b_v|.
    double beta() const { return std::sqrt((b_s - b_v) * (b_s + b_v)); }

    /// epsilon^2 = M^2 - E^2.
    double eps2(double E) const { return (M - E) * (M + E); }

    bool finite() const
    {
        return std::isfinite(a_v) && std::isfinite(a_s) && std::isfinite(b_v) && std::isfinite(b_s)
            && std::isfinite(M);
    }

    /// Throws unless the couplings admit the closed-form spectrum (real beta, b_s > 0).
    void require_closed_form() const
    {
        if (!finite())
            throw Error(ErrorKind::InvalidCouplings, "non-finite coupling");
        if (M < 0.0)
            throw Error(ErrorKind::InvalidCouplings, "mass must be non-negative", M);
        if (!(b_s > 0.0) || b_s < std::abs(b_v))
            throw Error(ErrorKind::InvalidCouplings, "need b_s > 0 and b_s >= |b_v|", b_s);
    }

    /// Parameter set used for the published spectrum table.
    static CouplingParams table1() { return {}; }
};

/// Selector for the near-origin exponent k. The three published/derived forms disagree:
/// Table1 reproduces the tabulated energies, PrintedEq27 is the printed closed form,
/// HalfQuadratic is the exact positive root of the indicial condition.
enum class KVariant { Table1, PrintedEq27, HalfQuadratic };

constexpr std::string_view to_string(KVariant v) noexcept
{
    switch (v) {
    case KVariant::Table1: return "table1";
    case KVariant::PrintedEq27: return "eq27";
    case KVariant::HalfQuadratic: return "half";
    }
    return "table1";
}

inline std::optional<KVariant> parse_variant(std::string_view s)
{
    if (s == "table1")
        return KVariant::Table1;
    if (s == "eq27")
        return KVariant::PrintedEq27;
    if (s == "half")
        return KVariant::HalfQuadratic;
    return std::nullopt;
}

struct QuantumState {
    int n = 0;
    int l = 0;
    int D = 3;
    KVariant variant = KVariant::Table1;

    /// Hyperangular eigenvalue l(l+D-2).
    double angular() const { return static_cast<double>(l) * static_cast<double>(l + D - 2); }

    /// Range checks only. The energy formulas are evaluated formally for any l at D = 1
    /// (the published table does so); see validate_physical() for the strict form.
    void validate() const
    {
        if (n < 0)
            throw Error(ErrorKind::InvalidState, "n must be >= 0", n);
        if (l < 0)
            throw Error(ErrorKind::InvalidState, "l must be >= 0", l);
        if (D < 1)
            throw Error(ErrorKind::InvalidState, "D must be >= 1", D);
    }

    /// Additionally rejects l > 0 in one dimension, where there is no angular motion.
    void validate_physical() const
    {
        validate();
        if (D == 1 && l != 0)
            throw Error(ErrorKind::InvalidState, "D = 1 requires l = 0", l);
    }
};

} // namespace kgcornell
