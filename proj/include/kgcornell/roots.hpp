#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <utility>

namespace kgcornell {

template <std::floating_point Real>
struct BracketedRoot {
    Real x;
    Real fx;
    Real lo;
    Real hi;
    int iterations;
};

/// Safeguarded secant/bisection on [lo, hi] with f(lo) f(hi) <= 0.
/// Odd iterations try a secant step (kept only if strictly inside the bracket), even
/// iterations bisect, so the bracket at least halves every two iterations.
template <std::floating_point Real, std::invocable<Real> F>
std::optional<BracketedRoot<Real>> bracketed_root(F&& f, Real lo, Real hi, Real x_tol, int max_iter = 200)
{
    Real flo = f(lo);
    Real fhi = f(hi);
    if (flo == Real(0))
        return BracketedRoot<Real>{lo, flo, lo, lo, 0};
    if (fhi == Real(0))
        return BracketedRoot<Real>{hi, fhi, hi, hi, 0};
    if ((flo < Real(0)) == (fhi < Real(0)))
        return std::nullopt;

    for (int it = 1; it <= max_iter; ++it) {
        Real x = lo + (hi - lo) / 2;
        if (it % 2 == 1) {
            const Real secant = hi - fhi * (hi - lo) / (fhi - flo);
            if (std::isfinite(secant) && secant > lo && secant < hi)
                x = secant;
        }
        const Real fx = f(x);
        if (fx == Real(0))
            return BracketedRoot<Real>{x, fx, x, x, it};
        if ((fx < Real(0)) == (flo < Real(0))) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= x_tol) {
            const bool pick_lo = std::abs(flo) < std::abs(fhi);
            return BracketedRoot<Real>{pick_lo ? lo : hi, pick_lo ? flo : fhi, lo, hi, it};
        }
    }
    return BracketedRoot<Real>{lo + (hi - lo) / 2, f(lo + (hi - lo) / 2), lo, hi, max_iter};
}

/// Smallest x in (lo, hi] where a monotone predicate flips from false to true, to width x_tol.
template <std::floating_point Real, std::predicate<Real> P>
std::pair<Real, Real> bisect_predicate(P&& pred, Real lo, Real hi, Real x_tol, int max_iter = 200)
{
    for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
        const Real mid = lo + (hi - lo) / 2;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

} // namespace kgcornell
