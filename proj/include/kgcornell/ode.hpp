#pragma once

#include "kgcornell/errors.hpp"
#include "kgcornell/params.hpp"
#include "kgcornell/roots.hpp"
#include "kgcornell/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace kgcornell {

/// Radial eigenproblem u'' + Q(r; E) u = 0 with u = r^{(D-1)/2} R and
///   Q = -(M^2 - E^2) - 2(a_v b_v - a_s b_s) + 2(E a_v + M a_s)/r + c2/r^2
///       - (b_s^2 - b_v^2) r^2 - 2(E b_v + M b_s) r,
///   c2 = a_v^2 - a_s^2 - l(l+D-2) - (D-1)(D-3)/4.
/// Integration runs on a uniform grid in x = ln r (step h) for w = u / sqrt(r), which obeys
/// w'' + (r^2 Q - 1/4) w = 0 and keeps the Numerov form.
struct OdeProblem {
    CouplingParams params;
    int D = 3;
    int l = 0;
    double r_min = 1e-4;
    double r_max = 0.0;
    double r_match = 0.0;
    double h = 0.0;
    double E_lo = 0.0;
    double E_hi = 0.0;
    int target_nodes = 0;
    double tol = 1e-10;

    double c2() const
    {
        return params.a_v * params.a_v - params.a_s * params.a_s - static_cast<double>(l) * (l + D - 2.0)
            - (D - 1.0) * (D - 3.0) / 4.0;
    }

    /// Q(r; E) in the original radial variable.
    double Q(double r, double E) const
    {
        const auto& p = params;
        return -p.eps2(E) - 2.0 * (p.a_v * p.b_v - p.a_s * p.b_s) + 2.0 * (E * p.a_v + p.M * p.a_s) / r
            + c2() / (r * r) - (p.b_s * p.b_s - p.b_v * p.b_v) * r * r - 2.0 * (E * p.b_v + p.M * p.b_s) * r;
    }

    void validate() const
    {
        if (!params.finite())
            throw Error(ErrorKind::InvalidCouplings, "non-finite coupling");
        QuantumState{0, l, D, KVariant::Table1}.validate_physical();
        if (!(r_min > 0.0 && r_min < r_match && r_match < r_max))
            throw Error(ErrorKind::InvalidProblem, "need 0 < r_min < r_match < r_max", r_match);
        if (!(h > 0.0))
            throw Error(ErrorKind::InvalidProblem, "step must be positive", h);
        if (!(E_lo < E_hi))
            throw Error(ErrorKind::InvalidProblem, "need E_lo < E_hi", E_lo);
        if (target_nodes < 0)
            throw Error(ErrorKind::InvalidProblem, "target node count must be >= 0", target_nodes);
        if (!(tol > 0.0))
            throw Error(ErrorKind::InvalidProblem, "tolerance must be positive", tol);
    }
};

inline constexpr int default_ode_steps = 200000;

/// Outer turning point of Q(.; E) on [r_min, r_max], or the midpoint when Q < 0 throughout.
inline double turning_point(const OdeProblem& p, double E, int samples = 4000)
{
    const double lx = std::log(p.r_min);
    const double ux = std::log(p.r_max);
    for (int i = samples; i >= 0; --i) {
        const double r = std::exp(lx + (ux - lx) * i / samples);
        if (p.Q(r, E) >= 0.0) {
            if (i == samples)
                break;
            const double r_out = std::exp(lx + (ux - lx) * (i + 1) / samples);
            return std::clamp(r_out, p.r_min * 1.01, p.r_max * 0.99);
        }
    }
    return 0.5 * (p.r_min + p.r_max);
}

/// Fills grid extent, step and matching radius with the default choices:
/// r_max = 12/sqrt(beta) for a confining oscillator term, otherwise a decay-length estimate
/// at the top of the bracket; h = ln(r_max/r_min)/steps; r_match = outer turning point at the
/// bracket centre.
inline OdeProblem make_ode_problem(const CouplingParams& params, int D, int l, int target_nodes, double E_lo,
                                   double E_hi, std::optional<double> r_max = std::nullopt,
                                   int steps = default_ode_steps, double tol = 1e-10)
{
    OdeProblem p;
    p.params = params;
    p.D = D;
    p.l = l;
    p.E_lo = E_lo;
    p.E_hi = E_hi;
    p.target_nodes = target_nodes;
    p.tol = tol;
    if (r_max) {
        p.r_max = *r_max;
    } else {
        const double beta2 = (params.b_s - params.b_v) * (params.b_s + params.b_v);
        const double linear = 2.0 * std::max(std::abs(E_lo * params.b_v + params.M * params.b_s),
                                             std::abs(E_hi * params.b_v + params.M * params.b_s));
        if (beta2 > 0.0) {
            p.r_max = 12.0 / std::sqrt(std::sqrt(beta2));
        } else if (linear > 0.0) {
            p.r_max = std::pow(60.0 / std::sqrt(linear), 2.0 / 3.0);
        } else {
            const double e = std::max(std::abs(E_lo), std::abs(E_hi));
            const double kappa2 = params.eps2(e);
            if (!(kappa2 > 0.0))
                throw Error(ErrorKind::InvalidProblem,
                            "Coulomb-only problem needs |E| < M across the bracket to be bound", e);
            p.r_max = 40.0 / std::sqrt(kappa2);
        }
    }
    if (!(p.r_max > p.r_min))
        throw Error(ErrorKind::InvalidProblem, "r_max must exceed r_min", p.r_max);
    p.h = std::log(p.r_max / p.r_min) / steps;
    p.r_match = turning_point(p, 0.5 * (E_lo + E_hi));
    p.validate();
    return p;
}

struct ShootResult {
    double mismatch;
    int nodes;
};

struct OdeEigenvalue {
    double E;
    int nodes;
    double mismatch_residual;
    double grid_h;
    /// |E(h) - E(h/2)|
    double halving_shift;
    bool converged;
};

/// Numerov shooting on the logarithmic grid of one OdeProblem. Holds the E-independent
/// parts of g(x) = r^2 Q - 1/4 = G0 + E G1 + E^2 G2.
class RadialShooter {
public:
    static constexpr double renorm_threshold = 1e150;

    explicit RadialShooter(const OdeProblem& p)
        : p_(p)
    {
        p.validate();
        const double quarter = 0.25 - p.c2();
        if (quarter < 0.0)
            throw Error(ErrorKind::OscillatorySeed, "complex indicial exponent at the origin", quarter);
        s0_ = 0.5 + std::sqrt(quarter);

        const std::size_t N = static_cast<std::size_t>(std::llround(std::log(p.r_max / p.r_min) / p.h));
        if (N < 8)
            throw Error(ErrorKind::InvalidProblem, "grid too coarse", static_cast<double>(N));
        const auto& c = p.params;
        const double x0 = std::log(p.r_min);
        r_.resize(N + 1);
        G0_.resize(N + 1);
        G1_.resize(N + 1);
        G2_.resize(N + 1);
        const double beta2 = (c.b_s - c.b_v) * (c.b_s + c.b_v);
        for (std::size_t i = 0; i <= N; ++i) {
            const double r = std::exp(x0 + p.h * static_cast<double>(i));
            const double r2 = r * r;
            r_[i] = r;
            G0_[i] = r2 * (-c.M * c.M - 2.0 * (c.a_v * c.b_v - c.a_s * c.b_s)) + 2.0 * c.M * c.a_s * r + p.c2()
                - beta2 * r2 * r2 - 2.0 * c.M * c.b_s * r2 * r - 0.25;
            G1_[i] = 2.0 * c.a_v * r - 2.0 * c.b_v * r2 * r;
            G2_[i] = r2;
        }
        const auto it = std::lower_bound(r_.begin(), r_.end(), p.r_match);
        match_ = std::clamp<std::size_t>(static_cast<std::size_t>(it - r_.begin()), 2, N - 2);
    }

    std::size_t size() const { return r_.size(); }
    std::size_t match_index() const { return match_; }
    std::span<const double> radii() const { return r_; }
    const OdeProblem& problem() const { return p_; }

    /// Outward solution w on [0, last]; returns sign changes on indices (0, count_upto].
    int outward(double E, std::size_t last, std::size_t count_upto, std::vector<double>& w, double seed = 1.0) const
    {
        w.assign(last + 1, 0.0);
        w[0] = seed;
        w[1] = seed * std::exp(p_.h * (s0_ - 0.5));
        return march(E, 1, last, +1, count_upto, w);
    }

    /// Inward solution on [first, N] seeded with the decaying asymptotic form.
    int inward(double E, std::size_t first, std::vector<double>& w, double seed = 1.0) const
    {
        const std::size_t N = r_.size() - 1;
        w.assign(N + 1, 0.0);
        w[N] = seed;
        w[N - 1] = seed * std::exp(log_decay(r_[N - 1], E) - log_decay(r_[N], E)) * std::sqrt(r_[N] / r_[N - 1]);
        return march(E, N - 1, first, -1, match_, w);
    }

    /// Log-derivative mismatch u_L'/u_L - u_R'/u_R at r_match and outward nodes on (r_min, r_match].
    /// The seeds only set the scale of each side and drop out of the mismatch.
    ShootResult shoot(double E, double left_seed = 1.0, double right_seed = 1.0) const
    {
        const std::size_t m = match_;
        const int nodes = outward(E, m + 1, m, wl_, left_seed);
        inward(E, m - 1, wr_, right_seed);
        // u'/u = (w'/w + 1/2)/r; the 1/2 cancels in the difference
        const double dl = (wl_[m + 1] - wl_[m - 1]) / (2.0 * p_.h * wl_[m]);
        const double dr = (wr_[m + 1] - wr_[m - 1]) / (2.0 * p_.h * wr_[m]);
        return {(dl - dr) / r_[m], nodes};
    }

    /// Sign changes of the outward solution over the whole grid (Sturm count of levels below E).
    int level_count(double E) const { return outward(E, r_.size() - 1, r_.size() - 1, wl_); }

    /// Matched solution u(r) on the whole grid, continuous at r_match.
    std::vector<double> eigenfunction(double E) const
    {
        const std::size_t m = match_;
        outward(E, m, m, wl_);
        inward(E, m, wr_);
        std::vector<double> u(r_.size());
        const double scale = wl_[m] / wr_[m];
        for (std::size_t i = 0; i < u.size(); ++i)
            u[i] = (i <= m ? wl_[i] : scale * wr_[i]) * std::sqrt(r_[i]);
        return u;
    }

    double log_decay(double r, double E) const
    {
        const auto& c = p_.params;
        const double beta2 = (c.b_s - c.b_v) * (c.b_s + c.b_v);
        if (beta2 > 0.0)
            return -0.5 * std::sqrt(beta2) * r * r;
        if (c.b_s == 0.0 && c.b_v == 0.0) {
            const double kappa2 = c.eps2(E);
            if (!(kappa2 > 0.0))
                throw Error(ErrorKind::InvalidProblem, "no decaying solution for E^2 >= M^2 without confinement", E);
            return -std::sqrt(kappa2) * r;
        }
        // local WKB decay
        const double q = -p_.Q(r, E);
        if (!(q > 0.0))
            throw Error(ErrorKind::InvalidProblem, "r_max is not in the classically forbidden region", r);
        return -std::sqrt(q) * r;
    }

private:
    double g(std::size_t i, double E) const { return G0_[i] + E * (G1_[i] + E * G2_[i]); }

    /// Numerov in summed form on y = (1 + h^2 g/12) w:
    ///   d_{i+1} = d_i - h^2 g_i y_i / f_i,  y_{i+1} = y_i + d_{i+1}.
    /// Starts from w[start] and w[start - dir]; counts sign changes on the outward side of `node_edge`
    /// (indices <= node_edge going outward, > node_edge going inward).
    int march(double E, std::size_t start, std::size_t stop, int dir, std::size_t node_edge,
              std::vector<double>& w) const
    {
        const double h2 = p_.h * p_.h;
        const double h12 = h2 / 12.0;
        const std::size_t prev = dir > 0 ? start - 1 : start + 1;
        double f_cur = 1.0 + h12 * g(start, E);
        double y = f_cur * w[start];
        double d = y - (1.0 + h12 * g(prev, E)) * w[prev];
        int nodes = 0;
        for (std::size_t i = start; i != stop;) {
            const std::size_t next = dir > 0 ? i + 1 : i - 1;
            d -= h2 * g(i, E) * w[i];
            y += d;
            const double f_next = 1.0 + h12 * g(next, E);
            w[next] = y / f_next;
            if (!std::isfinite(w[next]))
                throw Error(ErrorKind::NumericalOverflow, "Numerov integration diverged", r_[next]);
            const bool counted = dir > 0 ? next <= node_edge : next > node_edge;
            if (counted && crossed(w[i], w[next]))
                ++nodes;
            if (std::abs(w[next]) > renorm_threshold) {
                if (dir > 0)
                    rescale(w, 0, next);
                else
                    rescale(w, next, w.size() - 1);
                y /= renorm_threshold;
                d /= renorm_threshold;
            }
            i = next;
        }
        return nodes;
    }

    static bool crossed(double a, double b) { return (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0); }

    static void rescale(std::vector<double>& w, std::size_t from, std::size_t to)
    {
        for (std::size_t j = from; j <= to; ++j)
            w[j] /= renorm_threshold;
    }

    OdeProblem p_;
    double s0_ = 0.0;
    std::size_t match_ = 0;
    std::vector<double> r_, G0_, G1_, G2_;
    mutable std::vector<double> wl_, wr_;
};

inline ShootResult shoot_mismatch(const OdeProblem& problem, double E)
{
    return RadialShooter(problem).shoot(E);
}

namespace detail {

struct LevelOnGrid {
    double E;
    double residual;
    int nodes;
};

inline int count_sign_changes(std::span<const double> u)
{
    int n = 0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i)
        if ((u[i] < 0.0) != (u[i + 1] < 0.0) && u[i + 1] != 0.0 && u[i] != 0.0)
            ++n;
    return n;
}

inline LevelOnGrid find_level_on_grid(const OdeProblem& problem, double root_tol)
{
    const RadialShooter counter(problem);
    const int target = problem.target_nodes;
    const int c_lo = counter.level_count(problem.E_lo);
    const int c_hi = counter.level_count(problem.E_hi);
    if (!(c_lo <= target && target < c_hi))
        throw Error(ErrorKind::NoSignChange, "bracket does not contain the level with the requested node count",
                    problem.E_lo);

    // Sturm bisection isolates the level; the mismatch root then pins it down.
    const double scale = std::max({1.0, std::abs(problem.E_lo), std::abs(problem.E_hi)});
    auto above = [&](double E) { return counter.level_count(E) > target; };
    auto [a, b] = bisect_predicate(above, problem.E_lo, problem.E_hi, 1e-7 * scale);

    OdeProblem local = problem;
    local.r_match = turning_point(problem, 0.5 * (a + b));
    const RadialShooter shooter(local);
    auto mismatch = [&](double E) { return shooter.shoot(E).mismatch; };

    std::optional<BracketedRoot<double>> root;
    for (int widen = 0; widen < 8 && !root; ++widen) {
        root = bracketed_root(mismatch, a, b, root_tol);
        if (!root) {
            const double w = b - a;
            a = std::max(problem.E_lo, a - w);
            b = std::min(problem.E_hi, b + w);
        }
    }
    if (!root)
        throw Error(ErrorKind::NoSignChange, "mismatch does not change sign around the isolated level", a);
    const auto u = shooter.eigenfunction(root->x);
    return {root->x, root->fx, count_sign_changes(u)};
}

} // namespace detail

/// Level with `target_nodes` nodes inside [E_lo, E_hi], with a step-halving certificate.
inline OdeEigenvalue find_level(const OdeProblem& problem)
{
    problem.validate();
    const double root_tol = problem.tol / 16.0;
    const auto coarse = detail::find_level_on_grid(problem, root_tol);
    OdeProblem fine = problem;
    fine.h = problem.h / 2.0;
    const auto refined = detail::find_level_on_grid(fine, root_tol);
    const double shift = std::abs(coarse.E - refined.E);
    return {coarse.E, coarse.nodes, coarse.residual, problem.h, shift,
            shift < problem.tol && coarse.nodes == problem.target_nodes};
}

/// Upper bracket end found by doubling until the Sturm count exceeds target_nodes.
inline double auto_upper_bracket(const CouplingParams& params, int D, int l, int target_nodes, double E_lo,
                                 std::optional<double> r_max = std::nullopt)
{
    if (params.b_s == 0.0 && params.b_v == 0.0) {
        // Coulomb-only levels accumulate below M
        const double E_hi = params.M * (1.0 - 1e-6);
        const auto p = make_ode_problem(params, D, l, target_nodes, E_lo, E_hi, r_max, 20000);
        if (RadialShooter(p).level_count(E_hi) > target_nodes)
            return E_hi;
        throw Error(ErrorKind::NoSignChange, "level lies too close to the continuum threshold", E_hi);
    }
    double E_hi = std::max({2.0 * std::abs(E_lo), params.M, std::sqrt(std::abs(params.b_s)), 1.0});
    for (int i = 0; i < 40; ++i, E_hi *= 2.0) {
        const auto p = make_ode_problem(params, D, l, target_nodes, E_lo, E_hi, r_max, 20000);
        if (RadialShooter(p).level_count(E_hi) > target_nodes)
            return E_hi;
    }
    throw Error(ErrorKind::NoSignChange, "could not bracket the requested level", E_hi);
}

/// Level with `nodes` nodes; without an explicit bracket the search runs over [0, E_hi] with
/// E_hi from auto_upper_bracket.
inline OdeEigenvalue solve_level(const CouplingParams& params, int D, int l, int nodes,
                                 std::optional<std::pair<double, double>> bracket = {},
                                 std::optional<double> r_max = std::nullopt)
{
    const double lo = bracket ? bracket->first : 0.0;
    const double hi = bracket ? bracket->second : auto_upper_bracket(params, D, l, nodes, lo, r_max);
    return find_level(make_ode_problem(params, D, l, nodes, lo, hi, r_max));
}

struct ComparisonRow {
    int nodes;
    OdeEigenvalue level;
    double E_closed;
    double relative_gap;
};

/// Numeric levels against the closed-form positive root with n = nodes. The gap is a
/// diagnostic; the closed form is not expected to match for generic Cornell couplings.
inline std::vector<ComparisonRow> compare_with_closed_form(const CouplingParams& params, int D, int l,
                                                           std::span<const int> node_list, KVariant variant,
                                                           std::optional<std::pair<double, double>> bracket = {},
                                                           std::optional<double> r_max = std::nullopt)
{
    std::vector<ComparisonRow> rows;
    for (int nodes : node_list) {
        const double closed = energy_pair(params, QuantumState{nodes, l, D, variant}).e_plus;
        const auto level = solve_level(params, D, l, nodes, bracket, r_max);
        rows.push_back({nodes, level, closed, std::abs(level.E - closed) / std::abs(closed)});
    }
    return rows;
}

} // namespace kgcornell
