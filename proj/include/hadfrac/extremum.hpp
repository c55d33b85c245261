#pragma once

/**
 * @file extremum.hpp
 * @brief Extremum inequalities for the Hadamard derivatives, checked on
 *        sampled functions with an explicit discretisation budget.
 *
 * At a maximiser t0 of f over [1, T]:
 *
 *   Caputo form:   D*^a f(t0) >= (log t0)^(-a)/G(1-a) (f(t0) - f(1)) >= 0
 *   Hadamard form: D^a  f(t0) >= (log t0)^(-a)/G(1-a)  f(t0),
 *                  and D^a f(t0) >= 0 whenever f(t0) >= 0,
 *
 * with everything mirrored at a minimiser. The inequalities are exact;
 * any numerical slack must be attributable to the L1 truncation, so each
 * report carries tolerance_budget = C h^(2-a) ||g''||_inf (C = 10, h the
 * u-spacing, seminorm estimated from second differences) plus a roundoff
 * floor, and a pass means margin >= -tolerance_budget.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadfrac/frac_order.hpp"
#include "hadfrac/grid_function.hpp"
#include "hadfrac/log_grid.hpp"
#include "hadfrac/operators.hpp"
#include "hadfrac/sampled_family.hpp"
#include "hadfrac/special_functions.hpp"

namespace hadfrac {

enum class ExtremumKind { maximum, minimum };

/// First node attaining the discrete extremum (ties break to the smallest
/// index), followed by one quadratic refinement in u whose vertex is
/// snapped back to the nearest node.
inline std::size_t locate_extremum(const GridFunction& f, ExtremumKind kind) {
    if (f.singular_at_a()) {
        throw std::invalid_argument("locate_extremum: function must be bounded");
    }
    const double sign = (kind == ExtremumKind::maximum) ? 1.0 : -1.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        if (sign * f[i] > sign * f[best]) best = i;
    }
    if (best == 0 || best + 1 == f.size()) return best;

    const LogGrid& grid = f.grid();
    const double um = grid.u(best - 1), u0 = grid.u(best), up = grid.u(best + 1);
    const double fm = f[best - 1], f0 = f[best], fp = f[best + 1];
    const double dm = u0 - um, dp = up - u0;
    const double num = dm * dm * (f0 - fp) - dp * dp * (f0 - fm);
    const double den = dm * (f0 - fp) + dp * (f0 - fm);
    if (den == 0.0) return best;  // flat plateau, keep the first node
    const double vertex = u0 - 0.5 * num / den;
    // Snap to the nearest of the three stencil nodes.
    std::size_t snapped = best;
    double dist = std::abs(vertex - u0);
    if (std::abs(vertex - um) < dist) {
        snapped = best - 1;
        dist = std::abs(vertex - um);
    }
    if (std::abs(vertex - up) < dist) snapped = best + 1;
    return snapped;
}

/// Discretisation slack allowed when checking an exact inequality on a
/// sampled function.
inline double extremum_tolerance_budget(const GridFunction& f,
                                        FracOrder alpha) {
    const double h = f.grid().max_h();
    const double seminorm = f.second_derivative_estimate();
    return 10.0 * std::pow(h, 2.0 - alpha.value()) * seminorm +
           1e-12 * (1.0 + f.max_abs());
}

struct ExtremumReport {
    std::size_t node = 0;
    ExtremumKind kind = ExtremumKind::maximum;
    double t0 = 0.0;
    double lhs = 0.0;           // fractional derivative at t0
    double rhs = 0.0;           // weighted bound term
    double margin = 0.0;        // lhs-rhs for a max, rhs-lhs for a min
    double chain_margin = 0.0;  // second link of the chain: rhs vs 0
    double sign_margin = std::numeric_limits<double>::quiet_NaN();
    bool sign_case_applies = false;
    double tolerance_budget = 0.0;
    bool degenerate_at_a = false;
    bool skipped = false;
    bool pass = false;
};

/// Proposition check for the Caputo (Hadamard-type) derivative.
inline ExtremumReport check_caputo_extremum(const GridFunction& f,
                                            FracOrder alpha,
                                            ExtremumKind kind) {
    if (f.grid().intervals() < 16) {
        throw std::invalid_argument("check_caputo_extremum: need n >= 16");
    }
    ExtremumReport rep;
    rep.kind = kind;
    rep.node = locate_extremum(f, kind);
    rep.t0 = f.grid().node(rep.node);
    rep.tolerance_budget = extremum_tolerance_budget(f, alpha);

    if (rep.node == 0) {
        // Extremum at t0 = 1: D*^a f(1) := 0 and f(t0) - f(1) = 0, so the
        // whole chain degenerates to 0 >= 0.
        rep.degenerate_at_a = true;
        rep.pass = true;
        return rep;
    }

    const double u0 = f.grid().u(rep.node);
    const double w = std::pow(u0, -alpha.value()) /
                     gamma_fn(1.0 - alpha.value());
    rep.lhs = caputo_hadamard_at(f, alpha, rep.node);
    rep.rhs = w * (f[rep.node] - f[0]);
    if (kind == ExtremumKind::maximum) {
        rep.margin = rep.lhs - rep.rhs;
        rep.chain_margin = rep.rhs;
    } else {
        rep.margin = rep.rhs - rep.lhs;
        rep.chain_margin = -rep.rhs;
    }
    // The second link holds exactly: the discrete extremum makes
    // f(t0) - f(1) one-signed, and the weight is positive.
    rep.pass = rep.margin >= -rep.tolerance_budget && rep.chain_margin >= 0.0;
    return rep;
}

/// Proposition check for the Riemann-Hadamard derivative (split form),
/// including the sign corollary. Skipped when the extremum sits at t0 = 1,
/// where the bound's weight is singular.
inline ExtremumReport check_riemann_extremum(const GridFunction& f,
                                             FracOrder alpha,
                                             ExtremumKind kind) {
    if (f.grid().intervals() < 16) {
        throw std::invalid_argument("check_riemann_extremum: need n >= 16");
    }
    ExtremumReport rep;
    rep.kind = kind;
    rep.node = locate_extremum(f, kind);
    rep.t0 = f.grid().node(rep.node);
    rep.tolerance_budget = extremum_tolerance_budget(f, alpha);

    if (rep.node == 0) {
        // The bound's weight is singular at t0 = 1. On a plateau the
        // extremum is also attained at later nodes, so pick the first one
        // past 1; only a strict extremum at t0 = 1 is skipped.
        std::size_t alt = 0;
        for (std::size_t k = 1; k < f.size(); ++k) {
            if (f[k] == f[0]) {
                alt = k;
                break;
            }
        }
        if (alt == 0) {
            rep.skipped = true;
            return rep;
        }
        rep.node = alt;
        rep.t0 = f.grid().node(alt);
    }

    const double u0 = f.grid().u(rep.node);
    const double w = std::pow(u0, -alpha.value()) /
                     gamma_fn(1.0 - alpha.value());
    rep.lhs = riemann_hadamard_split_at(f, alpha, rep.node);
    rep.rhs = w * f[rep.node];
    if (kind == ExtremumKind::maximum) {
        rep.margin = rep.lhs - rep.rhs;
        rep.sign_case_applies = f[rep.node] >= 0.0;
        if (rep.sign_case_applies) rep.sign_margin = rep.lhs;
    } else {
        rep.margin = rep.rhs - rep.lhs;
        rep.sign_case_applies = f[rep.node] <= 0.0;
        if (rep.sign_case_applies) rep.sign_margin = -rep.lhs;
    }
    rep.pass = rep.margin >= -rep.tolerance_budget &&
               (!rep.sign_case_applies ||
                rep.sign_margin >= -rep.tolerance_budget);
    return rep;
}

struct CampaignWorst {
    double margin = std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    std::string check;
};

struct CampaignSummary {
    std::uint64_t checks = 0;
    std::uint64_t passes = 0;
    std::uint64_t failures = 0;
    std::uint64_t skips = 0;
    CampaignWorst worst;
    std::vector<std::uint64_t> failing_indices;
};

/// Run both proposition checks (max and min cases each) on `count`
/// functions per alpha. Failures are data, not errors; the summary is a
/// pure function of (family, count, alphas, grid).
inline CampaignSummary fuzz_campaign(const SampledFamily& family,
                                     std::uint64_t count,
                                     const std::vector<FracOrder>& alphas,
                                     const LogGrid& grid) {
    if (count < 1) {
        throw std::invalid_argument("fuzz_campaign: count must be >= 1");
    }
    CampaignSummary summary;
    auto record = [&](const ExtremumReport& rep, std::uint64_t index,
                      double alpha, const char* which) {
        if (rep.skipped) {
            ++summary.skips;
            return;
        }
        ++summary.checks;
        if (rep.pass) {
            ++summary.passes;
        } else {
            ++summary.failures;
            summary.failing_indices.push_back(index);
        }
        double margin = rep.degenerate_at_a ? 0.0 : rep.margin;
        if (rep.sign_case_applies) margin = std::min(margin, rep.sign_margin);
        if (margin < summary.worst.margin) {
            summary.worst = {margin, index, derive_seed(family.seed, index),
                             alpha, which};
        }
    };

    for (std::uint64_t i = 0; i < count; ++i) {
        const GridFunction f = family.sample(i).materialize(grid);
        for (const FracOrder& alpha : alphas) {
            record(check_caputo_extremum(f, alpha, ExtremumKind::maximum), i,
                   alpha.value(), "caputo-max");
            record(check_caputo_extremum(f, alpha, ExtremumKind::minimum), i,
                   alpha.value(), "caputo-min");
            record(check_riemann_extremum(f, alpha, ExtremumKind::maximum), i,
                   alpha.value(), "riemann-max");
            record(check_riemann_extremum(f, alpha, ExtremumKind::minimum), i,
                   alpha.value(), "riemann-min");
        }
    }
    return summary;
}

}  // namespace hadfrac
