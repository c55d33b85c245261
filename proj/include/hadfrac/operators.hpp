#pragma once

/**
 * @file operators.hpp
 * @brief Discrete Hadamard fractional integral and derivatives.
 *
 * Everything is computed in u = log(t/a), where the Hadamard integral is
 * the Riemann-Liouville integral and the Hadamard-type derivative is the
 * Caputo derivative:
 *
 *   I^a f(t)  = (1/G(a))   int_0^u (u-v)^(a-1) g(v) dv
 *   D*^a f(t) = (1/G(1-a)) int_0^u (u-v)^(-a)  g'(v) dv
 *   D^a f(t)  = d/du I^(1-a) g(u) = f(a) u^(-a)/G(1-a) + D*^a f(t)
 *
 * with g(u) = f(a e^u). The integral uses product integration (exact kernel
 * moments against the piecewise-linear interpolant of g); the derivative
 * uses the L1 scheme (exact kernel integral against the interpolant's
 * slopes). Both are lower-triangular convolutions; sums are compensated.
 *
 * The value of D*^a at t_0 is defined as 0 (empty integral). The direct
 * derivative is undefined at t_0: outputs mark that node non-finite and
 * carry the singular exponent so downstream integration can handle the
 * first cell analytically.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hadfrac/detail/compensated.hpp"
#include "hadfrac/frac_order.hpp"
#include "hadfrac/grid_function.hpp"
#include "hadfrac/quadrature.hpp"
#include "hadfrac/special_functions.hpp"

namespace hadfrac {

enum class DerivMethod { split, direct };

namespace detail {

/// Coefficients c_j of (g_{j+1} - g_j), j = 0..k-1, in the L1 sum for the
/// Caputo derivative of order a at node k:
///   D*^a g(u_k) ~ sum_j c_j (g_{j+1} - g_j),
///   c_j = [(u_k - u_j)^(1-a) - (u_k - u_{j+1})^(1-a)] / (h_j G(2-a)).
/// c_j is the cell-j mean of the kernel (u_k - s)^(-a)/G(1-a): positive and
/// increasing toward the newest cell on any grid.
inline std::vector<double> caputo_l1_coefficients(const LogGrid& grid,
                                                  FracOrder alpha,
                                                  std::size_t k) {
    const double a = alpha.value();
    const double scale = 1.0 / gamma_fn(2.0 - a);
    std::vector<double> c(k);
    const double uk = grid.u(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double A = uk - grid.u(j);
        const double B = uk - grid.u(j + 1);
        c[j] = scale * pow_diff(A, B, 1.0 - a) / grid.h(j);
    }
    return c;
}

/// First-cell contribution to the raw product integral (without the final
/// 1/Gamma(alpha) factor) when the integrand is singular at u = 0 with
/// exponent p: the cell model is g(v) = g(u_1) (v / u_1)^p, exact for pure
/// log-powers.
inline double singular_first_cell(const LogGrid& grid, double alpha, double p,
                                  double g1, std::size_t k) {
    const double u1 = grid.u(1);
    const double uk = grid.u(k);
    if (k == 1) {
        // int_0^{u1} (u1-v)^(a-1) (v/u1)^p dv = u1^a B(a, p+1).
        return g1 * std::pow(u1, alpha) * gamma_fn(alpha) * gamma_fn(p + 1.0) /
               gamma_fn(alpha + p + 1.0);
    }
    // Substitute v = u1 w^(1/(p+1)) to remove the v^p weight; the remaining
    // integrand is smooth because uk - v >= uk - u1 > 0.
    const double value = integrate_adaptive(
        [&](double w) {
            const double v = u1 * std::pow(w, 1.0 / (p + 1.0));
            return std::pow(uk - v, alpha - 1.0);
        },
        0.0, 1.0, 1e-12);
    return g1 * (u1 / (p + 1.0)) * value;
}

}  // namespace detail

/// Hadamard fractional integral I^alpha f at node k (0 at k = 0).
inline double hadamard_integral_at(const GridFunction& f, FracOrder alpha,
                                   std::size_t k) {
    if (k == 0) return 0.0;
    const LogGrid& grid = f.grid();
    const double a = alpha.value();
    const double uk = grid.u(k);
    detail::CompensatedSum acc;
    std::size_t j0 = 0;
    if (f.singular_at_a()) {
        acc.add(detail::singular_first_cell(grid, a, f.singular_exponent(),
                                            f[1], k));
        j0 = 1;
    }
    for (std::size_t j = j0; j < k; ++j) {
        const double A = uk - grid.u(j);
        const double B = uk - grid.u(j + 1);
        const double h = grid.h(j);
        // Exact moments of the kernel over the cell:
        //   P0 = int (uk-v)^(a-1) dv,  P1 = int (uk-v)^(a-1)(uk-v) dv.
        const double P0 = detail::pow_diff(A, B, a) / a;
        const double P1 = detail::pow_diff(A, B, a + 1.0) / (a + 1.0);
        // Linear interpolant in terms of w = uk - v:
        //   g(v) = [g_j (w - B) + g_{j+1} (A - w)] / h.
        acc.add((f[j] * (P1 - B * P0) + f[j + 1] * (A * P0 - P1)) / h);
    }
    return acc.value() / gamma_fn(a);
}

inline GridFunction hadamard_integral(const GridFunction& f, FracOrder alpha) {
    const LogGrid& grid = f.grid();
    std::vector<double> out(grid.size());
    out[0] = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        out[k] = hadamard_integral_at(f, alpha, k);
    }
    return GridFunction(grid, std::move(out));
}

/// Hadamard-type (Caputo) derivative D*^alpha f at node k via the L1 scheme.
inline double caputo_hadamard_at(const GridFunction& f, FracOrder alpha,
                                 std::size_t k) {
    if (f.singular_at_a()) {
        throw std::invalid_argument(
            "caputo_hadamard: singular-at-a input is outside the W1 class");
    }
    if (k == 0) return 0.0;
    const LogGrid& grid = f.grid();
    const double a = alpha.value();
    const double scale = 1.0 / gamma_fn(2.0 - a);
    const double uk = grid.u(k);
    detail::CompensatedSum acc;
    for (std::size_t j = 0; j < k; ++j) {
        const double A = uk - grid.u(j);
        const double B = uk - grid.u(j + 1);
        const double slope = (f[j + 1] - f[j]) / grid.h(j);
        acc.add(slope * detail::pow_diff(A, B, 1.0 - a));
    }
    return scale * acc.value();
}

inline GridFunction caputo_hadamard_deriv(const GridFunction& f,
                                          FracOrder alpha) {
    if (f.grid().intervals() < 2) {
        throw std::invalid_argument("caputo_hadamard: need n >= 2");
    }
    const LogGrid& grid = f.grid();
    std::vector<double> out(grid.size());
    out[0] = 0.0;  // empty integral
    for (std::size_t k = 1; k < grid.size(); ++k) {
        out[k] = caputo_hadamard_at(f, alpha, k);
    }
    return GridFunction(grid, std::move(out));
}

/// Split-form Hadamard derivative at node k >= 1:
///   D^a f(t_k) = f(a) u_k^(-a)/G(1-a) + D*^a f(t_k).
inline double riemann_hadamard_split_at(const GridFunction& f, FracOrder alpha,
                                        std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument(
            "riemann_hadamard: the derivative is not defined at t_0");
    }
    const double a = alpha.value();
    const double w = std::pow(f.grid().u(k), -a) / gamma_fn(1.0 - a);
    return f[0] * w + caputo_hadamard_at(f, alpha, k);
}

inline GridFunction riemann_hadamard_deriv(const GridFunction& f,
                                           FracOrder alpha, DerivMethod method) {
    const LogGrid& grid = f.grid();
    if (grid.intervals() < 3) {
        throw std::invalid_argument("riemann_hadamard: need n >= 3");
    }
    const double a = alpha.value();
    const std::size_t n = grid.intervals();
    std::vector<double> out(grid.size());
    out[0] = std::numeric_limits<double>::quiet_NaN();

    if (method == DerivMethod::split) {
        if (f.singular_at_a()) {
            throw std::invalid_argument(
                "riemann_hadamard(split): input must be finite at t_0");
        }
        for (std::size_t k = 1; k <= n; ++k) {
            out[k] = riemann_hadamard_split_at(f, alpha, k);
        }
        if (f[0] == 0.0) {
            // No singular part; the limit at t_0 is 0 like the Caputo form.
            out[0] = 0.0;
            return GridFunction(grid, std::move(out));
        }
        return GridFunction(grid, std::move(out), -a);
    }

    // Direct form: phi = I^(1-alpha) f, then d/du by finite differences
    // (t d/dt = d/du, so no further scaling).
    const GridFunction phi = hadamard_integral(f, alpha.complement());
    std::size_t first_centered = 1;
    if (f.singular_at_a()) {
        // For singular f, phi jumps from phi(0) = 0 to a nonzero limit as
        // u -> 0+, so the stencil at node 1 must not touch node 0.
        const double d1 = grid.h(1);
        const double d2 = grid.h(2);
        out[1] = -phi[1] * (2.0 * d1 + d2) / (d1 * (d1 + d2)) +
                 phi[2] * (d1 + d2) / (d1 * d2) -
                 phi[3] * d1 / (d2 * (d1 + d2));
        first_centered = 2;
    }
    for (std::size_t k = first_centered; k < n; ++k) {
        const double hm = grid.h(k - 1);
        const double hp = grid.h(k);
        out[k] = -hp / (hm * (hm + hp)) * phi[k - 1] +
                 (hp - hm) / (hm * hp) * phi[k] +
                 hm / (hp * (hm + hp)) * phi[k + 1];
    }
    {
        // One-sided three-point formula at the right endpoint.
        const double h1 = grid.h(n - 2);
        const double h2 = grid.h(n - 1);
        out[n] = phi[n - 2] * h2 / (h1 * (h1 + h2)) -
                 phi[n - 1] * (h1 + h2) / (h1 * h2) +
                 phi[n] * (2.0 * h2 + h1) / (h2 * (h1 + h2));
    }
    return GridFunction(grid, std::move(out), -a);
}

/// Residual of the composition identity I^a (D^a f) - f, nodewise.
///
/// For bounded f the correction term of the analytic identity vanishes
/// (I^(1-a) f(a) = 0), so the result is pure discretisation error. Node 0
/// is excluded (the derivative is not defined there) and reported as 0.
inline GridFunction compose_check(const GridFunction& f, FracOrder alpha) {
    if (f.singular_at_a()) {
        throw std::invalid_argument("compose_check: input must be bounded");
    }
    const GridFunction d = riemann_hadamard_deriv(f, alpha, DerivMethod::split);
    const GridFunction r = hadamard_integral(d, alpha);
    std::vector<double> res(f.size());
    res[0] = 0.0;
    for (std::size_t k = 1; k < f.size(); ++k) {
        res[k] = r[k] - f[k];
    }
    return GridFunction(f.grid(), std::move(res));
}

}  // namespace hadfrac
