#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod (7-15) quadrature for reference values.
 *
 * Used only to manufacture oracle values for integrands with no elementary
 * antiderivative (the trigonometric-in-log catalog entries) after the
 * singularity-removing substitution has been applied, so the integrands it
 * sees are smooth.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace hadfrac {

namespace detail {

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights on the odd-index nodes. QUADPACK dqk15.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
inline void gk15(F&& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double resk = 0.0;
    double resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = half * kGK15Nodes[i];
        const double fv = (i == 7) ? f(c) : f(c - x) + f(c + x);
        resk += kGK15Weights[i] * fv;
        if (i % 2 == 1) {
            resg += kG7Weights[i / 2] * fv;
        }
    }
    kronrod = resk * half;
    err = std::abs((resk - resg) * half);
}

}  // namespace detail

/// Integrate f over [a, b] to the requested absolute/relative tolerance by
/// adaptive bisection. Throws std::runtime_error if the tolerance cannot be
/// met within the recursion budget.
template <class F>
inline double integrate_adaptive(F&& f, double a, double b, double tol,
                                 int max_depth = 40) {
    struct Segment {
        double a, b, value, error;
        int depth;
    };

    double kron, err;
    detail::gk15(f, a, b, kron, err);
    if (err <= tol * std::max(1.0, std::abs(kron))) {
        return kron;
    }

    // Explicit stack; splits the worst segment first via simple recursion.
    double total = 0.0;
    double total_err = 0.0;
    std::size_t open = 0;
    Segment stack[256];
    stack[open++] = {a, b, kron, err, 0};
    while (open > 0) {
        Segment s = stack[--open];
        const double local_tol =
            tol * std::max(1.0, std::abs(kron)) * (s.b - s.a) / (b - a);
        if (s.error <= local_tol || s.depth >= max_depth) {
            if (s.depth >= max_depth && s.error > 1e3 * local_tol) {
                throw std::runtime_error(
                    "integrate_adaptive: tolerance not reached");
            }
            total += s.value;
            total_err += s.error;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        Segment left{s.a, m, 0, 0, s.depth + 1};
        Segment right{m, s.b, 0, 0, s.depth + 1};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        if (open + 2 > 256) {
            throw std::runtime_error("integrate_adaptive: stack overflow");
        }
        stack[open++] = left;
        stack[open++] = right;
    }
    (void)total_err;
    return total;
}

}  // namespace hadfrac
