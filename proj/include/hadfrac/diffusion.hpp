#pragma once

/**
 * @file diffusion.hpp
 * @brief Implicit solver for the Caputo-Hadamard time-fractional diffusion
 *        equation on an interval or rectangle, with the maximum-principle
 *        and stability checks of the theory it discretises.
 *
 * Equation:  D*^a_t u = nu Lap u + F(x, t[, u])  on  G x (1, T],
 *            u(x, 1) = phi(x),  u|dG = psi(x, t).
 *
 * The time derivative uses the L1 weights on a LogGrid (uniform in
 * u = log t by default), fully implicit in the newest layer:
 *
 *   c_k (u^k - u^{k-1}) + H_k = nu Lap u^k + F^k,
 *
 * where H_k is the L1 history of layers 0..k-1, accumulated with
 * compensated summation. The spatial operator is the standard 3-point /
 * 5-point Laplacian; 1D layers solve by tridiagonal elimination, 2D layers
 * by red-black Gauss-Seidel to relative residual 1e-10. Nonlinear sources
 * run a damped Picard iteration per step (damping 0.8 on stall).
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hadfrac/detail/compensated.hpp"
#include "hadfrac/frac_order.hpp"
#include "hadfrac/linear_solvers.hpp"
#include "hadfrac/log_grid.hpp"
#include "hadfrac/problem_common.hpp"
#include "hadfrac/special_functions.hpp"

namespace hadfrac {

/// Source term F(x, y, t, u); y is ignored on intervals, u is ignored
/// unless depends_on_u.
struct SourceEntry {
    std::string name;
    std::function<double(double, double, double, double)> fn;
    bool depends_on_u = false;
    Monotonicity monotonicity = Monotonicity::none;
    DataSign sign = DataSign::unknown;
};

struct InitialEntry {
    std::string name;
    std::function<double(double, double)> fn;
};

struct BoundaryEntry {
    std::string name;
    std::function<double(double, double, double)> fn;
};

struct SpaceInterval {
    double length = 1.0;
    std::size_t nx = 32;
};

struct SpaceRectangle {
    double lx = 1.0, ly = 1.0;
    std::size_t nx = 16, ny = 16;
};

using SpaceDomain = std::variant<SpaceInterval, SpaceRectangle>;

struct DiffusionProblem {
    FracOrder alpha;
    double nu = 1.0;
    SpaceDomain space;
    LogGrid time;
    SourceEntry source;
    InitialEntry initial;
    BoundaryEntry boundary;

    /// Initial and boundary data must agree at the t = 1 corners; the
    /// continuous framework assumes continuous data, so mismatches are a
    /// hard error rather than something to smooth over.
    void validate() const {
        if (!(nu > 0.0)) {
            throw std::invalid_argument("DiffusionProblem: nu must be > 0");
        }
        const double t1 = time.a();
        auto check = [&](double x, double y) {
            const double diff =
                std::abs(initial.fn(x, y) - boundary.fn(x, y, t1));
            if (diff > 1e-12) {
                std::ostringstream os;
                os << "DiffusionProblem: initial/boundary data incompatible "
                      "at t=1 (|phi - psi| = "
                   << diff << " at x = " << x << ", y = " << y << ")";
                throw IncompatibleDataError(os.str());
            }
        };
        if (const auto* iv = std::get_if<SpaceInterval>(&space)) {
            check(0.0, 0.0);
            check(iv->length, 0.0);
        } else {
            const auto& r = std::get<SpaceRectangle>(space);
            for (std::size_t i = 0; i <= r.nx; ++i) {
                const double x = r.lx * static_cast<double>(i) /
                                 static_cast<double>(r.nx);
                check(x, 0.0);
                check(x, r.ly);
            }
            for (std::size_t j = 0; j <= r.ny; ++j) {
                const double y = r.ly * static_cast<double>(j) /
                                 static_cast<double>(r.ny);
                check(0.0, y);
                check(r.lx, y);
            }
        }
    }
};

/// Solution samples on the tensor space-time grid; boundary nodes carry psi
/// exactly and the t = 1 layer carries phi exactly.
class SpaceTimeField {
public:
    SpaceTimeField(std::vector<double> xs, std::vector<double> ys,
                   LogGrid time, std::vector<std::vector<double>> layers)
        : xs_(std::move(xs)),
          ys_(std::move(ys)),
          time_(std::move(time)),
          layers_(std::move(layers)) {}

    bool two_dimensional() const { return !ys_.empty(); }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    const LogGrid& time() const { return time_; }
    std::size_t layer_count() const { return layers_.size(); }
    const std::vector<double>& layer(std::size_t k) const { return layers_[k]; }

    std::size_t space_size() const {
        return two_dimensional() ? xs_.size() * ys_.size() : xs_.size();
    }
    std::size_t index(std::size_t i, std::size_t j = 0) const {
        return two_dimensional() ? i + xs_.size() * j : i;
    }
    double at(std::size_t k, std::size_t i, std::size_t j = 0) const {
        return layers_[k][index(i, j)];
    }

    bool is_boundary(std::size_t i, std::size_t j = 0) const {
        if (two_dimensional()) {
            return i == 0 || i + 1 == xs_.size() || j == 0 ||
                   j + 1 == ys_.size();
        }
        return i == 0 || i + 1 == xs_.size();
    }

    struct Extremum {
        double value;
        std::size_t k, i, j;
    };

    Extremum global_min() const { return scan(true, false); }
    Extremum global_max() const { return scan(false, false); }
    /// Extremum over the parabolic boundary (t = 1 layer plus dG for all t).
    Extremum parabolic_min() const { return scan(true, true); }
    Extremum parabolic_max() const { return scan(false, true); }

    bool identical_to(const SpaceTimeField& other) const {
        return xs_ == other.xs_ && ys_ == other.ys_ && layers_ == other.layers_;
    }

    double max_abs_difference(const SpaceTimeField& other) const {
        double worst = 0.0;
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            for (std::size_t s = 0; s < layers_[k].size(); ++s) {
                worst = std::max(worst,
                                 std::abs(layers_[k][s] - other.layers_[k][s]));
            }
        }
        return worst;
    }

    /// Crude sup |second difference| estimate used by tolerance budgets:
    /// max over directions of the divided second differences of the field.
    double seminorm_estimate() const {
        double m = 0.0;
        const std::size_t mx = xs_.size();
        const std::size_t my = two_dimensional() ? ys_.size() : 1;
        // Time direction.
        for (std::size_t k = 1; k + 1 < layers_.size(); ++k) {
            const double hm = time_.h(k - 1), hp = time_.h(k);
            for (std::size_t s = 0; s < layers_[k].size(); ++s) {
                const double dd = 2.0 *
                                  ((layers_[k + 1][s] - layers_[k][s]) / hp -
                                   (layers_[k][s] - layers_[k - 1][s]) / hm) /
                                  (hm + hp);
                m = std::max(m, std::abs(dd));
            }
        }
        // Space directions.
        const double hx = mx > 1 ? xs_[1] - xs_[0] : 1.0;
        for (const auto& layer : layers_) {
            for (std::size_t j = 0; j < my; ++j) {
                for (std::size_t i = 1; i + 1 < mx; ++i) {
                    const double dd = (layer[index(i + 1, j)] -
                                       2.0 * layer[index(i, j)] +
                                       layer[index(i - 1, j)]) /
                                      (hx * hx);
                    m = std::max(m, std::abs(dd));
                }
            }
            if (two_dimensional()) {
                const double hy = ys_[1] - ys_[0];
                for (std::size_t i = 0; i < mx; ++i) {
                    for (std::size_t j = 1; j + 1 < my; ++j) {
                        const double dd = (layer[index(i, j + 1)] -
                                           2.0 * layer[index(i, j)] +
                                           layer[index(i, j - 1)]) /
                                          (hy * hy);
                        m = std::max(m, std::abs(dd));
                    }
                }
            }
        }
        return m;
    }

private:
    Extremum scan(bool want_min, bool parabolic_only) const {
        Extremum best{want_min ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity(),
                      0, 0, 0};
        const std::size_t mx = xs_.size();
        const std::size_t my = two_dimensional() ? ys_.size() : 1;
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            for (std::size_t j = 0; j < my; ++j) {
                for (std::size_t i = 0; i < mx; ++i) {
                    if (parabolic_only && k > 0 && !is_boundary(i, j)) {
                        continue;
                    }
                    const double v = layers_[k][index(i, j)];
                    const bool better =
                        want_min ? v < best.value : v > best.value;
                    if (better) best = {v, k, i, j};
                }
            }
        }
        return best;
    }

    std::vector<double> xs_;
    std::vector<double> ys_;
    LogGrid time_;
    std::vector<std::vector<double>> layers_;
};

namespace detail {

struct ChSpace {
    std::vector<double> xs;
    std::vector<double> ys;  // empty in 1D
    double hx = 0.0, hy = 0.0;

    static ChSpace build(const SpaceDomain& domain) {
        ChSpace s;
        if (const auto* iv = std::get_if<SpaceInterval>(&domain)) {
            if (iv->nx < 2) {
                throw std::invalid_argument("interval needs nx >= 2");
            }
            s.xs.resize(iv->nx + 1);
            s.hx = iv->length / static_cast<double>(iv->nx);
            for (std::size_t i = 0; i <= iv->nx; ++i) {
                s.xs[i] = s.hx * static_cast<double>(i);
            }
        } else {
            const auto& r = std::get<SpaceRectangle>(domain);
            if (r.nx < 2 || r.ny < 2) {
                throw std::invalid_argument("rectangle needs nx, ny >= 2");
            }
            s.xs.resize(r.nx + 1);
            s.ys.resize(r.ny + 1);
            s.hx = r.lx / static_cast<double>(r.nx);
            s.hy = r.ly / static_cast<double>(r.ny);
            for (std::size_t i = 0; i <= r.nx; ++i) {
                s.xs[i] = s.hx * static_cast<double>(i);
            }
            for (std::size_t j = 0; j <= r.ny; ++j) {
                s.ys[j] = s.hy * static_cast<double>(j);
            }
        }
        return s;
    }
};

/// L1 coefficient of (u^{j+1} - u^j) in D*^a at time node k.
inline double l1_coeff(const LogGrid& time, double alpha, std::size_t k,
                       std::size_t j) {
    const double A = time.u(k) - time.u(j);
    const double B = time.u(k) - time.u(j + 1);
    return pow_diff(A, B, 1.0 - alpha) / (time.h(j) * gamma_fn(2.0 - alpha));
}

}  // namespace detail

namespace detail {

class ChStepper {
public:
    ChStepper(const DiffusionProblem& p)
        : p_(p), space_(ChSpace::build(p.space)), alpha_(p.alpha.value()) {}

    SpaceTimeField run(const PicardOptions* picard) {
        p_.validate();
        const LogGrid& time = p_.time;
        const std::size_t nt = time.intervals();
        const std::size_t ns = space_size();

        std::vector<std::vector<double>> layers;
        layers.reserve(nt + 1);
        layers.push_back(sample_initial());

        for (std::size_t k = 1; k <= nt; ++k) {
            const double tk = time.node(k);
            const double c_new = l1_coeff(time, alpha_, k, k - 1);

            // L1 history over layers 0..k-2, compensated per node.
            std::vector<double> history(ns, 0.0);
            {
                std::vector<CompensatedSum> acc(ns);
                for (std::size_t j = 0; j + 1 < k; ++j) {
                    const double c = l1_coeff(time, alpha_, k, j);
                    for (std::size_t s = 0; s < ns; ++s) {
                        acc[s].add(c * (layers[j + 1][s] - layers[j][s]));
                    }
                }
                for (std::size_t s = 0; s < ns; ++s) {
                    history[s] = acc[s].value();
                }
            }

            std::vector<double> base_rhs(ns);
            for (std::size_t s = 0; s < ns; ++s) {
                base_rhs[s] = c_new * layers[k - 1][s] - history[s];
            }

            std::vector<double> layer;
            if (!p_.source.depends_on_u) {
                layer = implicit_solve(k, c_new, base_rhs, tk,
                                       layers[k - 1], nullptr);
            } else {
                layer = picard_step(k, c_new, base_rhs, tk, layers[k - 1],
                                    picard ? *picard : PicardOptions{});
            }
            layers.push_back(std::move(layer));
        }
        return SpaceTimeField(space_.xs, space_.ys, time, std::move(layers));
    }

private:
    std::size_t space_size() const {
        return space_.ys.empty() ? space_.xs.size()
                                 : space_.xs.size() * space_.ys.size();
    }
    std::size_t index(std::size_t i, std::size_t j) const {
        return space_.ys.empty() ? i : i + space_.xs.size() * j;
    }

    std::vector<double> sample_initial() const {
        std::vector<double> v(space_size());
        if (space_.ys.empty()) {
            for (std::size_t i = 0; i < space_.xs.size(); ++i) {
                v[i] = p_.initial.fn(space_.xs[i], 0.0);
            }
        } else {
            for (std::size_t j = 0; j < space_.ys.size(); ++j) {
                for (std::size_t i = 0; i < space_.xs.size(); ++i) {
                    v[index(i, j)] = p_.initial.fn(space_.xs[i], space_.ys[j]);
                }
            }
        }
        return v;
    }

    /// Solve (c I - nu Lap) u = rhs_base + F(., tk, u_source) with Dirichlet
    /// data psi(., tk). u_source supplies the frozen iterate for nonlinear
    /// sources (nullptr means the source takes u = 0).
    std::vector<double> implicit_solve(std::size_t k, double c_new,
                                       const std::vector<double>& base_rhs,
                                       double tk,
                                       const std::vector<double>& prev,
                                       const std::vector<double>* u_source) {
        const double nu = p_.nu;
        std::vector<double> out(space_size());
        if (space_.ys.empty()) {
            const std::size_t nx = space_.xs.size() - 1;
            const double lam = 1.0 / (space_.hx * space_.hx);
            const double psi0 = p_.boundary.fn(space_.xs[0], 0.0, tk);
            const double psiL = p_.boundary.fn(space_.xs[nx], 0.0, tk);
            std::vector<double> sub(nx - 2, -nu * lam);
            std::vector<double> super(nx - 2, -nu * lam);
            std::vector<double> diag(nx - 1, c_new + 2.0 * nu * lam);
            std::vector<double> rhs(nx - 1);
            for (std::size_t i = 1; i < nx; ++i) {
                const double us = u_source ? (*u_source)[i] : 0.0;
                rhs[i - 1] = base_rhs[i] +
                             p_.source.fn(space_.xs[i], 0.0, tk, us);
            }
            rhs.front() += nu * lam * psi0;
            rhs.back() += nu * lam * psiL;
            const auto sol = solve_tridiagonal(std::move(sub), std::move(diag),
                                               std::move(super), std::move(rhs));
            out[0] = psi0;
            out[nx] = psiL;
            for (std::size_t i = 1; i < nx; ++i) out[i] = sol[i - 1];
            return out;
        }

        const std::size_t nx = space_.xs.size() - 1;
        const std::size_t ny = space_.ys.size() - 1;
        const double lx = 1.0 / (space_.hx * space_.hx);
        const double ly = 1.0 / (space_.hy * space_.hy);
        const std::size_t mx = nx - 1, my = ny - 1;
        std::vector<double> rhs(mx * my), guess(mx * my);
        auto bnd = [&](std::size_t i, std::size_t j) {
            return p_.boundary.fn(space_.xs[i], space_.ys[j], tk);
        };
        for (std::size_t j = 1; j < ny; ++j) {
            for (std::size_t i = 1; i < nx; ++i) {
                const std::size_t s = index(i, j);
                const std::size_t q = (i - 1) + mx * (j - 1);
                const double us = u_source ? (*u_source)[s] : 0.0;
                double r = base_rhs[s] +
                           p_.source.fn(space_.xs[i], space_.ys[j], tk, us);
                if (i == 1) r += p_.nu * lx * bnd(0, j);
                if (i == nx - 1) r += p_.nu * lx * bnd(nx, j);
                if (j == 1) r += p_.nu * ly * bnd(i, 0);
                if (j == ny - 1) r += p_.nu * ly * bnd(i, ny);
                rhs[q] = r;
                guess[q] = prev[s];
            }
        }
        const auto it = red_black_gauss_seidel_2d(
            mx, my, c_new + 2.0 * nu * lx + 2.0 * nu * ly, nu * lx, nu * ly,
            rhs, guess, 1e-10, 10000);
        if (!it.converged) {
            std::ostringstream os;
            os << "diffusion step " << k
               << ": Gauss-Seidel stalled at relative residual "
               << it.residual << " after " << it.iterations << " sweeps";
            throw SolveError(os.str());
        }
        for (std::size_t j = 0; j <= ny; ++j) {
            for (std::size_t i = 0; i <= nx; ++i) {
                if (i == 0 || i == nx || j == 0 || j == ny) {
                    out[index(i, j)] = bnd(i, j);
                } else {
                    out[index(i, j)] = guess[(i - 1) + mx * (j - 1)];
                }
            }
        }
        return out;
    }

    std::vector<double> picard_step(std::size_t k, double c_new,
                                    const std::vector<double>& base_rhs,
                                    double tk,
                                    const std::vector<double>& prev,
                                    const PicardOptions& opts) {
        std::vector<double> iterate =
            opts.initial_guess
                ? std::vector<double>(space_size(), *opts.initial_guess)
                : prev;
        double prev_diff = std::numeric_limits<double>::infinity();
        double relax = 1.0;
        std::vector<double> history;
        history.reserve(16);
        for (std::size_t m = 0; m < opts.max_iterations; ++m) {
            std::vector<double> next =
                implicit_solve(k, c_new, base_rhs, tk, prev, &iterate);
            if (relax < 1.0) {
                for (std::size_t s = 0; s < next.size(); ++s) {
                    next[s] = relax * next[s] + (1.0 - relax) * iterate[s];
                }
            }
            double diff = 0.0;
            for (std::size_t s = 0; s < next.size(); ++s) {
                diff = std::max(diff, std::abs(next[s] - iterate[s]));
            }
            iterate = std::move(next);
            history.push_back(diff);
            if (diff <= opts.tol) return iterate;
            if (diff > 0.9 * prev_diff) relax = 0.8;  // stall: damp
            prev_diff = diff;
        }
        std::ostringstream os;
        os << "diffusion step " << k << ": Picard did not converge within "
           << opts.max_iterations << " iterations; successive differences:";
        for (std::size_t i = history.size() > 8 ? history.size() - 8 : 0;
             i < history.size(); ++i) {
            os << ' ' << history[i];
        }
        throw SolveError(os.str());
    }

    DiffusionProblem p_;
    ChSpace space_;
    double alpha_;
};

}  // namespace detail

/// Linear solve: source must not depend on u.
inline SpaceTimeField solve_linear(const DiffusionProblem& problem) {
    if (problem.source.depends_on_u) {
        throw std::invalid_argument(
            "solve_linear: source depends on u; use solve_nonlinear");
    }
    detail::ChStepper stepper(problem);
    return stepper.run(nullptr);
}

/// Nonlinear solve via per-step damped Picard iteration. Also accepts
/// u-independent sources (converges in one iteration, reproducing
/// solve_linear).
inline SpaceTimeField solve_nonlinear(const DiffusionProblem& problem,
                                      const PicardOptions& opts = {}) {
    detail::ChStepper stepper(problem);
    return stepper.run(&opts);
}

struct MaxPrincipleReport {
    bool min_side = true;
    double bound = 0.0;      // parabolic-boundary extremum
    double attained = 0.0;   // global extremum of the field
    double violation = 0.0;  // positive when the principle is breached
    double tolerance = 0.0;
    bool pass = false;
    SpaceTimeField::Extremum worst{0.0, 0, 0, 0};
};

/// Discrete tolerance for the parabolic maximum-principle checks.
inline double diffusion_check_tolerance(const SpaceTimeField& field,
                                        double alpha) {
    const double hu = field.time().max_h();
    const double hx = field.xs().size() > 1 ? field.xs()[1] - field.xs()[0]
                                            : 0.0;
    double h2 = hx * hx;
    if (field.two_dimensional()) {
        const double hy = field.ys()[1] - field.ys()[0];
        h2 = std::max(h2, hy * hy);
    }
    return 10.0 * (std::pow(hu, 2.0 - alpha) + h2) * field.seminorm_estimate() +
           1e-12;
}

/// Theorem check: with F >= 0 the field stays above the parabolic-boundary
/// minimum (min_side = true); with F <= 0 it stays below the maximum.
inline MaxPrincipleReport check_max_principle(const SpaceTimeField& field,
                                              double alpha, bool min_side) {
    MaxPrincipleReport rep;
    rep.min_side = min_side;
    rep.tolerance = diffusion_check_tolerance(field, alpha);
    if (min_side) {
        const auto bound = field.parabolic_min();
        const auto got = field.global_min();
        rep.bound = bound.value;
        rep.attained = got.value;
        rep.violation = bound.value - got.value;
        rep.worst = got;
    } else {
        const auto bound = field.parabolic_max();
        const auto got = field.global_max();
        rep.bound = bound.value;
        rep.attained = got.value;
        rep.violation = got.value - bound.value;
        rep.worst = got;
    }
    rep.pass = rep.violation <= rep.tolerance;
    return rep;
}

struct StabilityReport {
    double delta = 0.0;      // max |phi1 - phi2|
    double distance = 0.0;   // ||u1 - u2||_inf over space-time
    double tolerance = 0.0;
    bool pass = false;
};

/// Continuous-dependence check: problems may differ only in initial data;
/// verifies ||u1 - u2||_inf <= max|phi1 - phi2| + tol.
inline StabilityReport check_continuous_dependence(
    const DiffusionProblem& p1, const DiffusionProblem& p2) {
    if (p1.alpha.value() != p2.alpha.value() || p1.nu != p2.nu ||
        !p1.time.same_layout(p2.time) || p1.space.index() != p2.space.index() ||
        p1.source.name != p2.source.name ||
        p1.boundary.name != p2.boundary.name) {
        throw std::invalid_argument(
            "check_continuous_dependence: problems must be identical except "
            "for the initial data");
    }
    const SpaceTimeField u1 = p1.source.depends_on_u ? solve_nonlinear(p1)
                                                     : solve_linear(p1);
    const SpaceTimeField u2 = p2.source.depends_on_u ? solve_nonlinear(p2)
                                                     : solve_linear(p2);

    StabilityReport rep;
    const auto& xs = u1.xs();
    const std::size_t my = u1.two_dimensional() ? u1.ys().size() : 1;
    for (std::size_t j = 0; j < my; ++j) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double y = u1.two_dimensional() ? u1.ys()[j] : 0.0;
            rep.delta = std::max(rep.delta,
                                 std::abs(p1.initial.fn(xs[i], y) -
                                          p2.initial.fn(xs[i], y)));
        }
    }
    rep.distance = u1.max_abs_difference(u2);
    // The discrete scheme satisfies the comparison principle up to solver
    // tolerances, not truncation, so the slack is tight.
    rep.tolerance = 1e-8 * (1.0 + rep.delta);
    rep.pass = rep.distance <= rep.delta + rep.tolerance;
    return rep;
}

}  // namespace hadfrac
