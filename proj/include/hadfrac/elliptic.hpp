#pragma once

/**
 * @file elliptic.hpp
 * @brief Finite-difference solver for the elliptic equation with axis-wise
 *        Hadamard fractional derivatives in an n-cube (n <= 3).
 *
 * Equation, on Omega = prod_j (1, h_j):
 *
 *   Lap u + sum_j a_j(x) du/dx_j + sum_j b_j(x) D^a_{x_j} u + c(x) u = F,
 *   u = phi on the boundary.
 *
 * The problem is assembled in log coordinates xi_j = log x_j (uniform
 * xi-grids), where the axis-wise Hadamard derivative becomes the
 * Riemann-Liouville derivative with translation-invariant L1 weights along
 * each grid line and the classical terms pick up variable coefficients:
 *
 *   d2/dx2 = e^(-2 xi) (d2/dxi2 - d/dxi),   d/dx = e^(-xi) d/dxi.
 *
 * One sparse row per interior node; the fractional term makes rows dense
 * along lines (lower-triangular per line). Systems up to 4096 unknowns are
 * solved by dense LU; larger ones use fixed-order Gauss-Seidel with a
 * dense fallback when the assembled rows are not diagonally dominant.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadfrac/frac_order.hpp"
#include "hadfrac/linear_solvers.hpp"
#include "hadfrac/problem_common.hpp"
#include "hadfrac/special_functions.hpp"

namespace hadfrac {

enum class BSign { negative, positive, mixed };
enum class CSign { nonpositive, general };

struct EllipticPoint {
    double x = 1.0, y = 1.0, z = 1.0;
};

struct CoefficientEntry {
    std::string name;
    std::function<double(const EllipticPoint&)> fn;
};

struct EllipticSource {
    std::string name;
    /// F(u, x); u ignored unless depends_on_u.
    std::function<double(double, const EllipticPoint&)> fn;
    bool depends_on_u = false;
    Monotonicity monotonicity = Monotonicity::none;
    DataSign sign = DataSign::unknown;
};

struct EllipticProblem {
    int dims = 1;                                   // 1, 2 or 3
    std::array<double, 3> extents = {2.718281828459045, 2.0, 2.0};
    std::array<std::size_t, 3> resolution = {32, 8, 8};
    FracOrder alpha{0.5};
    std::array<CoefficientEntry, 3> advection;      // a_j
    std::array<CoefficientEntry, 3> frac_coeff;     // b_j
    CoefficientEntry reaction;                      // c
    EllipticSource source;
    std::function<double(const EllipticPoint&)> boundary;  // phi
    BSign b_sign = BSign::negative;
    CSign c_sign = CSign::nonpositive;

    void validate() const;
};

class EllipticField;

namespace detail {

struct EllGrid {
    int dims;
    std::array<std::vector<double>, 3> xi;    // per-axis log coordinates
    std::array<double, 3> hxi = {1.0, 1.0, 1.0};
    std::array<std::size_t, 3> counts = {1, 1, 1};  // nodes per axis

    static EllGrid build(const EllipticProblem& p) {
        if (p.dims < 1 || p.dims > 3) {
            throw std::invalid_argument("EllipticProblem: dims must be 1..3");
        }
        EllGrid g;
        g.dims = p.dims;
        for (int d = 0; d < p.dims; ++d) {
            if (!(p.extents[d] > 1.0)) {
                throw std::invalid_argument(
                    "EllipticProblem: extents must exceed 1");
            }
            const std::size_t m = p.resolution[d];
            if (m < 2) {
                throw std::invalid_argument(
                    "EllipticProblem: resolution must be >= 2 per axis");
            }
            const double span = std::log(p.extents[d]);
            g.xi[d].resize(m + 1);
            for (std::size_t i = 0; i <= m; ++i) {
                g.xi[d][i] = span * static_cast<double>(i) /
                             static_cast<double>(m);
            }
            g.hxi[d] = span / static_cast<double>(m);
            g.counts[d] = m + 1;
        }
        return g;
    }

    std::size_t total_nodes() const {
        return counts[0] * counts[1] * counts[2];
    }
    std::size_t node_id(std::size_t i, std::size_t j, std::size_t k) const {
        return i + counts[0] * (j + counts[1] * k);
    }
    std::array<std::size_t, 3> coords(std::size_t id) const {
        std::array<std::size_t, 3> c{};
        c[0] = id % counts[0];
        c[1] = (id / counts[0]) % counts[1];
        c[2] = id / (counts[0] * counts[1]);
        return c;
    }
    bool is_boundary(const std::array<std::size_t, 3>& c) const {
        for (int d = 0; d < dims; ++d) {
            if (c[d] == 0 || c[d] + 1 == counts[d]) return true;
        }
        return false;
    }
    EllipticPoint point(const std::array<std::size_t, 3>& c) const {
        EllipticPoint p;
        p.x = std::exp(xi[0][c[0]]);
        if (dims > 1) p.y = std::exp(xi[1][c[1]]);
        if (dims > 2) p.z = std::exp(xi[2][c[2]]);
        return p;
    }
};

}  // namespace detail

inline void EllipticProblem::validate() const {
    const auto grid = detail::EllGrid::build(*this);
    const std::size_t total = grid.total_nodes();
    for (std::size_t id = 0; id < total; ++id) {
        const auto c = grid.coords(id);
        const auto pt = grid.point(c);
        for (int d = 0; d < dims; ++d) {
            const double b = frac_coeff[d].fn(pt);
            if (b_sign == BSign::negative && !(b < 0.0)) {
                throw std::invalid_argument(
                    "EllipticProblem: sign metadata says b_negative but " +
                    frac_coeff[d].name + " is " + std::to_string(b));
            }
            if (b_sign == BSign::positive && !(b > 0.0)) {
                throw std::invalid_argument(
                    "EllipticProblem: sign metadata says b_positive but " +
                    frac_coeff[d].name + " is " + std::to_string(b));
            }
        }
        const double cv = reaction.fn(pt);
        if (c_sign == CSign::nonpositive && cv > 0.0) {
            throw std::invalid_argument(
                "EllipticProblem: sign metadata says c_nonpositive but " +
                reaction.name + " is " + std::to_string(cv));
        }
    }
}

/// Solution values at every grid node; boundary nodes carry phi exactly.
class EllipticField {
public:
    EllipticField(detail::EllGrid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {}

    const detail::EllGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t id) const { return values_[id]; }

    struct Extremum {
        double value;
        std::size_t id;
        bool on_boundary;
    };

    Extremum global_max() const { return scan(false, false); }
    Extremum global_min() const { return scan(true, false); }
    Extremum boundary_max() const { return scan(false, true); }
    Extremum boundary_min() const { return scan(true, true); }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    double max_abs_difference(const EllipticField& other) const {
        double m = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            m = std::max(m, std::abs(values_[i] - other.values_[i]));
        }
        return m;
    }

    /// sup |second xi-difference| over lines, for tolerance budgets.
    double seminorm_estimate() const {
        double m = 0.0;
        const auto& g = grid_;
        for (std::size_t id = 0; id < values_.size(); ++id) {
            const auto c = g.coords(id);
            for (int d = 0; d < g.dims; ++d) {
                if (c[d] == 0 || c[d] + 1 >= g.counts[d]) continue;
                auto cm = c, cp = c;
                cm[d] -= 1;
                cp[d] += 1;
                const double dd =
                    (values_[g.node_id(cp[0], cp[1], cp[2])] -
                     2.0 * values_[id] +
                     values_[g.node_id(cm[0], cm[1], cm[2])]) /
                    (g.hxi[d] * g.hxi[d]);
                m = std::max(m, std::abs(dd));
            }
        }
        return m;
    }

private:
    Extremum scan(bool want_min, bool boundary_only) const {
        Extremum best{want_min ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity(),
                      0, false};
        for (std::size_t id = 0; id < values_.size(); ++id) {
            const auto c = grid_.coords(id);
            const bool on_b = grid_.is_boundary(c);
            if (boundary_only && !on_b) continue;
            const bool better =
                want_min ? values_[id] < best.value : values_[id] > best.value;
            if (better) best = {values_[id], id, on_b};
        }
        return best;
    }

    detail::EllGrid grid_;
    std::vector<double> values_;
};

struct AssembledSystem {
    detail::EllGrid grid;
    SparseRows rows;                       // one row per interior node
    std::vector<double> rhs;
    std::vector<std::size_t> node_of_unknown;
    std::vector<std::ptrdiff_t> unknown_of_node;  // -1 for boundary
    double dominance_margin = 0.0;
};

namespace detail {

/// L1 coefficient of (g_{m+1} - g_m) in the Riemann-Liouville derivative at
/// line position i on a uniform xi-grid: Caputo weights; the split term is
/// handled by the caller.
inline double line_l1_coeff(double h, double alpha, std::size_t i,
                            std::size_t m) {
    const double A = h * static_cast<double>(i - m);
    const double B = h * static_cast<double>(i - m - 1);
    return pow_diff(A, B, 1.0 - alpha) / (h * gamma_fn(2.0 - alpha));
}

}  // namespace detail

/// Assemble the interior linear system. The source is evaluated at u = 0
/// for nonlinear problems; Picard updates only the right-hand side.
inline AssembledSystem assemble(const EllipticProblem& p) {
    p.validate();
    const auto grid = detail::EllGrid::build(p);
    const double alpha = p.alpha.value();
    const std::size_t total = grid.total_nodes();

    AssembledSystem sys;
    sys.grid = grid;
    sys.unknown_of_node.assign(total, -1);
    for (std::size_t id = 0; id < total; ++id) {
        if (!grid.is_boundary(grid.coords(id))) {
            sys.unknown_of_node[id] =
                static_cast<std::ptrdiff_t>(sys.node_of_unknown.size());
            sys.node_of_unknown.push_back(id);
        }
    }
    const std::size_t unknowns = sys.node_of_unknown.size();
    sys.rows.rows.resize(unknowns);
    sys.rhs.assign(unknowns, 0.0);

    for (std::size_t row = 0; row < unknowns; ++row) {
        const std::size_t id = sys.node_of_unknown[row];
        const auto c = grid.coords(id);
        const auto pt = grid.point(c);
        std::map<std::size_t, double> entries;  // node id -> coefficient
        double rhs = p.source.fn(0.0, pt);

        auto add = [&](std::size_t node, double coeff) {
            entries[node] += coeff;
        };

        for (int d = 0; d < p.dims; ++d) {
            const double h = grid.hxi[d];
            const double xi_here = grid.xi[d][c[d]];
            const double e1 = std::exp(-xi_here);
            const double e2 = e1 * e1;
            auto shifted = [&](std::size_t pos) {
                auto cc = c;
                cc[d] = pos;
                return grid.node_id(cc[0], cc[1], cc[2]);
            };

            // Laplacian: e^(-2 xi) (second difference - centred first
            // difference).
            add(shifted(c[d] - 1), e2 * (1.0 / (h * h) + 1.0 / (2.0 * h)));
            add(shifted(c[d]), -2.0 * e2 / (h * h));
            add(shifted(c[d] + 1), e2 * (1.0 / (h * h) - 1.0 / (2.0 * h)));

            // Advection: a_j e^(-xi) centred first difference.
            const double aj = p.advection[d].fn(pt);
            if (aj != 0.0) {
                add(shifted(c[d] - 1), -aj * e1 / (2.0 * h));
                add(shifted(c[d] + 1), aj * e1 / (2.0 * h));
            }

            // Fractional term: b_j D^a along the line from the x_j = 1
            // face, split form. The face value (line position 0) carries
            // the singular weight.
            const double bj = p.frac_coeff[d].fn(pt);
            if (bj != 0.0) {
                const std::size_t i = c[d];
                const double split_w =
                    std::pow(grid.xi[d][i], -alpha) / gamma_fn(1.0 - alpha);
                add(shifted(0), bj * split_w);
                for (std::size_t m = 0; m < i; ++m) {
                    const double w = detail::line_l1_coeff(h, alpha, i, m);
                    add(shifted(m + 1), bj * w);
                    add(shifted(m), -bj * w);
                }
            }
        }

        // Reaction term.
        const double cv = p.reaction.fn(pt);
        if (cv != 0.0) entries[id] += cv;

        // Split into matrix row and boundary contributions.
        auto& row_entries = sys.rows.rows[row];
        for (const auto& [node, coeff] : entries) {
            const std::ptrdiff_t col = sys.unknown_of_node[node];
            if (col >= 0) {
                row_entries.emplace_back(static_cast<std::size_t>(col), coeff);
            } else {
                rhs -= coeff * p.boundary(grid.point(grid.coords(node)));
            }
        }
        sys.rhs[row] = rhs;
    }

    sys.dominance_margin = sys.rows.dominance_margin();
    return sys;
}

/// Solve with the assembled right-hand side replaced by `rhs`.
inline std::vector<double> solve_assembled(const AssembledSystem& sys,
                                           const std::vector<double>& rhs) {
    constexpr std::size_t kDenseLimit = 4096;
    const std::size_t n = sys.rows.size();
    if (n <= kDenseLimit || sys.dominance_margin <= 0.0) {
        return solve_dense(sys.rows.to_dense(), rhs);
    }
    std::vector<double> x(n, 0.0);
    const auto it = gauss_seidel(sys.rows, rhs, x, 1e-10, 10000);
    if (!it.converged) {
        std::ostringstream os;
        os << "elliptic solve: Gauss-Seidel stalled at relative residual "
           << it.residual << " after " << it.iterations
           << " sweeps (dominance margin " << sys.dominance_margin << ")";
        throw SolveError(os.str());
    }
    return x;
}

inline EllipticField field_from_solution(const EllipticProblem& p,
                                         const AssembledSystem& sys,
                                         const std::vector<double>& interior) {
    std::vector<double> values(sys.grid.total_nodes());
    for (std::size_t id = 0; id < values.size(); ++id) {
        const std::ptrdiff_t col = sys.unknown_of_node[id];
        values[id] = col >= 0
                         ? interior[static_cast<std::size_t>(col)]
                         : p.boundary(sys.grid.point(sys.grid.coords(id)));
    }
    return EllipticField(sys.grid, std::move(values));
}

inline EllipticField solve_elliptic(const EllipticProblem& p) {
    if (p.source.depends_on_u) {
        throw std::invalid_argument(
            "solve_elliptic: source depends on u; use "
            "solve_nonlinear_elliptic");
    }
    const auto sys = assemble(p);
    return field_from_solution(p, sys, solve_assembled(sys, sys.rhs));
}

enum class EllipticGuess { zero, boundary_extension };

/// Damped Picard outer iteration over assembled linear solves.
inline EllipticField solve_nonlinear_elliptic(
    const EllipticProblem& p, EllipticGuess guess = EllipticGuess::zero,
    double tol = 1e-10, std::size_t max_iterations = 200) {
    const auto sys = assemble(p);
    const std::size_t unknowns = sys.node_of_unknown.size();

    std::vector<double> iterate(unknowns, 0.0);
    if (guess == EllipticGuess::boundary_extension) {
        // Blend of per-axis linear interpolants of the face values of phi.
        for (std::size_t q = 0; q < unknowns; ++q) {
            const auto c = sys.grid.coords(sys.node_of_unknown[q]);
            double acc = 0.0;
            for (int d = 0; d < p.dims; ++d) {
                auto lo = c, hi = c;
                lo[d] = 0;
                hi[d] = sys.grid.counts[d] - 1;
                const double s = sys.grid.xi[d][c[d]] /
                                 sys.grid.xi[d][sys.grid.counts[d] - 1];
                const double vlo =
                    p.boundary(sys.grid.point(lo));
                const double vhi =
                    p.boundary(sys.grid.point(hi));
                acc += (1.0 - s) * vlo + s * vhi;
            }
            iterate[q] = acc / static_cast<double>(p.dims);
        }
    }

    double prev_diff = std::numeric_limits<double>::infinity();
    double relax = 1.0;
    std::vector<double> history;
    for (std::size_t m = 0; m < max_iterations; ++m) {
        // Refresh the source at the frozen iterate.
        std::vector<double> rhs = sys.rhs;
        for (std::size_t q = 0; q < unknowns; ++q) {
            const auto pt =
                sys.grid.point(sys.grid.coords(sys.node_of_unknown[q]));
            rhs[q] += p.source.fn(iterate[q], pt) - p.source.fn(0.0, pt);
        }
        std::vector<double> next = solve_assembled(sys, rhs);
        if (relax < 1.0) {
            for (std::size_t q = 0; q < unknowns; ++q) {
                next[q] = relax * next[q] + (1.0 - relax) * iterate[q];
            }
        }
        double diff = 0.0;
        for (std::size_t q = 0; q < unknowns; ++q) {
            diff = std::max(diff, std::abs(next[q] - iterate[q]));
        }
        iterate = std::move(next);
        history.push_back(diff);
        if (diff <= tol) {
            return field_from_solution(p, sys, iterate);
        }
        if (diff > 0.9 * prev_diff) relax = 0.8;
        prev_diff = diff;
    }
    std::ostringstream os;
    os << "solve_nonlinear_elliptic: no convergence in " << max_iterations
       << " iterations; last differences:";
    for (std::size_t i = history.size() > 8 ? history.size() - 8 : 0;
         i < history.size(); ++i) {
        os << ' ' << history[i];
    }
    throw SolveError(os.str());
}

struct WeakPrincipleReport {
    bool max_side = true;
    double interior_extremum = 0.0;
    double boundary_bound = 0.0;
    double violation = 0.0;
    double tolerance = 0.0;
    bool positive_interior_max = false;  // forbidden configuration
    bool pass = false;
    std::size_t worst_node = 0;
};

inline double elliptic_check_tolerance(const EllipticField& field,
                                       double alpha) {
    double h = 0.0;
    for (int d = 0; d < field.grid().dims; ++d) {
        h = std::max(h, field.grid().hxi[d]);
    }
    return 10.0 * (std::pow(h, 2.0 - alpha) + h * h) *
               field.seminorm_estimate() +
           1e-12;
}

/// Weak maximum principle: with F >= 0, b_j < 0, c <= 0,
///   max u <= max over the boundary of {u, 0};
/// mirrored with F <= 0, b_j > 0 for the minimum. Reports whether a
/// positive interior maximum occurs (the configuration the theory forbids).
inline WeakPrincipleReport check_weak_principles(const EllipticField& field,
                                                 const EllipticProblem& p,
                                                 bool max_side) {
    WeakPrincipleReport rep;
    rep.max_side = max_side;
    rep.tolerance = elliptic_check_tolerance(field, p.alpha.value());
    if (max_side) {
        const auto global = field.global_max();
        rep.interior_extremum = global.value;
        rep.boundary_bound = std::max(field.boundary_max().value, 0.0);
        rep.violation = global.value - rep.boundary_bound;
        rep.worst_node = global.id;
        rep.positive_interior_max = !global.on_boundary &&
                                    global.value > rep.tolerance &&
                                    rep.violation > rep.tolerance;
    } else {
        const auto global = field.global_min();
        rep.interior_extremum = global.value;
        rep.boundary_bound = std::min(field.boundary_min().value, 0.0);
        rep.violation = rep.boundary_bound - global.value;
        rep.worst_node = global.id;
    }
    rep.pass = rep.violation <= rep.tolerance;
    return rep;
}

/// Discrete axis-wise fractional derivative of a solved field at a node,
/// via the same split weights the assembler uses. Used by the
/// argmax-consistency check.
inline double elliptic_frac_term_at(const EllipticField& field,
                                    const EllipticProblem& p, std::size_t id,
                                    int axis) {
    const auto& g = field.grid();
    const auto c = g.coords(id);
    const std::size_t i = c[axis];
    if (i == 0) {
        throw std::invalid_argument(
            "elliptic_frac_term_at: undefined on the x_j = 1 face");
    }
    const double alpha = p.alpha.value();
    const double h = g.hxi[axis];
    auto value_at = [&](std::size_t pos) {
        auto cc = c;
        cc[axis] = pos;
        return field[g.node_id(cc[0], cc[1], cc[2])];
    };
    double acc = value_at(0) * std::pow(g.xi[axis][i], -alpha) /
                 gamma_fn(1.0 - alpha);
    for (std::size_t m = 0; m < i; ++m) {
        acc += detail::line_l1_coeff(h, alpha, i, m) *
               (value_at(m + 1) - value_at(m));
    }
    return acc;
}

}  // namespace hadfrac
