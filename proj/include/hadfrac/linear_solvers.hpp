#pragma once

/**
 * @file linear_solvers.hpp
 * @brief Deterministic direct and stationary iterative solvers.
 *
 * Everything here is dependency-free and runs in a fixed order, so repeated
 * solves are bit-identical: Thomas elimination for tridiagonal systems,
 * dense LU with partial pivoting for small systems, and Gauss-Seidel sweeps
 * (red-black ordering for the structured 2D case) with a relative-residual
 * stopping test.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hadfrac {

/// Thomas algorithm. sub/super have length n-1, diag and rhs length n.
inline std::vector<double> solve_tridiagonal(std::vector<double> sub,
                                             std::vector<double> diag,
                                             std::vector<double> super,
                                             std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (sub.size() + 1 != n || super.size() + 1 != n || rhs.size() != n) {
        throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double m = sub[i - 1] / diag[i - 1];
        diag[i] -= m * super[i - 1];
        rhs[i] -= m * rhs[i - 1];
        if (diag[i] == 0.0) {
            throw std::runtime_error("solve_tridiagonal: zero pivot");
        }
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
    }
    return x;
}

/// Row-major dense matrix.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    explicit DenseMatrix(std::size_t size)
        : n(size), a(size * size, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// LU with partial pivoting, solving in place. Throws on singularity.
inline std::vector<double> solve_dense(DenseMatrix m, std::vector<double> b) {
    const std::size_t n = m.n;
    if (b.size() != n) {
        throw std::invalid_argument("solve_dense: size mismatch");
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(m.at(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(m.at(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) {
            throw std::runtime_error("solve_dense: singular matrix");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m.a[pivot * n + j], m.a[col * n + j]);
            }
            std::swap(b[pivot], b[col]);
        }
        const double d = m.at(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = m.at(r, col) / d;
            if (factor == 0.0) continue;
            m.at(r, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) {
                m.at(r, j) -= factor * m.at(col, j);
            }
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m.at(i, j) * x[j];
        x[i] = s / m.at(i, i);
    }
    return x;
}

/// Sparse rows: per-row list of (column, coefficient), diagonal included.
struct SparseRows {
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;

    std::size_t size() const { return rows.size(); }

    /// min over rows of (|diag| - sum |offdiag|) / |diag|.
    double dominance_margin() const {
        double margin = 1.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double diag = 0.0, off = 0.0;
            for (const auto& [j, v] : rows[i]) {
                if (j == i) {
                    diag += v;
                } else {
                    off += std::abs(v);
                }
            }
            if (diag == 0.0) return -1.0;
            margin = std::min(margin, (std::abs(diag) - off) / std::abs(diag));
        }
        return margin;
    }

    DenseMatrix to_dense() const {
        DenseMatrix m(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (const auto& [j, v] : rows[i]) m.at(i, j) += v;
        }
        return m;
    }
};

struct IterationResult {
    bool converged = false;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;  // coarse, every 32 sweeps
};

/// Gauss-Seidel in natural row order; stops on relative infinity-norm
/// residual. Deterministic for a fixed sweep order.
inline IterationResult gauss_seidel(const SparseRows& A,
                                    const std::vector<double>& rhs,
                                    std::vector<double>& x, double rel_tol,
                                    std::size_t max_sweeps) {
    const std::size_t n = A.size();
    double rhs_norm = 0.0;
    for (double v : rhs) rhs_norm = std::max(rhs_norm, std::abs(v));
    if (rhs_norm == 0.0) rhs_norm = 1.0;

    IterationResult result;
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = rhs[i];
            double diag = 0.0;
            for (const auto& [j, v] : A.rows[i]) {
                if (j == i) {
                    diag += v;
                } else {
                    sum -= v * x[j];
                }
            }
            x[i] = sum / diag;
        }
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = rhs[i];
            for (const auto& [j, v] : A.rows[i]) r -= v * x[j];
            res = std::max(res, std::abs(r));
        }
        result.iterations = sweep;
        result.residual = res / rhs_norm;
        if (sweep % 32 == 0 || result.residual <= rel_tol) {
            result.residual_history.push_back(result.residual);
        }
        if (result.residual <= rel_tol) {
            result.converged = true;
            return result;
        }
    }
    return result;
}

/// Red-black Gauss-Seidel for the constant-coefficient 5-point system
///   (diag) u_ij - cx (u_{i-1,j} + u_{i+1,j}) - cy (u_{i,j-1} + u_{i,j+1})
///     = rhs_ij
/// on an (nx-1) x (ny-1) interior grid with homogeneous unknowns (boundary
/// contributions folded into rhs). x is indexed i + (nx-1) * j.
inline IterationResult red_black_gauss_seidel_2d(
    std::size_t mx, std::size_t my, double diag, double cx, double cy,
    const std::vector<double>& rhs, std::vector<double>& x, double rel_tol,
    std::size_t max_sweeps) {
    if (rhs.size() != mx * my || x.size() != mx * my) {
        throw std::invalid_argument("red_black_gauss_seidel_2d: bad sizes");
    }
    double rhs_norm = 0.0;
    for (double v : rhs) rhs_norm = std::max(rhs_norm, std::abs(v));
    if (rhs_norm == 0.0) rhs_norm = 1.0;

    auto idx = [mx](std::size_t i, std::size_t j) { return i + mx * j; };
    IterationResult result;
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (int colour = 0; colour < 2; ++colour) {
            for (std::size_t j = 0; j < my; ++j) {
                for (std::size_t i = 0; i < mx; ++i) {
                    if (((i + j) & 1u) != static_cast<unsigned>(colour)) {
                        continue;
                    }
                    double sum = rhs[idx(i, j)];
                    if (i > 0) sum += cx * x[idx(i - 1, j)];
                    if (i + 1 < mx) sum += cx * x[idx(i + 1, j)];
                    if (j > 0) sum += cy * x[idx(i, j - 1)];
                    if (j + 1 < my) sum += cy * x[idx(i, j + 1)];
                    x[idx(i, j)] = sum / diag;
                }
            }
        }
        double res = 0.0;
        for (std::size_t j = 0; j < my; ++j) {
            for (std::size_t i = 0; i < mx; ++i) {
                double r = rhs[idx(i, j)] - diag * x[idx(i, j)];
                if (i > 0) r += cx * x[idx(i - 1, j)];
                if (i + 1 < mx) r += cx * x[idx(i + 1, j)];
                if (j > 0) r += cy * x[idx(i, j - 1)];
                if (j + 1 < my) r += cy * x[idx(i, j + 1)];
                res = std::max(res, std::abs(r));
            }
        }
        result.iterations = sweep;
        result.residual = res / rhs_norm;
        if (sweep % 32 == 0 || result.residual <= rel_tol) {
            result.residual_history.push_back(result.residual);
        }
        if (result.residual <= rel_tol) {
            result.converged = true;
            return result;
        }
    }
    return result;
}

}  // namespace hadfrac
