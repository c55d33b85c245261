#pragma once

/**
 * @file log_grid.hpp
 * @brief Grids on [a, T] that are uniform or graded in u = log(t/a).
 *
 * Hadamard-type operators turn into classical Riemann-Liouville/Caputo
 * operators under u = log(t/a); all discrete weights in this library are
 * therefore built from the u-coordinates of a LogGrid. A grading exponent
 * r > 1 clusters nodes toward t = a to resolve the (log t/a)^{-alpha}
 * kernel singularity:
 *
 *     u_i = (i/n)^r * log(T/a),   t_i = a * exp(u_i).
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadfrac {

class LogGrid {
public:
    /// Build a grid with n intervals on [a, t_end], grading exponent r >= 1.
    /// r = 1 gives uniform spacing in u = log(t/a).
    LogGrid(double a, double t_end, std::size_t n, double r = 1.0)
        : a_(a), t_end_(t_end), n_(n), r_(r) {
        if (!(a > 0.0)) {
            throw std::invalid_argument("LogGrid: left endpoint a must be > 0");
        }
        if (!(t_end > a)) {
            throw std::invalid_argument("LogGrid: need t_end > a");
        }
        if (n < 2) {
            throw std::invalid_argument("LogGrid: need at least 2 intervals");
        }
        if (!(r >= 1.0)) {
            throw std::invalid_argument("LogGrid: grading exponent must be >= 1");
        }
        const double span = std::log(t_end / a);
        u_.resize(n + 1);
        t_.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(n);
            u_[i] = std::pow(s, r) * span;
            t_[i] = a * std::exp(u_[i]);
        }
        // Pin the endpoints exactly.
        u_[0] = 0.0;
        t_[0] = a;
        u_[n] = span;
        t_[n] = t_end;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(u_[i + 1] > u_[i])) {
                throw std::invalid_argument(
                    "LogGrid: nodes collapsed at index " + std::to_string(i) +
                    "; n too large for this interval");
            }
        }
    }

    double a() const { return a_; }
    double t_end() const { return t_end_; }
    std::size_t intervals() const { return n_; }
    std::size_t size() const { return n_ + 1; }
    double grading() const { return r_; }

    /// Physical node t_i.
    double node(std::size_t i) const { return t_[i]; }
    /// Logarithmic coordinate u_i = log(t_i / a).
    double u(std::size_t i) const { return u_[i]; }
    /// Cell width in u: h_j = u_{j+1} - u_j.
    double h(std::size_t j) const { return u_[j + 1] - u_[j]; }

    double max_h() const {
        double m = 0.0;
        for (std::size_t j = 0; j < n_; ++j) m = std::max(m, h(j));
        return m;
    }
    double min_h() const {
        double m = h(0);
        for (std::size_t j = 1; j < n_; ++j) m = std::min(m, h(j));
        return m;
    }

    const std::vector<double>& t_nodes() const { return t_; }
    const std::vector<double>& u_nodes() const { return u_; }

    /// Grids are interchangeable iff they were built from the same parameters.
    bool same_layout(const LogGrid& other) const {
        return a_ == other.a_ && t_end_ == other.t_end_ && n_ == other.n_ &&
               r_ == other.r_;
    }

private:
    double a_;
    double t_end_;
    std::size_t n_;
    double r_;
    std::vector<double> u_;
    std::vector<double> t_;
};

}  // namespace hadfrac
