#pragma once

/**
 * @file grid_function.hpp
 * @brief Real-valued samples on a LogGrid, immutable after construction.
 *
 * A GridFunction is either regular (every value finite) or flagged
 * singular-at-a, in which case only the value at t_0 = a may be non-finite
 * and the flag carries the power exponent p of the leading behaviour
 * g(u) ~ C u^p near u = 0. The exponent is what lets the integral operator
 * treat the first cell analytically instead of interpolating an infinity.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hadfrac/log_grid.hpp"

namespace hadfrac {

class GridFunction {
public:
    /// Regular function: all values must be finite.
    GridFunction(LogGrid grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        check_size();
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw std::invalid_argument(
                    "GridFunction: non-finite value at node " +
                    std::to_string(i) + " of a regular function");
            }
        }
    }

    /// Singular-at-a function: node 0 may be non-finite, the rest must be
    /// finite; p > -1 is the integrable power exponent of g near u = 0.
    GridFunction(LogGrid grid, std::vector<double> values,
                 double singular_exponent)
        : grid_(std::move(grid)),
          values_(std::move(values)),
          singular_(true),
          exponent_(singular_exponent) {
        check_size();
        if (!(singular_exponent > -1.0)) {
            throw std::invalid_argument(
                "GridFunction: singular exponent must be > -1 (integrable)");
        }
        for (std::size_t i = 1; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw std::invalid_argument(
                    "GridFunction: non-finite value at interior node " +
                    std::to_string(i));
            }
        }
    }

    /// Sample a callable of the physical coordinate t.
    template <class F>
    static GridFunction sample(const LogGrid& grid, F&& f) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
        return GridFunction(grid, std::move(v));
    }

    /// Sample a callable of u = log(t/a).
    template <class F>
    static GridFunction sample_log(const LogGrid& grid, F&& g) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = g(grid.u(i));
        return GridFunction(grid, std::move(v));
    }

    /// Sample a callable of u that is singular at u = 0 with exponent p.
    template <class F>
    static GridFunction sample_log_singular(const LogGrid& grid, F&& g,
                                            double exponent) {
        std::vector<double> v(grid.size());
        v[0] = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 1; i < grid.size(); ++i) v[i] = g(grid.u(i));
        return GridFunction(grid, std::move(v), exponent);
    }

    const LogGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    bool singular_at_a() const { return singular_; }
    double singular_exponent() const {
        if (!singular_) {
            throw std::logic_error(
                "GridFunction: exponent requested on a regular function");
        }
        return exponent_;
    }

    double max_abs() const {
        double m = 0.0;
        for (std::size_t i = singular_ ? 1u : 0u; i < values_.size(); ++i) {
            m = std::max(m, std::abs(values_[i]));
        }
        return m;
    }

    /// Estimate of sup |g''| in u from second divided differences.
    double second_derivative_estimate() const {
        double m = 0.0;
        for (std::size_t i = 1; i + 1 < size(); ++i) {
            if (singular_ && i == 1) continue;  // skip the non-finite node
            const double hm = grid_.u(i) - grid_.u(i - 1);
            const double hp = grid_.u(i + 1) - grid_.u(i);
            const double dd =
                2.0 *
                ((values_[i + 1] - values_[i]) / hp -
                 (values_[i] - values_[i - 1]) / hm) /
                (hm + hp);
            m = std::max(m, std::abs(dd));
        }
        return m;
    }

private:
    void check_size() const {
        if (values_.size() != grid_.size()) {
            throw std::invalid_argument(
                "GridFunction: value count " + std::to_string(values_.size()) +
                " does not match node count " + std::to_string(grid_.size()));
        }
    }

    LogGrid grid_;
    std::vector<double> values_;
    bool singular_ = false;
    double exponent_ = 0.0;
};

/// c1*f + c2*g on a common grid layout.
inline GridFunction linear_combination(double c1, const GridFunction& f,
                                       double c2, const GridFunction& g) {
    if (!f.grid().same_layout(g.grid())) {
        throw std::invalid_argument("linear_combination: mismatched grids");
    }
    if (f.singular_at_a() || g.singular_at_a()) {
        throw std::invalid_argument(
            "linear_combination: singular operands not supported");
    }
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) v[i] = c1 * f[i] + c2 * g[i];
    return GridFunction(f.grid(), std::move(v));
}

}  // namespace hadfrac
