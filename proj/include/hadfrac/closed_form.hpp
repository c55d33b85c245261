#pragma once

/**
 * @file closed_form.hpp
 * @brief Analytic catalog: ground-truth values for the discrete kernels.
 *
 * The workhorse identity, in u = log(t/a):
 *
 *   D^a u^(b-1)  = G(b)/G(b-a) u^(b-a-1)      (b > a)
 *   D^a u^(a-1)  = 0                          (the null function)
 *   I^a u^(b-1)  = G(b)/G(b+a) u^(b+a-1)      (b > 0)
 *   D*^a c       = 0
 *   D^a c        = c u^(-a)/G(1-a)
 *
 * Trigonometric-in-log entries have no elementary fractional derivative;
 * their reference values come from adaptive quadrature of the defining
 * integral at 1e-10 tolerance, computed once and cached (thread-safe:
 * shared reads, exclusive insertion).
 */

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "hadfrac/frac_order.hpp"
#include "hadfrac/grid_function.hpp"
#include "hadfrac/quadrature.hpp"
#include "hadfrac/special_functions.hpp"

namespace hadfrac {

enum class FracOp { integral, caputo_hadamard, hadamard };

/// (log t/a)^(beta-1) with beta > 0.
struct LogPower {
    double beta;
};

struct ConstantFn {
    double c;
};

/// sum_k coeffs[k] (log t/a)^k.
struct LogPolynomial {
    std::vector<double> coeffs;
};

/// sum_i amps[i] sin(freqs[i] u + phases[i]) with u = log(t/a).
struct LogTrig {
    std::vector<double> freqs;
    std::vector<double> amps;
    std::vector<double> phases;
};

class ClosedFormTag {
public:
    ClosedFormTag(LogPower p) : form_(p) {
        if (!(p.beta > 0.0)) {
            throw std::invalid_argument("ClosedFormTag: log_power needs beta > 0");
        }
    }
    ClosedFormTag(ConstantFn c) : form_(c) {
        if (!std::isfinite(c.c)) {
            throw std::invalid_argument("ClosedFormTag: constant must be finite");
        }
    }
    ClosedFormTag(LogPolynomial p) : form_(std::move(p)) {
        const auto& coeffs = std::get<LogPolynomial>(form_).coeffs;
        if (coeffs.empty()) {
            throw std::invalid_argument("ClosedFormTag: empty coefficient list");
        }
        for (double c : coeffs) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument(
                    "ClosedFormTag: non-finite polynomial coefficient");
            }
        }
    }
    ClosedFormTag(LogTrig t) : form_(std::move(t)) {
        const auto& trig = std::get<LogTrig>(form_);
        if (trig.freqs.empty() || trig.freqs.size() != trig.amps.size() ||
            trig.freqs.size() != trig.phases.size()) {
            throw std::invalid_argument(
                "ClosedFormTag: log_trig arrays must be non-empty and equal-sized");
        }
        for (std::size_t i = 0; i < trig.freqs.size(); ++i) {
            if (!std::isfinite(trig.freqs[i]) || !std::isfinite(trig.amps[i]) ||
                !std::isfinite(trig.phases[i])) {
                throw std::invalid_argument(
                    "ClosedFormTag: non-finite log_trig parameter");
            }
        }
    }

    const std::variant<LogPower, ConstantFn, LogPolynomial, LogTrig>& form()
        const {
        return form_;
    }

    /// f as a function of u = log(t/a).
    double eval_u(double u) const {
        return std::visit(
            [&](const auto& s) -> double { return eval_impl(s, u); }, form_);
    }

    /// g'(u) = (t d/dt f)(t), the delta-derivative in log coordinates.
    double deriv_u(double u) const {
        return std::visit(
            [&](const auto& s) -> double { return deriv_impl(s, u); }, form_);
    }

    bool singular_at_a() const {
        if (const auto* p = std::get_if<LogPower>(&form_)) {
            return p->beta < 1.0;
        }
        return false;
    }

    GridFunction sample(const LogGrid& grid) const {
        if (singular_at_a()) {
            const double p = std::get<LogPower>(form_).beta - 1.0;
            return GridFunction::sample_log_singular(
                grid, [&](double u) { return eval_u(u); }, p);
        }
        return GridFunction::sample_log(grid,
                                        [&](double u) { return eval_u(u); });
    }

    std::string describe() const {
        return std::visit([](const auto& s) { return describe_impl(s); },
                          form_);
    }

private:
    static double eval_impl(const LogPower& p, double u) {
        return std::pow(u, p.beta - 1.0);
    }
    static double eval_impl(const ConstantFn& c, double) { return c.c; }
    static double eval_impl(const LogPolynomial& p, double u) {
        double acc = 0.0;
        for (std::size_t k = p.coeffs.size(); k-- > 0;) {
            acc = acc * u + p.coeffs[k];
        }
        return acc;
    }
    static double eval_impl(const LogTrig& t, double u) {
        double acc = 0.0;
        for (std::size_t i = 0; i < t.freqs.size(); ++i) {
            acc += t.amps[i] * std::sin(t.freqs[i] * u + t.phases[i]);
        }
        return acc;
    }

    static double deriv_impl(const LogPower& p, double u) {
        return (p.beta - 1.0) * std::pow(u, p.beta - 2.0);
    }
    static double deriv_impl(const ConstantFn&, double) { return 0.0; }
    static double deriv_impl(const LogPolynomial& p, double u) {
        double acc = 0.0;
        for (std::size_t k = p.coeffs.size(); k-- > 1;) {
            acc = acc * u + static_cast<double>(k) * p.coeffs[k];
        }
        return acc;
    }
    static double deriv_impl(const LogTrig& t, double u) {
        double acc = 0.0;
        for (std::size_t i = 0; i < t.freqs.size(); ++i) {
            acc += t.amps[i] * t.freqs[i] * std::cos(t.freqs[i] * u + t.phases[i]);
        }
        return acc;
    }

    static std::string describe_impl(const LogPower& p) {
        return "log_power(beta=" + std::to_string(p.beta) + ")";
    }
    static std::string describe_impl(const ConstantFn& c) {
        return "constant(" + std::to_string(c.c) + ")";
    }
    static std::string describe_impl(const LogPolynomial& p) {
        return "log_polynomial(degree=" + std::to_string(p.coeffs.size() - 1) +
               ")";
    }
    static std::string describe_impl(const LogTrig& t) {
        return "log_trig(terms=" + std::to_string(t.freqs.size()) + ")";
    }

    std::variant<LogPower, ConstantFn, LogPolynomial, LogTrig> form_;
};

namespace detail {

/// Reference quadrature for operators applied to a smooth g in u, after the
/// substitution z = (u - v)^q that removes the weak kernel singularity:
///   (1/G(q+1)) int_0^{u^q} g(u - z^{1/q}) dz      [integral, q = a]
///   (1/G(2-a)) int_0^{u^{1-a}} g'(u - z^{1/q}) dz [caputo,  q = 1-a]
template <class G>
inline double frac_quadrature(G&& g, double u, double q) {
    const double upper = std::pow(u, q);
    return integrate_adaptive(
               [&](double z) { return g(u - std::pow(z, 1.0 / q)); }, 0.0,
               upper, 1e-10) /
           (q * gamma_fn(q));
}

struct TrigOracleKey {
    int which;
    double alpha;
    double u;
    std::vector<double> params;

    bool operator<(const TrigOracleKey& o) const {
        return std::tie(which, alpha, u, params) <
               std::tie(o.which, o.alpha, o.u, o.params);
    }
};

inline double trig_oracle_cached(const LogTrig& t, double alpha, double u,
                                 FracOp which) {
    static std::map<TrigOracleKey, double> cache;
    static std::shared_mutex mutex;

    TrigOracleKey key{static_cast<int>(which), alpha, u, {}};
    key.params.reserve(3 * t.freqs.size());
    key.params.insert(key.params.end(), t.freqs.begin(), t.freqs.end());
    key.params.insert(key.params.end(), t.amps.begin(), t.amps.end());
    key.params.insert(key.params.end(), t.phases.begin(), t.phases.end());

    {
        std::shared_lock lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    const auto g = [&](double v) {
        double acc = 0.0;
        for (std::size_t i = 0; i < t.freqs.size(); ++i) {
            acc += t.amps[i] * std::sin(t.freqs[i] * v + t.phases[i]);
        }
        return acc;
    };
    const auto gp = [&](double v) {
        double acc = 0.0;
        for (std::size_t i = 0; i < t.freqs.size(); ++i) {
            acc += t.amps[i] * t.freqs[i] * std::cos(t.freqs[i] * v + t.phases[i]);
        }
        return acc;
    };

    double value = 0.0;
    switch (which) {
        case FracOp::integral:
            value = frac_quadrature(g, u, alpha);
            break;
        case FracOp::caputo_hadamard:
            value = frac_quadrature(gp, u, 1.0 - alpha);
            break;
        case FracOp::hadamard:
            value = g(0.0) * std::pow(u, -alpha) / gamma_fn(1.0 - alpha) +
                    frac_quadrature(gp, u, 1.0 - alpha);
            break;
    }

    std::unique_lock lock(mutex);
    cache.emplace(std::move(key), value);
    return value;
}

}  // namespace detail

/// Analytic (or reference-quadrature) value of the requested operator at
/// physical point t > a. Ground truth for all kernel tests.
inline double closed_form_deriv(const ClosedFormTag& tag, FracOrder alpha,
                                double t, FracOp which, double a = 1.0) {
    if (!(t > a)) {
        throw std::domain_error("closed_form_deriv: need t > a");
    }
    const double al = alpha.value();
    const double u = std::log(t / a);

    if (const auto* p = std::get_if<LogPower>(&tag.form())) {
        const double beta = p->beta;
        switch (which) {
            case FracOp::integral:
                return gamma_fn(beta) / gamma_fn(beta + al) *
                       std::pow(u, beta + al - 1.0);
            case FracOp::hadamard:
                if (beta == al) return 0.0;  // null function
                if (beta < al) {
                    throw std::domain_error(
                        "closed_form_deriv: log_power requires beta >= alpha");
                }
                return gamma_fn(beta) / gamma_fn(beta - al) *
                       std::pow(u, beta - al - 1.0);
            case FracOp::caputo_hadamard:
                if (beta == 1.0) return 0.0;  // constant
                if (beta < 1.0) {
                    throw std::domain_error(
                        "closed_form_deriv: Caputo form of log_power needs "
                        "beta >= 1");
                }
                return gamma_fn(beta) / gamma_fn(beta - al) *
                       std::pow(u, beta - al - 1.0);
        }
    }
    if (const auto* c = std::get_if<ConstantFn>(&tag.form())) {
        switch (which) {
            case FracOp::integral:
                return c->c * std::pow(u, al) / gamma_fn(al + 1.0);
            case FracOp::hadamard:
                return c->c * std::pow(u, -al) / gamma_fn(1.0 - al);
            case FracOp::caputo_hadamard:
                return 0.0;
        }
    }
    if (const auto* p = std::get_if<LogPolynomial>(&tag.form())) {
        // Term-by-term: u^k is log_power with beta = k + 1.
        double acc = 0.0;
        for (std::size_t k = 0; k < p->coeffs.size(); ++k) {
            const double ck = p->coeffs[k];
            if (ck == 0.0) continue;
            const double kk = static_cast<double>(k);
            switch (which) {
                case FracOp::integral:
                    acc += ck * gamma_fn(kk + 1.0) / gamma_fn(kk + 1.0 + al) *
                           std::pow(u, kk + al);
                    break;
                case FracOp::hadamard:
                    if (k == 0) {
                        acc += ck * std::pow(u, -al) / gamma_fn(1.0 - al);
                    } else {
                        acc += ck * gamma_fn(kk + 1.0) /
                               gamma_fn(kk + 1.0 - al) * std::pow(u, kk - al);
                    }
                    break;
                case FracOp::caputo_hadamard:
                    if (k >= 1) {
                        acc += ck * gamma_fn(kk + 1.0) /
                               gamma_fn(kk + 1.0 - al) * std::pow(u, kk - al);
                    }
                    break;
            }
        }
        return acc;
    }
    const auto& trig = std::get<LogTrig>(tag.form());
    return detail::trig_oracle_cached(trig, al, u, which);
}

}  // namespace hadfrac
