#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "hadfrac/closed_form.hpp"
#include "hadfrac/grid_function.hpp"
#include "hadfrac/operators.hpp"

using namespace hadfrac;

namespace {

double apply_kernel(const GridFunction& f, FracOrder alpha, FracOp which,
                    std::size_t k) {
    switch (which) {
        case FracOp::integral:
            return hadamard_integral_at(f, alpha, k);
        case FracOp::caputo_hadamard:
            return caputo_hadamard_at(f, alpha, k);
        case FracOp::hadamard:
            return riemann_hadamard_split_at(f, alpha, k);
    }
    return 0.0;
}

// Max relative error against the closed-form oracle over nodes t >= 1.1,
// probed at a fixed number of nodes to keep the quadrature-backed oracles
// cheap.
double oracle_error(const ClosedFormTag& tag, FracOrder alpha, FracOp which,
                    std::size_t n) {
    const LogGrid grid(1.0, std::exp(2.0), n);
    const auto f = tag.sample(grid);
    double worst = 0.0;
    const std::size_t probes = 16;
    for (std::size_t p = 0; p <= probes; ++p) {
        const std::size_t k = grid.size() - 1 - (p * (n / 2)) / probes;
        if (grid.node(k) < 1.1) continue;
        const double oracle =
            closed_form_deriv(tag, alpha, grid.node(k), which);
        const double got = apply_kernel(f, alpha, which, k);
        worst = std::max(worst,
                         std::abs(got - oracle) / std::max(1e-12, std::abs(oracle)));
    }
    return worst;
}

}  // namespace

TEST_CASE("closed forms: worked values", "[closed_form]") {
    const FracOrder half(0.5);
    // Property 2.6, beta = 2, t = e: Gamma(2)/Gamma(1.5).
    CHECK(closed_form_deriv(ClosedFormTag(LogPower{2.0}), half, std::exp(1.0),
                            FracOp::hadamard) ==
          Catch::Approx(1.1283791670955126).epsilon(1e-12));
    // Property 2.7: the null function.
    CHECK(closed_form_deriv(ClosedFormTag(LogPower{0.5}), half, 1.7,
                            FracOp::hadamard) == 0.0);
    // Constants have vanishing Caputo derivative.
    CHECK(closed_form_deriv(ClosedFormTag(ConstantFn{7.0}), FracOrder(0.3), 2.0,
                            FracOp::caputo_hadamard) == 0.0);
}

TEST_CASE("closed forms: rejected combinations", "[closed_form]") {
    CHECK_THROWS_AS(ClosedFormTag(LogPower{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ClosedFormTag(LogPolynomial{{}}), std::invalid_argument);
    CHECK_THROWS_AS(ClosedFormTag(LogTrig{{1.0}, {1.0, 2.0}, {0.0}}),
                    std::invalid_argument);
    // beta < alpha is undefined for the Hadamard form (only beta = alpha,
    // the null function, is known).
    CHECK_THROWS_AS(closed_form_deriv(ClosedFormTag(LogPower{0.2}),
                                      FracOrder(0.5), 2.0, FracOp::hadamard),
                    std::domain_error);
    CHECK_THROWS_AS(closed_form_deriv(ClosedFormTag(LogPower{0.8}),
                                      FracOrder(0.5), 2.0,
                                      FracOp::caputo_hadamard),
                    std::domain_error);
}

TEST_CASE("quadrature oracle agrees with closed forms where both exist",
          "[closed_form]") {
    // The trig reference path is generic quadrature; aim it at a smooth
    // polynomial-equivalent instead to cross-check it against the exact
    // formulas: sin(w u) ~ series, so instead compare on the trig function
    // against a fine-grid kernel later. Here: validate the quadrature path
    // by integrating the constant embedded as a zero-frequency trig term.
    const ClosedFormTag trig(LogTrig{{0.0}, {3.0}, {1.5707963267948966}});
    // f == 3 sin(pi/2) = 3, constant.
    const ClosedFormTag constant(ConstantFn{3.0});
    for (double a : {0.25, 0.5, 0.75}) {
        for (FracOp op :
             {FracOp::integral, FracOp::caputo_hadamard, FracOp::hadamard}) {
            const double got =
                closed_form_deriv(trig, FracOrder(a), 2.5, op);
            const double expected =
                closed_form_deriv(constant, FracOrder(a), 2.5, op);
            REQUIRE(got == Catch::Approx(expected).margin(1e-9));
        }
    }
}

TEST_CASE("trig oracle cache is safe under concurrent evaluation",
          "[closed_form]") {
    const ClosedFormTag tag(LogTrig{{1.1, 2.2}, {0.7, -0.4}, {0.2, 1.9}});
    const FracOrder alpha(0.35);
    const double reference =
        closed_form_deriv(tag, alpha, 3.0, FracOp::caputo_hadamard);
    std::vector<std::thread> workers;
    std::atomic<int> mismatches{0};
    for (int w = 0; w < 8; ++w) {
        workers.emplace_back([&] {
            for (int rep = 0; rep < 50; ++rep) {
                const double t = 1.5 + 0.1 * (rep % 20);
                const double v =
                    closed_form_deriv(tag, alpha, t, FracOp::caputo_hadamard);
                if (!std::isfinite(v)) ++mismatches;
                if (closed_form_deriv(tag, alpha, 3.0,
                                      FracOp::caputo_hadamard) != reference) {
                    ++mismatches;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(mismatches.load() == 0);
}

TEST_CASE("oracle agreement with L1-theory convergence order",
          "[closed_form][convergence]") {
    // Moderate trig frequencies: the L1 pointwise error mixes c1 h^(2-a)
    // with an opposing c2 h^2 term proportional to higher derivatives, and
    // at small alpha the near-equal exponents make high-frequency data sit
    // pre-asymptotic at these resolutions.
    const std::vector<ClosedFormTag> tags = {
        ClosedFormTag(LogPower{2.5}),
        ClosedFormTag(ConstantFn{1.7}),
        ClosedFormTag(LogPolynomial{{0.4, -1.1, 0.6, 0.05}}),
        ClosedFormTag(LogTrig{{0.8, 1.3}, {1.0, 0.6}, {0.3, 1.1}}),
    };
    const std::vector<std::size_t> ladder = {512, 1024, 2048, 4096};

    for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const FracOrder alpha(a);
        for (const auto& tag : tags) {
            for (FracOp op : {FracOp::integral, FracOp::caputo_hadamard,
                              FracOp::hadamard}) {
                std::vector<double> errs;
                for (std::size_t n : ladder) {
                    errs.push_back(oracle_error(tag, alpha, op, n));
                }
                const bool saturated = errs.front() <= 1e-12;
                if (saturated) {
                    SUCCEED();
                    continue;
                }
                // Observed order = least-squares slope of log2 err vs
                // log2 n over the ladder.
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                for (std::size_t i = 0; i < ladder.size(); ++i) {
                    const double x = std::log2(static_cast<double>(ladder[i]));
                    const double y = std::log2(errs[i]);
                    sx += x;
                    sy += y;
                    sxx += x * x;
                    sxy += x * y;
                }
                const double m = static_cast<double>(ladder.size());
                const double order =
                    -(m * sxy - sx * sy) / (m * sxx - sx * sx);
                INFO("tag=" << tag.describe() << " alpha=" << a
                            << " op=" << static_cast<int>(op)
                            << " order=" << order);
                REQUIRE(order >= 2.0 - a - 0.15);
            }
        }
    }
}
