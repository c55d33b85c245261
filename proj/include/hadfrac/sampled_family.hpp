#pragma once

/**
 * @file sampled_family.hpp
 * @brief Seeded random C^infinity-in-u test functions.
 *
 * A family fixes a seed, a shape kind and coefficient bounds; item i of the
 * family is produced from SplitMix64 streams derived from (seed, i), so the
 * same (seed, index) pair regenerates the same function bit-for-bit on any
 * platform without replaying earlier items.
 */

#include <cmath>
#include <cstdint>
#include <vector>

#include "hadfrac/grid_function.hpp"
#include "hadfrac/log_grid.hpp"
#include "hadfrac/rng.hpp"

namespace hadfrac {

enum class FamilyKind { log_polynomial, log_trig, mixed };

/// One generated function: polynomial plus trigonometric part in u.
struct SampledFunction {
    std::vector<double> poly;    // sum_k poly[k] u^k; may be empty
    std::vector<double> freqs;   // sum_i amps[i] sin(freqs[i] u + phases[i])
    std::vector<double> amps;
    std::vector<double> phases;

    double eval_u(double u) const {
        double acc = 0.0;
        for (std::size_t k = poly.size(); k-- > 0;) acc = acc * u + poly[k];
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            acc += amps[i] * std::sin(freqs[i] * u + phases[i]);
        }
        return acc;
    }

    GridFunction materialize(const LogGrid& grid) const {
        return GridFunction::sample_log(grid,
                                        [&](double u) { return eval_u(u); });
    }
};

struct SampledFamily {
    std::uint64_t seed = 0;
    FamilyKind kind = FamilyKind::mixed;
    int min_degree = 1;
    int max_degree = 6;
    int min_terms = 1;
    int max_terms = 4;
    double coeff_max = 2.0;
    double freq_max = 3.0;

    SampledFunction sample(std::uint64_t index) const {
        SplitMix64 rng(derive_seed(seed, index));
        SampledFunction f;
        const bool want_poly = kind != FamilyKind::log_trig;
        const bool want_trig = kind != FamilyKind::log_polynomial;
        if (want_poly) {
            const int degree =
                min_degree +
                static_cast<int>(rng.next_below(
                    static_cast<std::uint64_t>(max_degree - min_degree + 1)));
            f.poly.resize(static_cast<std::size_t>(degree) + 1);
            for (auto& c : f.poly) c = rng.uniform(-coeff_max, coeff_max);
        }
        if (want_trig) {
            const int terms =
                min_terms +
                static_cast<int>(rng.next_below(
                    static_cast<std::uint64_t>(max_terms - min_terms + 1)));
            for (int i = 0; i < terms; ++i) {
                f.freqs.push_back(rng.uniform(0.25, freq_max));
                f.amps.push_back(rng.uniform(-coeff_max, coeff_max));
                f.phases.push_back(rng.uniform(0.0, 6.283185307179586));
            }
        }
        return f;
    }
};

}  // namespace hadfrac
