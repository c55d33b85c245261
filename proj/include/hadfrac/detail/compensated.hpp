#pragma once

#include <cmath>

namespace hadfrac::detail {

// Neumaier-compensated accumulator. The O(N^2) memory convolutions at
// N = 8192 lose ~3 digits with naive summation; this keeps the error at
// a few ulps independent of N.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

}  // namespace hadfrac::detail
