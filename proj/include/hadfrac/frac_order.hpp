#pragma once

#include <stdexcept>
#include <string>

namespace hadfrac {

/// Fractional order alpha, restricted to the open interval (0, 1).
///
/// Strong type so an order can never be confused with a grid parameter or a
/// coefficient; construction rejects everything outside (0, 1), including
/// NaN.
class FracOrder {
public:
    explicit FracOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::domain_error(
                "FracOrder: alpha must lie strictly inside (0, 1), got " +
                std::to_string(alpha));
        }
    }

    double value() const { return alpha_; }

    /// The conjugate order 1 - alpha (also in (0, 1)).
    FracOrder complement() const { return FracOrder(1.0 - alpha_); }

private:
    double alpha_;
};

}  // namespace hadfrac
