#pragma once

#include <optional>
#include <stdexcept>

namespace hadfrac {

enum class Monotonicity { none, nonincreasing_in_u };

/// Sign of a data term over its whole domain, when known by construction.
enum class DataSign { unknown, nonnegative, nonpositive };

class IncompatibleDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PicardOptions {
    /// Initial iterate per time step: previous layer when unset, otherwise
    /// this constant everywhere.
    std::optional<double> initial_guess;
    double tol = 1e-10;
    std::size_t max_iterations = 200;
};

}  // namespace hadfrac
