#pragma once

#include <stdexcept>
#include <string>

namespace kpeaks {

struct EmptyInput : std::invalid_argument {
    EmptyInput() : std::invalid_argument("empty input: at least one element is required") {}
};

// Lines must be expressible as y = a*x + b; a slope with zero denominator has no
// such form and is rejected rather than rotated.
struct VerticalLineUnrepresentable : std::invalid_argument {
    VerticalLineUnrepresentable()
        : std::invalid_argument("vertical line unrepresentable: slope denominator is zero") {}
};

struct RTooLarge : std::invalid_argument {
    RTooLarge(long r, long n)
        : std::invalid_argument("partition class count r=" + std::to_string(r) +
                                " exceeds point count n=" + std::to_string(n)) {}
};

struct Disconnected : std::invalid_argument {
    Disconnected() : std::invalid_argument("graph is not connected") {}
};

struct ZeroDenominator : std::invalid_argument {
    ZeroDenominator() : std::invalid_argument("rational with zero denominator") {}
};

// Malformed or contract-violating instance files.
struct InvalidInstance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kpeaks
