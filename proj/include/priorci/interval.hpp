#ifndef PRIORCI_INTERVAL_HPP
#define PRIORCI_INTERVAL_HPP

#include <stdexcept>

namespace priorci {

/// Closed real interval [lower, upper]; the output type of every interval rule.
struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    double length() const { return upper - lower; }

    bool contains(double v) const { return lower <= v && v <= upper; }

    /// Endpoint-wise scaling by a positive factor (theta scale -> mu scale).
    Interval scaled(double factor) const { return {lower * factor, upper * factor}; }
};

inline Interval make_interval(double lower, double upper) {
    if (!(lower <= upper)) {
        throw std::invalid_argument("Interval: lower must not exceed upper");
    }
    return {lower, upper};
}

}  // namespace priorci

#endif
