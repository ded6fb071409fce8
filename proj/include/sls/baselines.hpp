#pragma once

#include <vector>

#include "sls/top_k.hpp"

namespace sls {

// Token-level entropy minimization settings (EM-INF style).
struct EmInfConfig {
    int steps = 10;
    double learning_rate = 0.1;
    double entropy_threshold = 0.3;

    void validate() const;
};

// values / tau. Throws InputError for tau <= 0 or non-finite tau.
TopKSlice temperature_scale(const TopKSlice& slice, double tau);

// dH/dv_i = -p_i (log p_i + H) for H = -sum p log p, p = softmax(v).
std::vector<double> entropy_gradient(std::span<const double> values);

// Plain gradient descent on the softmax entropy of the slice values, run only
// when the entropy exceeds the threshold. Indices are untouched. Throws
// NumericalError naming the iteration if the iterate leaves the finite range.
TopKSlice entropy_minimize(const TopKSlice& slice, const EmInfConfig& config);

} // namespace sls
