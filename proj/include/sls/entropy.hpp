#pragma once

#include <span>
#include <vector>

namespace sls {

inline constexpr double kDefaultEpsilon = 1e-12;

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> values);

// H = -sum_i p_i log(p_i + eps), p = softmax(values), natural log. Throws
// InputError on non-finite input or an empty vector.
double compute_entropy(std::span<const double> values, double epsilon = kDefaultEpsilon);

} // namespace sls
