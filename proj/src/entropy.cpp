#include "sls/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "sls/error.hpp"

namespace sls {

std::vector<double> softmax(std::span<const double> values) {
    if (values.empty()) {
        throw InputError("softmax of an empty vector");
    }
    const double max_v = *std::max_element(values.begin(), values.end());
    std::vector<double> p(values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        p[i] = std::exp(values[i] - max_v);
        sum += p[i];
    }
    for (double& x : p) {
        x /= sum;
    }
    return p;
}

double compute_entropy(std::span<const double> values, double epsilon) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InputError("entropy of a non-finite logit vector");
        }
    }
    const auto p = softmax(values);
    double h = 0.0;
    for (double pi : p) {
        h -= pi * std::log(pi + epsilon);
    }
    return h;
}

} // namespace sls
