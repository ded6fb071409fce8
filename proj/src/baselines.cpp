#include "sls/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sls/entropy.hpp"
#include "sls/error.hpp"

namespace sls {

void EmInfConfig::validate() const {
    if (steps < 1) {
        throw ConfigError("EM-INF steps must be positive");
    }
    if (!std::isfinite(learning_rate) || learning_rate <= 0.0) {
        throw ConfigError("EM-INF learning rate must be > 0");
    }
    if (!std::isfinite(entropy_threshold) || entropy_threshold < 0.0) {
        throw ConfigError("EM-INF entropy threshold must be >= 0");
    }
}

TopKSlice temperature_scale(const TopKSlice& slice, double tau) {
    if (!std::isfinite(tau) || tau <= 0.0) {
        throw InputError("temperature must be a positive finite number");
    }
    TopKSlice out = slice;
    if (tau == 1.0) {
        return out;
    }
    for (double& v : out.values) {
        v /= tau;
    }
    return out;
}

std::vector<double> entropy_gradient(std::span<const double> values) {
    const auto p = softmax(values);
    // log p from the log-sum-exp form so tiny probabilities keep a finite log
    const double max_v = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) {
        sum += std::exp(v - max_v);
    }
    const double log_z = max_v + std::log(sum);
    std::vector<double> logp(p.size());
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        logp[i] = values[i] - log_z;
        h -= p[i] * logp[i];
    }
    std::vector<double> grad(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        grad[i] = -p[i] * (logp[i] + h);
    }
    return grad;
}

TopKSlice entropy_minimize(const TopKSlice& slice, const EmInfConfig& config) {
    config.validate();
    if (compute_entropy(slice.values) <= config.entropy_threshold) {
        return slice;
    }
    TopKSlice out = slice;
    for (int it = 0; it < config.steps; ++it) {
        const auto grad = entropy_gradient(out.values);
        for (std::size_t i = 0; i < grad.size(); ++i) {
            out.values[i] -= config.learning_rate * grad[i];
            if (!std::isfinite(out.values[i])) {
                throw NumericalError("entropy minimization produced a non-finite logit at iteration " +
                                     std::to_string(it + 1) + " (step " + std::to_string(slice.step) + ")");
            }
        }
    }
    return out;
}

} // namespace sls
