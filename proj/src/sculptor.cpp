#include "sls/sculptor.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sls/entropy.hpp"
#include "sls/error.hpp"
#include "sls/spectral.hpp"

namespace sls {

double sigmoid(double x) noexcept {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double adaptive_alpha(double entropy, double gap, const SlsConfig& config) {
    const double arg = (entropy - config.h_0()) / config.s_h() - (config.d_0() - gap) / config.s_d();
    return 1.0 + sigmoid(arg) * (config.alpha_max() - 1.0);
}

StepResult sls_step(const TopKSlice& slice, SlidingLogitBuffer& buffer, const SlsConfig& config) {
    if (slice.values.size() != config.k() || slice.indices.size() != config.k()) {
        throw InputError("slice at step " + std::to_string(slice.step) + " has " + std::to_string(slice.values.size()) +
                         " values and " + std::to_string(slice.indices.size()) + " indices, config k is " +
                         std::to_string(config.k()));
    }
    if (buffer.width() != config.k() || buffer.capacity() != config.window()) {
        throw InputError("buffer shape does not match the config window/k");
    }

    StepResult result{slice, {}};
    auto& diag = result.diagnostics;
    diag.step = slice.step;
    diag.entropy_pre = compute_entropy(slice.values, config.epsilon());
    diag.gap = logit_gap(slice);
    diag.entropy_post = diag.entropy_pre;

    buffer.push(slice.values);

    const bool high_entropy = !config.entropy_gate() || diag.entropy_pre > config.h_thres();
    if (!high_entropy || buffer.size() < 2) {
        return result;
    }

    const auto centered = center_buffer(buffer.matrix());
    const auto basis = spectral_basis(centered, config.rank(), config.svd_tol());
    if (!basis) {
        return result;
    }

    const double alpha = config.fixed_alpha() ? *config.fixed_alpha() : adaptive_alpha(diag.entropy_pre, diag.gap, config);
    const Eigen::Map<const Eigen::VectorXd> z(slice.values.data(), static_cast<Eigen::Index>(slice.values.size()));
    const auto split = project_split(z, *basis);
    const Eigen::VectorXd adjusted = recombine(split.in_span, split.residual, alpha, config.gamma());

    result.adjusted.values.assign(adjusted.data(), adjusted.data() + adjusted.size());
    buffer.overwrite_newest(result.adjusted.values);

    diag.gate_fired = true;
    diag.alpha = alpha;
    diag.m_eff = static_cast<std::size_t>(basis->rank());
    diag.singular_values.assign(basis->singular_values.data(),
                                basis->singular_values.data() + basis->singular_values.size());
    diag.entropy_post = compute_entropy(result.adjusted.values, config.epsilon());
    return result;
}

SpectralSculptor::SpectralSculptor(SlsConfig config)
    : config_(std::move(config)), buffer_(config_.window(), config_.k()) {}

SlsProcessor::SlsProcessor(std::size_t vocab_size, SlsConfig config)
    : vocab_size_(vocab_size), sculptor_(std::move(config)) {
    if (vocab_size_ < sculptor_.config().k()) {
        throw ConfigError("vocabulary size " + std::to_string(vocab_size_) + " is smaller than k " +
                          std::to_string(sculptor_.config().k()));
    }
}

std::vector<double> SlsProcessor::process(std::span<const double> scores) {
    if (scores.size() != vocab_size_) {
        throw InputError("scores have length " + std::to_string(scores.size()) + ", processor expects " +
                         std::to_string(vocab_size_));
    }
    const auto slice = extract_top_k(scores, sculptor_.config().k(), step_ + 1);
    auto result = sculptor_.step(slice);
    ++step_;
    last_ = result.diagnostics;
    last_slice_ = std::move(result.adjusted);
    return scatter_adjusted(last_slice_, vocab_size_);
}

void SlsProcessor::reset() noexcept {
    sculptor_.reset();
    step_ = 0;
    last_.reset();
    last_slice_ = {};
}

} // namespace sls
