#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sls/config.hpp"
#include "sls/sliding_buffer.hpp"
#include "sls/top_k.hpp"

namespace sls {

// Per-step telemetry. alpha/m_eff/singular_values are only populated on
// gated steps; on other steps entropy_post == entropy_pre.
struct StepDiagnostics {
    std::uint64_t step = 0;
    double entropy_pre = 0.0;
    double gap = 0.0;
    bool gate_fired = false;
    std::optional<double> alpha;
    std::optional<std::size_t> m_eff;
    std::vector<double> singular_values;
    double entropy_post = 0.0;

    bool operator==(const StepDiagnostics&) const = default;
};

struct StepResult {
    TopKSlice adjusted;
    StepDiagnostics diagnostics;
};

double sigmoid(double x) noexcept;

// alpha = 1 + sigmoid((h - h_0)/s_h - (d_0 - gap)/s_d) * (alpha_max - 1).
// A gap of +infinity is taken as the limit (alpha_max).
double adaptive_alpha(double entropy, double gap, const SlsConfig& config);

// One SLS step on a single stream.
//
// The raw values are pushed into `buffer` first, so the decomposition sees
// z_t as its newest row. The step fires only when the top-K entropy exceeds
// h_thres, the buffer holds at least two rows and the centered buffer has a
// leading singular value >= svd_tol. When it fires, z_t is split against the
// leading right singular vectors, recombined as gamma * residual +
// alpha * in_span, and the newest buffer row is overwritten with the result.
// Adjusted values stay paired with the original indices.
StepResult sls_step(const TopKSlice& slice, SlidingLogitBuffer& buffer, const SlsConfig& config);

// Owns the config and buffer of one decode stream. Movable, not shareable.
class SpectralSculptor {
  public:
    explicit SpectralSculptor(SlsConfig config);

    StepResult step(const TopKSlice& slice) { return sls_step(slice, buffer_, config_); }
    void reset() noexcept { buffer_.clear(); }

    const SlsConfig& config() const noexcept { return config_; }
    const SlidingLogitBuffer& buffer() const noexcept { return buffer_; }

  private:
    SlsConfig config_;
    SlidingLogitBuffer buffer_;
};

// Full-vocabulary front end used by host inference stacks:
// extract_top_k -> sls_step -> scatter_adjusted. Non-top-K positions come
// back as -infinity.
class SlsProcessor {
  public:
    SlsProcessor(std::size_t vocab_size, SlsConfig config);

    // Throws InputError (state untouched) when scores.size() != vocab_size.
    std::vector<double> process(std::span<const double> scores);

    // Empties the buffer and zeroes the step counter.
    void reset() noexcept;

    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::uint64_t steps() const noexcept { return step_; }
    const std::optional<StepDiagnostics>& last_diagnostics() const noexcept { return last_; }
    const TopKSlice& last_slice() const noexcept { return last_slice_; }

  private:
    std::size_t vocab_size_;
    SpectralSculptor sculptor_;
    std::uint64_t step_ = 0;
    std::optional<StepDiagnostics> last_;
    TopKSlice last_slice_;
};

} // namespace sls
