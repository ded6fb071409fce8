#pragma once

#include <cstddef>
#include <optional>

namespace sls {

// Raw hyperparameters. Defaults are the reference settings (K=512, T=16,
// m=8, H_thres=0.5 nats, alpha_max=1.5, gamma=0.85, s_H=0.5, s_D=1.0,
// H_0=0, D_0=2).
struct SlsParams {
    std::size_t k = 512;
    std::size_t window = 16;
    std::size_t rank = 8;
    double h_thres = 0.5;
    double alpha_max = 1.5;
    double gamma = 0.85;
    double s_h = 0.5;
    double s_d = 1.0;
    double h_0 = 0.0;
    double d_0 = 2.0;
    double epsilon = 1e-12;
    double svd_tol = 1e-10;

    // Ablation switches, both off by default.
    bool entropy_gate = true;            // false: fire whenever the buffer is non-degenerate
    std::optional<double> fixed_alpha;   // replaces the adaptive scale when set

    bool operator==(const SlsParams&) const = default;
};

// Validated, immutable configuration. Construction throws ConfigError on any
// out-of-range field, so a live SlsConfig is always usable.
class SlsConfig {
  public:
    SlsConfig() : SlsConfig(SlsParams{}) {}
    explicit SlsConfig(const SlsParams& params);

    const SlsParams& params() const noexcept { return params_; }

    std::size_t k() const noexcept { return params_.k; }
    std::size_t window() const noexcept { return params_.window; }
    std::size_t rank() const noexcept { return params_.rank; }
    double h_thres() const noexcept { return params_.h_thres; }
    double alpha_max() const noexcept { return params_.alpha_max; }
    double gamma() const noexcept { return params_.gamma; }
    double s_h() const noexcept { return params_.s_h; }
    double s_d() const noexcept { return params_.s_d; }
    double h_0() const noexcept { return params_.h_0; }
    double d_0() const noexcept { return params_.d_0; }
    double epsilon() const noexcept { return params_.epsilon; }
    double svd_tol() const noexcept { return params_.svd_tol; }
    bool entropy_gate() const noexcept { return params_.entropy_gate; }
    const std::optional<double>& fixed_alpha() const noexcept { return params_.fixed_alpha; }

  private:
    SlsParams params_;
};

} // namespace sls
