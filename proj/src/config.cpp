#include "sls/config.hpp"

#include <cmath>
#include <string>

#include "sls/error.hpp"

namespace sls {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ConfigError("invalid SLS config: " + what);
    }
}

bool finite(double x) { return std::isfinite(x); }

} // namespace

SlsConfig::SlsConfig(const SlsParams& p) : params_(p) {
    require(p.k >= 1, "k must be positive");
    require(p.window >= 1, "window must be positive");
    require(p.rank >= 1, "rank must be positive");
    require(finite(p.h_thres) && p.h_thres >= 0.0, "h_thres must be >= 0");
    require(finite(p.alpha_max) && p.alpha_max > 1.0, "alpha_max must be > 1");
    require(finite(p.gamma) && p.gamma > 0.0 && p.gamma <= 1.0, "gamma must lie in (0, 1]");
    require(finite(p.s_h) && p.s_h > 0.0, "s_h must be > 0");
    require(finite(p.s_d) && p.s_d > 0.0, "s_d must be > 0");
    require(finite(p.h_0), "h_0 must be finite");
    require(finite(p.d_0), "d_0 must be finite");
    require(finite(p.epsilon) && p.epsilon > 0.0, "epsilon must be > 0");
    require(finite(p.svd_tol) && p.svd_tol > 0.0, "svd_tol must be > 0");
    if (p.fixed_alpha) {
        require(finite(*p.fixed_alpha) && *p.fixed_alpha >= 1.0, "fixed_alpha must be >= 1");
    }
}

} // namespace sls
