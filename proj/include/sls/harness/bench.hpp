#pragma once

#include <cstdint>

#include <json.hpp>

#include "sls/config.hpp"

namespace sls::harness {

struct LatencyStats {
    std::size_t steps = 0;
    double gate_rate = 0.0;
    double median_us = 0.0;
    double p99_us = 0.0;
    double mean_us = 0.0;
};

struct BenchReport {
    LatencyStats gated;     // high-entropy stream, every timed step fires
    LatencyStats gate_off;  // low-entropy stream, entropy-only path
};

// Times sls_step on synthetic rank-aligned slices. The buffer is warmed so
// that every timed step of the gated stream has T_b >= 2.
BenchReport run_bench(const SlsConfig& config, std::size_t steps, std::uint64_t seed);

nlohmann::ordered_json bench_json(const nlohmann::ordered_json& config_echo, const BenchReport& report);

} // namespace sls::harness
