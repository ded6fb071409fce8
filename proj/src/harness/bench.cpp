#include "sls/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>

#include "sls/error.hpp"
#include "sls/rng.hpp"
#include "sls/sculptor.hpp"

namespace sls::harness {

namespace {

constexpr std::size_t kPoolSize = 256;

std::vector<TopKSlice> make_pool(std::size_t k, std::uint64_t seed, double lead) {
    CounterRng rng(seed);
    std::vector<TopKSlice> pool(kPoolSize);
    for (auto& slice : pool) {
        slice.values.resize(k);
        slice.indices.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            slice.values[i] = 6.0 * rng.uniform() - 3.0;
            slice.indices[i] = static_cast<TokenId>(i);
        }
        std::sort(slice.values.begin(), slice.values.end(), std::greater<>());
        slice.values[0] += lead;
    }
    return pool;
}

LatencyStats time_stream(const SlsConfig& config, const std::vector<TopKSlice>& pool, std::size_t steps) {
    SpectralSculptor sculptor(config);
    // Warm-up so the first timed step already has T_b >= 2.
    sculptor.step(pool.back());

    std::vector<double> us(steps);
    std::size_t fired = 0;
    using clock = std::chrono::steady_clock;
    for (std::size_t t = 0; t < steps; ++t) {
        TopKSlice slice = pool[t % pool.size()];
        slice.step = t + 2;
        const auto t0 = clock::now();
        const auto result = sculptor.step(slice);
        const auto t1 = clock::now();
        us[t] = std::chrono::duration<double, std::micro>(t1 - t0).count();
        fired += result.diagnostics.gate_fired ? 1 : 0;
    }

    LatencyStats stats;
    stats.steps = steps;
    stats.gate_rate = static_cast<double>(fired) / static_cast<double>(steps);
    stats.mean_us = std::accumulate(us.begin(), us.end(), 0.0) / static_cast<double>(steps);
    std::sort(us.begin(), us.end());
    stats.median_us = steps % 2 ? us[steps / 2] : 0.5 * (us[steps / 2 - 1] + us[steps / 2]);
    const auto p99 = static_cast<std::size_t>(0.99 * static_cast<double>(steps - 1) + 0.5);
    stats.p99_us = us[std::min(p99, steps - 1)];
    return stats;
}

nlohmann::ordered_json stats_json(const LatencyStats& s) {
    nlohmann::ordered_json j;
    j["steps"] = s.steps;
    j["gate_rate"] = s.gate_rate;
    j["median_us"] = s.median_us;
    j["p99_us"] = s.p99_us;
    j["mean_us"] = s.mean_us;
    return j;
}

} // namespace

BenchReport run_bench(const SlsConfig& config, std::size_t steps, std::uint64_t seed) {
    if (steps == 0) {
        throw UsageError("bench needs at least one step");
    }
    BenchReport report;
    report.gated = time_stream(config, make_pool(config.k(), seed, 0.0), steps);
    report.gate_off = time_stream(config, make_pool(config.k(), seed ^ 0x5bd1e995ULL, 40.0), steps);
    return report;
}

nlohmann::ordered_json bench_json(const nlohmann::ordered_json& config_echo, const BenchReport& report) {
    nlohmann::ordered_json j;
    j["report"] = "bench";
    j["config"] = config_echo;
    j["gated"] = stats_json(report.gated);
    j["gate_off"] = stats_json(report.gate_off);
    return j;
}

} // namespace sls::harness
