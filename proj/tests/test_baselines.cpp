#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "sls/baselines.hpp"
#include "sls/entropy.hpp"
#include "sls/error.hpp"

using namespace sls;

namespace {

double softmax_entropy(const std::vector<double>& v) {
    const auto p = softmax(v);
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) h -= x * std::log(x);
    }
    return h;
}

} // namespace

TEST_CASE("greedy picks the first maximum") {
    CHECK(greedy_select(TopKSlice{{3.0, 1.0, 2.0}, {10, 20, 30}}) == 10);
    CHECK(greedy_select(TopKSlice{{1.0, 3.0, 3.0}, {7, 9, 4}}) == 4);
    CHECK_THROWS_AS(greedy_select(TopKSlice{}), InputError);
}

TEST_CASE("temperature scaling") {
    const TopKSlice s{{2.0, 1.0}, {5, 6}, 3};
    CHECK(temperature_scale(s, 1.0) == s);
    const auto half = temperature_scale(s, 0.5);
    CHECK(half.values == std::vector<double>{4.0, 2.0});
    CHECK(half.indices == s.indices);
    CHECK(half.step == 3);
    CHECK_THROWS_AS(temperature_scale(s, 0.0), InputError);
    CHECK_THROWS_AS(temperature_scale(s, -1.0), InputError);
    CHECK_THROWS_AS(temperature_scale(s, std::numeric_limits<double>::infinity()), InputError);

    CounterRng rng(11);
    for (int i = 0; i < 50; ++i) {
        const auto r = sls_test::random_slice(rng, 32, -3.0, 3.0);
        const auto t = temperature_scale(r, 0.7);
        CHECK(compute_entropy(t.values) < compute_entropy(r.values));
        CHECK(greedy_select(t) == greedy_select(r));
    }
}

TEST_CASE("EM-INF config validation") {
    EmInfConfig c;
    CHECK_NOTHROW(c.validate());
    c.steps = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = EmInfConfig{};
    c.learning_rate = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = EmInfConfig{};
    c.entropy_threshold = -0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("EM-INF leaves uniform and confident slices alone") {
    const TopKSlice uniform{{0.5, 0.5, 0.5, 0.5}, {0, 1, 2, 3}};
    CHECK(entropy_minimize(uniform, EmInfConfig{}) == uniform);
    const TopKSlice confident{{20.0, 0.0, -1.0}, {2, 0, 1}};
    CHECK(entropy_minimize(confident, EmInfConfig{}) == confident);
}

TEST_CASE("EM-INF matches a high-precision reference") {
    const TopKSlice s{{1.0, 0.5, 0.0, -0.5}, {3, 1, 0, 2}, 9};
    CHECK(std::abs(compute_entropy(s.values) - 1.245050427463397353) < 1e-12);
    const auto r = entropy_minimize(s, EmInfConfig{});
    const std::vector<double> ref{1.2401317888528880163, 0.46865849771776000853, -0.10074658131548241123,
                                  -0.60804370525516561361};
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(r.values[i] - ref[i]) < 1e-12);
    CHECK(std::abs(compute_entropy(r.values) - 1.162811006404844113685) < 1e-12);
    CHECK(r.indices == s.indices);
    CHECK(r.step == 9);
}

TEST_CASE("entropy gradient agrees with central differences") {
    CounterRng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto v = sls_test::uniform_vector(rng, 16, -3.0, 3.0);
        const auto g = entropy_gradient(v);
        const double h = 1e-5;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto up = v;
            auto down = v;
            up[i] += h;
            down[i] -= h;
            const double fd = (softmax_entropy(up) - softmax_entropy(down)) / (2 * h);
            CHECK(std::abs(fd - g[i]) <= 1e-5 * std::max(1.0, std::abs(g[i])));
        }
    }
}

TEST_CASE("EM-INF lowers entropy on high-entropy slices") {
    CounterRng rng(13);
    int decreased = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = sls_test::random_slice(rng, 32, -2.0, 2.0);
        const auto r = entropy_minimize(s, EmInfConfig{});
        if (softmax_entropy(r.values) < softmax_entropy(s.values)) ++decreased;
    }
    CHECK(decreased >= 95);
}
