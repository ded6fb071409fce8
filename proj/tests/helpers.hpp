#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "sls/rng.hpp"
#include "sls/top_k.hpp"

namespace sls_test {

inline std::vector<double> uniform_vector(sls::CounterRng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = lo + (hi - lo) * rng.uniform();
    return v;
}

// Sorted-descending slice over ids 0..k-1 (shuffled), values in [lo, hi).
inline sls::TopKSlice random_slice(sls::CounterRng& rng, std::size_t k, double lo, double hi, std::uint64_t step = 0) {
    sls::TopKSlice s;
    s.step = step;
    s.values = uniform_vector(rng, k, lo, hi);
    std::sort(s.values.begin(), s.values.end(), std::greater<>());
    s.indices.resize(k);
    std::iota(s.indices.begin(), s.indices.end(), 0);
    for (std::size_t i = k; i-- > 1;) std::swap(s.indices[i], s.indices[rng.next() % (i + 1)]);
    return s;
}

} // namespace sls_test
