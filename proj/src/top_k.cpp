#include "sls/top_k.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sls/error.hpp"

namespace sls {

TopKSlice extract_top_k(std::span<const double> full_logits, std::size_t k, std::uint64_t step) {
    if (k == 0) {
        throw ConfigError("top-k size must be positive");
    }
    if (full_logits.size() < k) {
        throw ConfigError("top-k size " + std::to_string(k) + " exceeds vocabulary size " +
                          std::to_string(full_logits.size()));
    }
    if (full_logits.size() > static_cast<std::size_t>(std::numeric_limits<TokenId>::max())) {
        throw InputError("vocabulary too large for 32-bit token ids");
    }
    for (std::size_t i = 0; i < full_logits.size(); ++i) {
        if (!std::isfinite(full_logits[i])) {
            throw InputError("non-finite logit at vocabulary index " + std::to_string(i));
        }
    }

    std::vector<TokenId> order(full_logits.size());
    std::iota(order.begin(), order.end(), TokenId{0});
    auto before = [&](TokenId a, TokenId b) {
        const double va = full_logits[static_cast<std::size_t>(a)];
        const double vb = full_logits[static_cast<std::size_t>(b)];
        return va > vb || (va == vb && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), before);

    TopKSlice out;
    out.step = step;
    out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    out.values.reserve(k);
    for (TokenId id : out.indices) {
        out.values.push_back(full_logits[static_cast<std::size_t>(id)]);
    }
    return out;
}

double logit_gap(const TopKSlice& slice) {
    if (slice.values.empty()) {
        throw InputError("logit gap of an empty slice");
    }
    if (slice.values.size() == 1) {
        return std::numeric_limits<double>::infinity();
    }
    return slice.values[0] - slice.values[1];
}

std::vector<double> scatter_adjusted(const TopKSlice& adjusted, std::size_t vocab_size) {
    if (adjusted.values.size() != adjusted.indices.size()) {
        throw InputError("slice has " + std::to_string(adjusted.values.size()) + " values but " +
                         std::to_string(adjusted.indices.size()) + " indices");
    }
    std::vector<double> full(vocab_size, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < adjusted.indices.size(); ++i) {
        const TokenId id = adjusted.indices[i];
        if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
            throw InputError("token index " + std::to_string(id) + " outside vocabulary of size " +
                             std::to_string(vocab_size));
        }
        full[static_cast<std::size_t>(id)] = adjusted.values[i];
    }
    return full;
}

TokenId greedy_select(const TopKSlice& slice) {
    if (slice.values.empty() || slice.values.size() != slice.indices.size()) {
        throw InputError("greedy selection needs a non-empty, consistent slice");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < slice.values.size(); ++i) {
        const double v = slice.values[i];
        const double b = slice.values[best];
        if (v > b || (v == b && slice.indices[i] < slice.indices[best])) {
            best = i;
        }
    }
    return slice.indices[best];
}

void check_slice(const TopKSlice& slice, std::size_t vocab_size) {
    const auto k = slice.values.size();
    if (slice.indices.size() != k) {
        throw InputError("slice at step " + std::to_string(slice.step) + " has " + std::to_string(k) +
                         " values but " + std::to_string(slice.indices.size()) + " indices");
    }
    std::vector<TokenId> seen(slice.indices);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw InputError("duplicate token index in slice at step " + std::to_string(slice.step));
    }
    if (!seen.empty() && (seen.front() < 0 || static_cast<std::size_t>(seen.back()) >= vocab_size)) {
        throw InputError("token index outside vocabulary in slice at step " + std::to_string(slice.step));
    }
    for (double v : slice.values) {
        if (!std::isfinite(v)) {
            throw InputError("non-finite value in slice at step " + std::to_string(slice.step));
        }
    }
}

} // namespace sls
