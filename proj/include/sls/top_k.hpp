#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sls {

using TokenId = std::int32_t;

// One decode step's top-K logits. `values` is descending on extraction; after
// an SLS adjustment the values keep their positional pairing with `indices`
// and may no longer be sorted.
struct TopKSlice {
    std::vector<double> values;
    std::vector<TokenId> indices;
    std::uint64_t step = 0;

    std::size_t size() const noexcept { return values.size(); }
    bool operator==(const TopKSlice&) const = default;
};

// The k largest logits in descending order. Ties go to the lower vocabulary
// index. Throws ConfigError if k is zero or exceeds the vocabulary, InputError
// on a non-finite logit.
TopKSlice extract_top_k(std::span<const double> full_logits, std::size_t k, std::uint64_t step = 0);

// values[0] - values[1]; +infinity for a single-entry slice.
double logit_gap(const TopKSlice& slice);

// Full-vocabulary vector with the slice written at its indices and -infinity
// everywhere else.
std::vector<double> scatter_adjusted(const TopKSlice& adjusted, std::size_t vocab_size);

// Index of the largest value, lowest vocabulary id among exact ties. Works on
// unsorted slices.
TokenId greedy_select(const TopKSlice& slice);

// Throws InputError unless sizes match, indices are distinct and inside
// [0, vocab_size), and values are finite.
void check_slice(const TopKSlice& slice, std::size_t vocab_size);

} // namespace sls
