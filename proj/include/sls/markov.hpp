#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sls {

// Character-level n-gram model with additive smoothing. Characters are bytes.
class MarkovSource {
  public:
    MarkovSource(std::size_t order, std::string vocab, std::map<std::string, std::vector<double>> counts,
                 double smoothing, std::string initial_context);

    std::size_t order() const noexcept { return order_; }
    const std::string& vocab() const noexcept { return vocab_; }
    std::size_t vocab_size() const noexcept { return vocab_.size(); }
    double smoothing() const noexcept { return smoothing_; }
    const std::string& initial_context() const noexcept { return initial_context_; }
    const std::map<std::string, std::vector<double>>& counts() const noexcept { return counts_; }

    // Smoothed P(. | context) for an exact in-vocabulary context of length
    // order(); unseen contexts give the uniform row.
    std::vector<double> conditional(const std::string& context) const;

    // Vocabulary position of c, or the nearest code point when c is absent
    // (lower one on a tie). `exact` reports which case applied.
    std::size_t index_of(char c, bool* exact = nullptr) const;

  private:
    std::size_t order_;
    std::string vocab_;
    std::map<std::string, std::vector<double>> counts_;
    double smoothing_;
    std::string initial_context_;
};

// Counts every (context, next char) pair. The vocabulary is the sorted set
// of distinct characters; the first `order` characters become the initial
// generation context. Throws InputError if text.size() <= order or
// smoothing <= 0.
MarkovSource fit_markov(std::string_view text, std::size_t order, double smoothing);

struct MarkovLogits {
    std::vector<double> logits;
    bool fallback_used = false;  // some context char was outside the vocabulary
};

// Log of the smoothed conditional for the last order() characters. Throws
// InputError if context is shorter than order().
MarkovLogits markov_logits(const MarkovSource& source, std::string_view context);

// A few kilobytes of built-in English prose for demo streams.
std::string_view demo_corpus();

} // namespace sls
