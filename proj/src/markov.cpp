#include "sls/markov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sls/error.hpp"

namespace sls {

MarkovSource::MarkovSource(std::size_t order, std::string vocab, std::map<std::string, std::vector<double>> counts,
                           double smoothing, std::string initial_context)
    : order_(order),
      vocab_(std::move(vocab)),
      counts_(std::move(counts)),
      smoothing_(smoothing),
      initial_context_(std::move(initial_context)) {
    if (vocab_.empty()) {
        throw InputError("Markov vocabulary is empty");
    }
    if (!(smoothing_ > 0.0) || !std::isfinite(smoothing_)) {
        throw InputError("Markov smoothing must be a positive number");
    }
    if (initial_context_.size() != order_) {
        throw InputError("initial context must have exactly `order` characters");
    }
    for (const auto& [ctx, row] : counts_) {
        if (ctx.size() != order_ || row.size() != vocab_.size()) {
            throw InputError("Markov count table does not match order/vocabulary");
        }
    }
}

std::size_t MarkovSource::index_of(char c, bool* exact) const {
    const auto it = std::lower_bound(vocab_.begin(), vocab_.end(), c);
    if (it != vocab_.end() && *it == c) {
        if (exact) *exact = true;
        return static_cast<std::size_t>(it - vocab_.begin());
    }
    if (exact) *exact = false;
    if (it == vocab_.end()) {
        return vocab_.size() - 1;
    }
    if (it == vocab_.begin()) {
        return 0;
    }
    const auto hi = static_cast<std::size_t>(it - vocab_.begin());
    const int d_hi = static_cast<unsigned char>(*it) - static_cast<unsigned char>(c);
    const int d_lo = static_cast<unsigned char>(c) - static_cast<unsigned char>(*(it - 1));
    return d_lo <= d_hi ? hi - 1 : hi;
}

std::vector<double> MarkovSource::conditional(const std::string& context) const {
    const double v = static_cast<double>(vocab_.size());
    std::vector<double> row(vocab_.size(), 1.0 / v);
    const auto it = counts_.find(context);
    if (it == counts_.end()) {
        return row;
    }
    double total = 0.0;
    for (double c : it->second) {
        total += c;
    }
    const double denom = total + smoothing_ * v;
    for (std::size_t i = 0; i < row.size(); ++i) {
        row[i] = (it->second[i] + smoothing_) / denom;
    }
    return row;
}

MarkovSource fit_markov(std::string_view text, std::size_t order, double smoothing) {
    if (text.size() <= order) {
        throw InputError("training text has " + std::to_string(text.size()) + " characters, need more than order " +
                         std::to_string(order));
    }
    if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
        throw InputError("Markov smoothing must be a positive number");
    }
    std::string vocab(text);
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

    std::map<std::string, std::vector<double>> counts;
    for (std::size_t pos = order; pos < text.size(); ++pos) {
        auto& row = counts[std::string(text.substr(pos - order, order))];
        if (row.empty()) {
            row.assign(vocab.size(), 0.0);
        }
        const auto at = std::lower_bound(vocab.begin(), vocab.end(), text[pos]);
        row[static_cast<std::size_t>(at - vocab.begin())] += 1.0;
    }
    return MarkovSource(order, std::move(vocab), std::move(counts), smoothing, std::string(text.substr(0, order)));
}

MarkovLogits markov_logits(const MarkovSource& source, std::string_view context) {
    if (context.size() < source.order()) {
        throw InputError("context has " + std::to_string(context.size()) + " characters, Markov order is " +
                         std::to_string(source.order()));
    }
    MarkovLogits out;
    std::string key;
    key.reserve(source.order());
    for (char c : context.substr(context.size() - source.order())) {
        bool exact = true;
        key += source.vocab()[source.index_of(c, &exact)];
        out.fallback_used = out.fallback_used || !exact;
    }
    const auto row = source.conditional(key);
    out.logits.resize(row.size());
    std::transform(row.begin(), row.end(), out.logits.begin(), [](double p) { return std::log(p); });
    return out;
}

} // namespace sls
