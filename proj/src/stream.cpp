#include "sls/stream.hpp"

#include <string>

#include "sls/entropy.hpp"
#include "sls/error.hpp"
#include "sls/rng.hpp"

namespace sls {

SamplerKind parse_sampler(const std::string& tag) {
    if (tag == "greedy") return SamplerKind::greedy;
    if (tag == "categorical") return SamplerKind::categorical;
    throw ConfigError("unknown sampler \"" + tag + "\" (expected greedy or categorical)");
}

const char* sampler_name(SamplerKind kind) {
    return kind == SamplerKind::greedy ? "greedy" : "categorical";
}

TokenId sample_token(std::span<const double> full_logits, SamplerKind kind, CounterRng& rng) {
    if (full_logits.empty()) {
        throw InputError("cannot sample from an empty logit vector");
    }
    if (kind == SamplerKind::greedy) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < full_logits.size(); ++i) {
            if (full_logits[i] > full_logits[best]) {
                best = i;
            }
        }
        return static_cast<TokenId>(best);
    }
    const auto p = softmax(full_logits);
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            last_positive = i;
        }
        cumulative += p[i];
        if (u < cumulative) {
            return static_cast<TokenId>(i);
        }
    }
    // u fell into the rounding slack above the final partial sum
    return static_cast<TokenId>(last_positive);
}

std::vector<TraceRecord> generate_stream(const MarkovSource& source, const StreamOptions& options) {
    const SamplerKind sampler = parse_sampler(options.sampler);
    if (options.length == 0) {
        throw InputError("stream length must be at least 1");
    }
    if (options.k == 0 || options.k > source.vocab_size()) {
        throw ConfigError("k " + std::to_string(options.k) + " must lie in [1, " +
                          std::to_string(source.vocab_size()) + "] for this source");
    }

    CounterRng rng(options.seed);
    std::string context = source.initial_context();
    std::vector<TraceRecord> records;
    records.reserve(options.length);
    for (std::size_t t = 1; t <= options.length; ++t) {
        const auto logits = quantize_f32(markov_logits(source, context).logits);
        auto slice = extract_top_k(logits, options.k, t);
        const TokenId token = sample_token(scatter_adjusted(slice, logits.size()), sampler, rng);
        records.push_back(TraceRecord{t, std::move(slice.indices), std::move(slice.values), token});
        context += source.vocab()[static_cast<std::size_t>(token)];
        if (context.size() > source.order()) {
            context.erase(0, context.size() - source.order());
        }
    }
    return records;
}

} // namespace sls
