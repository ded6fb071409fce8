#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sls/markov.hpp"
#include "sls/trace.hpp"

namespace sls {

enum class SamplerKind { greedy, categorical };

// "greedy" or "categorical"; anything else is a ConfigError.
SamplerKind parse_sampler(const std::string& tag);
const char* sampler_name(SamplerKind kind);

class CounterRng;

// Greedy argmax (lowest id on ties) or one categorical draw from softmax of a
// full-vocabulary logit vector. -infinity entries carry zero mass, so a
// scattered top-K vector samples from the renormalized top-K distribution.
TokenId sample_token(std::span<const double> full_logits, SamplerKind kind, CounterRng& rng);

struct StreamOptions {
    std::size_t k = 32;
    std::size_t length = 64;
    std::uint64_t seed = 0;
    std::string sampler = "categorical";
};

// Autoregressive synthetic stream: each step records the top-K slice of the
// source logits (quantized to 32-bit) and the token drawn from that slice. Steps are
// numbered from 1. Deterministic in (source, options).
std::vector<TraceRecord> generate_stream(const MarkovSource& source, const StreamOptions& options);

} // namespace sls
