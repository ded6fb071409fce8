#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sls/harness/methods.hpp"
#include "sls/stream.hpp"
#include "sls/trace.hpp"

namespace sls::harness {

struct RunSummary {
    std::size_t steps_total = 0;
    std::size_t steps_gated = 0;
    double mean_entropy_pre = 0.0;
    std::optional<double> mean_entropy_post_on_gated_steps;
    std::optional<double> mean_alpha_on_gated_steps;
    double wall_time_per_step_us = 0.0;  // timing section only
};

struct RunReport {
    std::string method;
    std::string sampler;
    std::uint64_t seed = 0;
    std::string trace_label;
    nlohmann::ordered_json config_echo;
    std::vector<StepDiagnostics> per_step;
    std::vector<TokenId> chosen_tokens;
    std::vector<TopKSlice> outputs;  // kept only when requested
    RunSummary summary;
};

// Recomputes everything except the wall time from per_step.
RunSummary summarize(const std::vector<StepDiagnostics>& per_step);

struct RunOptions {
    Method method = Method::sls;
    MethodSettings settings;
    SamplerKind sampler = SamplerKind::greedy;
    std::uint64_t seed = 0;
    bool keep_outputs = false;
};

// Streams every record through the transform, scatters to the full
// vocabulary and samples. The greedy method always samples greedily.
RunReport run_trace(const Trace& trace, const RunOptions& options);

nlohmann::ordered_json step_json(const StepDiagnostics& d, std::optional<TokenId> chosen);
nlohmann::ordered_json summary_json(const RunSummary& s);

// Line-delimited JSON: a header line, one line per step, a summary line and,
// when include_timing is set, a trailing {"section":"timing",...} line.
void write_run_report(std::ostream& out, const RunReport& report, bool include_timing = true);

struct CompareEntry {
    RunReport run;
    std::optional<double> mean_entropy_pre_on_sls_gated_steps;
    std::optional<double> mean_entropy_post_on_sls_gated_steps;
};

struct CompareReport {
    std::string trace_label;
    nlohmann::ordered_json config_echo;
    std::size_t sls_gated_steps = 0;
    std::vector<CompareEntry> entries;
};

// Runs each method on the same trace. The SLS gate set is taken from an SLS
// run under the same settings, whether or not sls is among the methods.
CompareReport run_compare(const Trace& trace, const std::vector<Method>& methods, const RunOptions& base);

void write_compare_report(std::ostream& out, const CompareReport& report, bool include_timing = true);
void write_compare_table(std::ostream& out, const CompareReport& report);

} // namespace sls::harness
