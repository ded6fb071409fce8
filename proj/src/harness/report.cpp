#include "sls/harness/report.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "sls/error.hpp"
#include "sls/harness/settings.hpp"
#include "sls/rng.hpp"

namespace sls::harness {

namespace {

using ojson = nlohmann::ordered_json;

ojson optional_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

ojson real_json(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

std::optional<double> mean_over(const std::vector<StepDiagnostics>& steps, const std::vector<bool>& mask,
                                double StepDiagnostics::*field) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (mask[i]) {
            sum += steps[i].*field;
            ++n;
        }
    }
    if (n == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(n);
}

} // namespace

RunSummary summarize(const std::vector<StepDiagnostics>& per_step) {
    RunSummary s;
    s.steps_total = per_step.size();
    double pre = 0.0;
    double post = 0.0;
    double alpha = 0.0;
    std::size_t alpha_n = 0;
    for (const auto& d : per_step) {
        pre += d.entropy_pre;
        if (d.gate_fired) {
            ++s.steps_gated;
            post += d.entropy_post;
            if (d.alpha) {
                alpha += *d.alpha;
                ++alpha_n;
            }
        }
    }
    if (s.steps_total > 0) {
        s.mean_entropy_pre = pre / static_cast<double>(s.steps_total);
    }
    if (s.steps_gated > 0) {
        s.mean_entropy_post_on_gated_steps = post / static_cast<double>(s.steps_gated);
    }
    if (alpha_n > 0) {
        s.mean_alpha_on_gated_steps = alpha / static_cast<double>(alpha_n);
    }
    return s;
}

RunReport run_trace(const Trace& trace, const RunOptions& options) {
    validate_header(trace.header);
    const auto& config = options.settings.sls;
    if (trace.header.k != config.k()) {
        throw ValidationError("trace k=" + std::to_string(trace.header.k) + " does not match config k=" +
                              std::to_string(config.k()));
    }
    auto transform = make_transform(options.method, options.settings);
    const SamplerKind sampler = options.method == Method::greedy ? SamplerKind::greedy : options.sampler;
    CounterRng rng(options.seed);

    RunReport report;
    report.method = method_name(options.method);
    report.sampler = sampler_name(sampler);
    report.seed = options.seed;
    report.trace_label = trace.header.source_label;
    report.config_echo = config_echo(options.settings);
    report.per_step.reserve(trace.records.size());
    report.chosen_tokens.reserve(trace.records.size());

    using clock = std::chrono::steady_clock;
    clock::duration elapsed{};
    for (const auto& record : trace.records) {
        const auto slice = record.slice();
        const auto t0 = clock::now();
        auto result = transform->apply(slice);
        elapsed += clock::now() - t0;

        const auto full = scatter_adjusted(result.adjusted, trace.header.vocab_size);
        report.chosen_tokens.push_back(sample_token(full, sampler, rng));
        spdlog::debug("{} step {}: H={:.6f} gap={:.6f} gated={} H_post={:.6f}", report.method, record.step,
                      result.diagnostics.entropy_pre, result.diagnostics.gap, result.diagnostics.gate_fired,
                      result.diagnostics.entropy_post);
        report.per_step.push_back(std::move(result.diagnostics));
        if (options.keep_outputs) {
            report.outputs.push_back(std::move(result.adjusted));
        }
    }
    report.summary = summarize(report.per_step);
    if (!trace.records.empty()) {
        report.summary.wall_time_per_step_us =
            std::chrono::duration<double, std::micro>(elapsed).count() / static_cast<double>(trace.records.size());
    }
    return report;
}

ojson step_json(const StepDiagnostics& d, std::optional<TokenId> chosen) {
    ojson j;
    j["step"] = d.step;
    j["entropy_pre"] = d.entropy_pre;
    j["gap"] = real_json(d.gap);
    j["gate_fired"] = d.gate_fired;
    j["alpha"] = optional_json(d.alpha);
    j["m_eff"] = d.m_eff ? ojson(*d.m_eff) : ojson(nullptr);
    j["singular_values"] = d.singular_values;
    j["entropy_post"] = d.entropy_post;
    j["chosen_token"] = chosen ? ojson(*chosen) : ojson(nullptr);
    return j;
}

ojson summary_json(const RunSummary& s) {
    ojson j;
    j["steps_total"] = s.steps_total;
    j["steps_gated"] = s.steps_gated;
    j["mean_entropy_pre"] = s.mean_entropy_pre;
    j["mean_entropy_post_on_gated_steps"] = optional_json(s.mean_entropy_post_on_gated_steps);
    j["mean_alpha_on_gated_steps"] = optional_json(s.mean_alpha_on_gated_steps);
    return j;
}

void write_run_report(std::ostream& out, const RunReport& r, bool include_timing) {
    ojson head;
    head["report"] = "run";
    head["method"] = r.method;
    head["sampler"] = r.sampler;
    head["seed"] = r.seed;
    head["trace"] = r.trace_label;
    head["config"] = r.config_echo;
    out << head.dump() << '\n';
    for (std::size_t i = 0; i < r.per_step.size(); ++i) {
        const std::optional<TokenId> chosen =
            i < r.chosen_tokens.size() ? std::optional<TokenId>(r.chosen_tokens[i]) : std::nullopt;
        out << step_json(r.per_step[i], chosen).dump() << '\n';
    }
    ojson summary;
    summary["section"] = "summary";
    summary["summary"] = summary_json(r.summary);
    out << summary.dump() << '\n';
    if (include_timing) {
        ojson timing;
        timing["section"] = "timing";
        timing["wall_time_per_step_us"] = r.summary.wall_time_per_step_us;
        out << timing.dump() << '\n';
    }
}

CompareReport run_compare(const Trace& trace, const std::vector<Method>& methods, const RunOptions& base) {
    if (methods.size() < 2) {
        throw UsageError("compare needs at least two methods");
    }
    RunOptions sls_options = base;
    sls_options.method = Method::sls;
    sls_options.keep_outputs = false;
    const auto sls_run = run_trace(trace, sls_options);
    std::vector<bool> mask(sls_run.per_step.size());
    for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = sls_run.per_step[i].gate_fired;
    }

    CompareReport report;
    report.trace_label = trace.header.source_label;
    report.config_echo = config_echo(base.settings);
    report.config_echo["sampler"] = sampler_name(base.sampler);
    report.config_echo["seed"] = base.seed;
    report.sls_gated_steps = sls_run.summary.steps_gated;
    for (Method m : methods) {
        RunOptions options = base;
        options.method = m;
        CompareEntry entry{run_trace(trace, options), {}, {}};
        entry.mean_entropy_pre_on_sls_gated_steps = mean_over(entry.run.per_step, mask, &StepDiagnostics::entropy_pre);
        entry.mean_entropy_post_on_sls_gated_steps =
            mean_over(entry.run.per_step, mask, &StepDiagnostics::entropy_post);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

void write_compare_report(std::ostream& out, const CompareReport& r, bool include_timing) {
    ojson head;
    head["report"] = "compare";
    head["trace"] = r.trace_label;
    ojson names = ojson::array();
    for (const auto& e : r.entries) {
        names.push_back(e.run.method);
    }
    head["methods"] = names;
    head["config"] = r.config_echo;
    head["sls_gated_steps"] = r.sls_gated_steps;
    out << head.dump() << '\n';
    for (const auto& e : r.entries) {
        ojson line;
        line["method"] = e.run.method;
        line["sampler"] = e.run.sampler;
        line["summary"] = summary_json(e.run.summary);
        line["mean_entropy_pre_on_sls_gated_steps"] = optional_json(e.mean_entropy_pre_on_sls_gated_steps);
        line["mean_entropy_post_on_sls_gated_steps"] = optional_json(e.mean_entropy_post_on_sls_gated_steps);
        out << line.dump() << '\n';
    }
    if (include_timing) {
        ojson timing;
        timing["section"] = "timing";
        ojson per_method;
        for (const auto& e : r.entries) {
            per_method[e.run.method] = e.run.summary.wall_time_per_step_us;
        }
        timing["wall_time_per_step_us"] = per_method;
        out << timing.dump() << '\n';
    }
}

void write_compare_table(std::ostream& out, const CompareReport& r) {
    auto cell = [](const std::optional<double>& v) {
        std::ostringstream s;
        if (v) {
            s << std::fixed << std::setprecision(4) << *v;
        } else {
            s << "-";
        }
        return s.str();
    };
    out << "trace: " << r.trace_label << "  (sls gated steps: " << r.sls_gated_steps << ")\n";
    out << std::left << std::setw(12) << "method" << std::right << std::setw(8) << "steps" << std::setw(8) << "gated"
        << std::setw(12) << "H_pre" << std::setw(14) << "H_post|gated" << std::setw(12) << "alpha" << std::setw(16)
        << "H_pre|sls" << std::setw(16) << "H_post|sls" << '\n';
    for (const auto& e : r.entries) {
        const auto& s = e.run.summary;
        out << std::left << std::setw(12) << e.run.method << std::right << std::setw(8) << s.steps_total
            << std::setw(8) << s.steps_gated << std::setw(12) << cell(s.mean_entropy_pre) << std::setw(14)
            << cell(s.mean_entropy_post_on_gated_steps) << std::setw(12) << cell(s.mean_alpha_on_gated_steps)
            << std::setw(16) << cell(e.mean_entropy_pre_on_sls_gated_steps) << std::setw(16)
            << cell(e.mean_entropy_post_on_sls_gated_steps) << '\n';
    }
}

} // namespace sls::harness
