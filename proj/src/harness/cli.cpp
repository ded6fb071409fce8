#include "sls/harness/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "sls/error.hpp"
#include "sls/harness/bench.hpp"
#include "sls/harness/report.hpp"
#include "sls/harness/settings.hpp"
#include "sls/markov.hpp"
#include "sls/stream.hpp"
#include "sls/trace.hpp"

namespace sls::harness {

namespace {

// Config keys that can also be given as --flags (dashes for underscores).
constexpr const char* kFlagKeys[] = {"k",     "window", "rank",  "h_thres", "alpha_max",
                                     "gamma", "s_h",    "s_d",   "h_0",     "d_0",
                                     "epsilon", "svd_tol", "tau", "eminf_steps", "eminf_learning_rate",
                                     "eminf_threshold", "fixed_alpha"};

struct SharedOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string sampler = "greedy";
    bool no_entropy_gate = false;
    bool no_timing = false;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_config_flags(CLI::App* cmd, SharedOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key=value config file");
    for (const char* key : kFlagKeys) {
        std::string flag = std::string("--") + key;
        for (auto& ch : flag) {
            if (ch == '_') ch = '-';
        }
        cmd->add_option_function<std::string>(
            flag, [&opts, key](const std::string& v) { opts.overrides.emplace_back(key, v); },
            std::string("override config key ") + key);
    }
    cmd->add_flag("--no-entropy-gate", opts.no_entropy_gate, "ablation: fire whenever the buffer is non-degenerate");
}

SettingsDraft resolve_draft(const SharedOptions& opts) {
    SettingsDraft draft;
    if (!opts.config_path.empty()) {
        apply_config_file(opts.config_path, draft);
    }
    for (const auto& [key, value] : opts.overrides) {
        draft.set(key, value);
    }
    if (opts.no_entropy_gate) {
        draft.set("entropy_gate", "false");
    }
    return draft;
}

// Without an explicit k the trace's k is adopted.
MethodSettings settings_for_trace(SettingsDraft draft, const Trace& trace) {
    if (!draft.is_explicit("k")) {
        draft.sls.k = trace.header.k;
    }
    return draft.resolve();
}

class Output {
  public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
            if (!*file_) {
                throw IoError("cannot open output file: " + path);
            }
            stream_ = file_.get();
        }
    }

    std::ostream& get() { return *stream_; }
    bool is_file() const { return file_ != nullptr; }

    void finish(const std::string& path) {
        stream_->flush();
        if (!*stream_) {
            throw IoError("failed writing output: " + (path.empty() ? std::string("<stdout>") : path));
        }
    }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read corpus: " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void configure_logging(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("sls", sink);
    logger->set_pattern("[sls %l] %v");
    const char* env = std::getenv("SLS_LOG");
    const std::string level = env ? env : "";
    if (level == "off") {
        logger->set_level(spdlog::level::off);
    } else if (level == "info") {
        logger->set_level(spdlog::level::info);
    } else if (level == "debug") {
        logger->set_level(spdlog::level::debug);
    } else {
        logger->set_level(spdlog::level::warn);
    }
    spdlog::set_default_logger(std::move(logger));
}

struct RecordArgs {
    bool demo = false;
    std::string corpus;
    std::size_t length = 64;
    std::size_t k = 32;
    std::size_t order = 2;
    double smoothing = 0.001;
    std::string sampler = "categorical";
    std::uint64_t seed = 0;
    std::string out_path;
};

void cmd_record(const RecordArgs& args, std::ostream& out) {
    if (args.demo == !args.corpus.empty()) {
        throw UsageError("record needs exactly one of --demo or --corpus <path>");
    }
    const std::string text = args.demo ? std::string(demo_corpus()) : read_file(args.corpus);
    const auto source = fit_markov(text, args.order, args.smoothing);
    if (args.k == 0 || args.k > source.vocab_size()) {
        throw UsageError("--k " + std::to_string(args.k) + " must lie in [1, " + std::to_string(source.vocab_size()) +
                         "] (corpus vocabulary size)");
    }
    StreamOptions stream{args.k, args.length, args.seed, args.sampler};
    parse_sampler(stream.sampler);
    const auto records = generate_stream(source, stream);

    TraceHeader header;
    header.vocab_size = source.vocab_size();
    header.k = args.k;
    header.seed = args.seed;
    header.source_label = "markov-order" + std::to_string(args.order) + ":" + (args.demo ? "demo" : args.corpus) +
                          ":" + args.sampler;
    spdlog::info("record: {} steps, vocab {}, k {}", records.size(), header.vocab_size, header.k);
    Output sink(args.out_path, out);
    write_trace(sink.get(), header, records);
    sink.finish(args.out_path);
}

void cmd_replay(const std::string& trace_path, const std::string& method, const SharedOptions& opts,
                std::ostream& out) {
    const Trace trace = read_trace(trace_path);
    RunOptions run;
    run.method = parse_method(method);
    run.settings = settings_for_trace(resolve_draft(opts), trace);
    run.sampler = parse_sampler(opts.sampler);
    run.seed = opts.seed;
    const auto report = run_trace(trace, run);
    spdlog::info("replay {}: {} steps, {} gated", report.method, report.summary.steps_total,
                 report.summary.steps_gated);
    Output sink(opts.out_path, out);
    write_run_report(sink.get(), report, !opts.no_timing);
    sink.finish(opts.out_path);
}

void cmd_compare(const std::string& trace_path, const std::vector<std::string>& method_tags,
                 const SharedOptions& opts, std::ostream& out, std::ostream& err) {
    std::vector<Method> methods;
    for (const auto& tag : method_tags) {
        methods.push_back(parse_method(tag));
    }
    if (methods.size() < 2) {
        throw UsageError("compare needs at least two methods (valid: " + method_list() + ")");
    }
    const Trace trace = read_trace(trace_path);
    RunOptions base;
    base.settings = settings_for_trace(resolve_draft(opts), trace);
    base.sampler = parse_sampler(opts.sampler);
    base.seed = opts.seed;
    const auto report = run_compare(trace, methods, base);

    Output sink(opts.out_path, out);
    write_compare_report(sink.get(), report, !opts.no_timing);
    sink.finish(opts.out_path);
    write_compare_table(sink.is_file() ? out : err, report);
}

void cmd_bench(std::size_t steps, const SharedOptions& opts, std::ostream& out) {
    const auto settings = resolve_draft(opts).resolve();
    spdlog::info("bench: {} steps per stream at k={}, window={}, rank={}", steps, settings.sls.k(),
                 settings.sls.window(), settings.sls.rank());
    const auto report = run_bench(settings.sls, steps, opts.seed);
    auto j = bench_json(config_echo(settings), report);
    Output sink(opts.out_path, out);
    sink.get() << j.dump() << '\n';
    sink.finish(opts.out_path);
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
    if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UsageError*>(&e) ||
        dynamic_cast<const IoError*>(&e)) {
        return kExitUsage;
    }
    return kExitValidation;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    configure_logging(err);

    CLI::App app{"Spectral logit sculpting: record, replay, compare and benchmark logit traces", "sls"};
    app.require_subcommand(1);

    RecordArgs record_args;
    auto* record = app.add_subcommand("record", "fit a Markov source and write a synthetic trace");
    record->add_flag("--demo", record_args.demo, "use the built-in demo corpus");
    record->add_option("--corpus", record_args.corpus, "training text file");
    record->add_option("--length", record_args.length, "number of decode steps")->capture_default_str();
    record->add_option("--k", record_args.k, "top-K size")->capture_default_str();
    record->add_option("--order", record_args.order, "Markov context length")->capture_default_str();
    record->add_option("--smoothing", record_args.smoothing, "additive smoothing")->capture_default_str();
    record->add_option("--sampler", record_args.sampler, "greedy | categorical")->capture_default_str();
    record->add_option("--seed", record_args.seed, "generator seed")->capture_default_str();
    record->add_option("--out", record_args.out_path, "trace path (default: stdout)");

    SharedOptions replay_opts;
    std::string replay_trace;
    std::string replay_method = "sls";
    auto* replay = app.add_subcommand("replay", "stream a trace through one method");
    replay->add_option("--trace", replay_trace, "input trace")->required();
    replay->add_option("--method", replay_method, "sls | identity | greedy | temperature | eminf")
        ->capture_default_str();
    replay->add_option("--seed", replay_opts.seed, "sampler seed")->capture_default_str();
    replay->add_option("--sampler", replay_opts.sampler, "greedy | categorical")->capture_default_str();
    replay->add_option("--out", replay_opts.out_path, "report path (default: stdout)");
    replay->add_flag("--no-timing", replay_opts.no_timing, "omit the timing section");
    add_config_flags(replay, replay_opts);

    SharedOptions compare_opts;
    std::string compare_trace;
    std::vector<std::string> compare_methods;
    auto* compare = app.add_subcommand("compare", "run several methods over one trace");
    compare->add_option("--trace", compare_trace, "input trace")->required();
    compare->add_option("--method", compare_methods, "method tag (repeat or comma-separate)")
        ->required()
        ->delimiter(',');
    compare->add_option("--seed", compare_opts.seed, "sampler seed")->capture_default_str();
    compare->add_option("--sampler", compare_opts.sampler, "greedy | categorical")->capture_default_str();
    compare->add_option("--out", compare_opts.out_path, "report path (default: stdout)");
    compare->add_flag("--no-timing", compare_opts.no_timing, "omit the timing section");
    add_config_flags(compare, compare_opts);

    SharedOptions bench_opts;
    std::size_t bench_steps = 10000;
    auto* bench = app.add_subcommand("bench", "time sls_step on synthetic gated and gate-off streams");
    bench->add_option("--steps", bench_steps, "timed steps per stream")->capture_default_str();
    bench->add_option("--seed", bench_opts.seed, "synthetic data seed")->capture_default_str();
    bench->add_option("--out", bench_opts.out_path, "report path (default: stdout)");
    add_config_flags(bench, bench_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "sls: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*record) {
            cmd_record(record_args, out);
        } else if (*replay) {
            cmd_replay(replay_trace, replay_method, replay_opts, out);
        } else if (*compare) {
            cmd_compare(compare_trace, compare_methods, compare_opts, out, err);
        } else if (*bench) {
            cmd_bench(bench_steps, bench_opts, out);
        }
    } catch (const std::exception& e) {
        err << "sls: error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitOk;
}

} // namespace sls::harness
