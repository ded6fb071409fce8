#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "sls/error.hpp"
#include "sls/harness/bench.hpp"
#include "sls/harness/cli.hpp"
#include "sls/harness/report.hpp"
#include "sls/harness/settings.hpp"
#include "sls/trace.hpp"

using namespace sls;
using namespace sls::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sls");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(json::parse(line));
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        CounterRng rng(reinterpret_cast<std::uintptr_t>(this) ^ static_cast<std::uint64_t>(::time(nullptr)));
        path = fs::temp_directory_path() / ("sls_test_" + std::to_string(rng.next()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

// Per-step and summary lines only.
std::vector<json> body(const std::string& text) {
    auto all = lines(text);
    std::vector<json> out;
    for (auto& j : all) {
        if (j.contains("step") || (j.contains("section") && j["section"] == "summary")) out.push_back(j);
    }
    return out;
}

} // namespace

TEST_CASE("record --demo is deterministic") {
    const auto a = cli({"record", "--demo", "--length", "40", "--k", "12", "--seed", "3"});
    const auto b = cli({"record", "--demo", "--length", "40", "--k", "12", "--seed", "3"});
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    const auto l = lines(a.out);
    CHECK(l.size() == 41);
    CHECK(l[0]["k"] == 12);
    CHECK(l[0]["source_label"] == "markov-order2:demo:categorical");
    const auto c = cli({"record", "--demo", "--length", "40", "--k", "12", "--seed", "4"});
    CHECK(c.out != a.out);
}

TEST_CASE("record usage errors") {
    CHECK(cli({"record", "--demo", "--k", "500"}).code == kExitUsage);
    CHECK(cli({"record", "--corpus", "/nonexistent/corpus.txt"}).code == kExitUsage);
    CHECK(cli({"record"}).code == kExitUsage);
    CHECK(cli({"record", "--demo", "--sampler", "beam"}).code == kExitUsage);
    CHECK(cli({"frobnicate"}).code == kExitUsage);
}

TEST_CASE("record from a corpus file") {
    TempDir dir;
    {
        std::ofstream(dir / "c.txt") << "the cat sat on the mat and the rat sat on the hat";
    }
    const auto r = cli({"record", "--corpus", dir / "c.txt", "--k", "4", "--length", "10", "--order", "1", "--out",
                        dir / "t.jsonl"});
    REQUIRE(r.code == kExitOk);
    const auto t = read_trace(fs::path(dir / "t.jsonl"));
    CHECK(t.records.size() == 10);
    CHECK(t.header.source_label.find("markov-order1:") == 0);
}

TEST_CASE("replay") {
    TempDir dir;
    REQUIRE(cli({"record", "--demo", "--length", "60", "--k", "16", "--seed", "9", "--out", dir / "t.jsonl"}).code ==
            kExitOk);

    SUBCASE("identity leaves entropy unchanged") {
        const auto r = cli({"replay", "--trace", dir / "t.jsonl", "--method", "identity"});
        REQUIRE(r.code == kExitOk);
        std::size_t steps = 0;
        for (const auto& j : lines(r.out)) {
            if (!j.contains("step")) continue;
            ++steps;
            CHECK(j["entropy_post"].get<double>() == j["entropy_pre"].get<double>());
            CHECK_FALSE(j["gate_fired"].get<bool>());
        }
        CHECK(steps == 60);
    }

    SUBCASE("layout and summary") {
        const auto r = cli({"replay", "--trace", dir / "t.jsonl"});
        REQUIRE(r.code == kExitOk);
        const auto l = lines(r.out);
        REQUIRE(l.size() == 63);
        CHECK(l.front()["report"] == "run");
        CHECK(l.front()["config"]["k"] == 16);
        CHECK(l[61]["section"] == "summary");
        CHECK(l.back()["section"] == "timing");

        std::vector<StepDiagnostics> steps;
        for (std::size_t i = 1; i <= 60; ++i) {
            const auto& j = l[i];
            StepDiagnostics d;
            d.step = j["step"];
            d.entropy_pre = j["entropy_pre"];
            d.gap = j["gap"].is_null() ? INFINITY : j["gap"].get<double>();
            d.gate_fired = j["gate_fired"];
            if (!j["alpha"].is_null()) d.alpha = j["alpha"].get<double>();
            d.entropy_post = j["entropy_post"];
            steps.push_back(d);
        }
        const auto s = summarize(steps);
        const auto& js = l[61]["summary"];
        CHECK(js["steps_total"] == s.steps_total);
        CHECK(js["steps_gated"] == s.steps_gated);
        CHECK(js["mean_entropy_pre"].get<double>() == doctest::Approx(s.mean_entropy_pre).epsilon(1e-14));
        CHECK(js["mean_entropy_post_on_gated_steps"].get<double>() ==
              doctest::Approx(*s.mean_entropy_post_on_gated_steps).epsilon(1e-14));
        CHECK(js["mean_alpha_on_gated_steps"].get<double>() ==
              doctest::Approx(*s.mean_alpha_on_gated_steps).epsilon(1e-14));
    }

    SUBCASE("--no-timing and --out") {
        const auto r = cli({"replay", "--trace", dir / "t.jsonl", "--no-timing", "--out", dir / "r.jsonl"});
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.empty());
        const auto l = lines(slurp(dir / "r.jsonl"));
        CHECK(l.back()["section"] == "summary");
    }

    SUBCASE("k mismatch names both values") {
        const auto r = cli({"replay", "--trace", dir / "t.jsonl", "--k", "32"});
        CHECK(r.code == kExitValidation);
        CHECK(r.err.find("16") != std::string::npos);
        CHECK(r.err.find("32") != std::string::npos);
    }

    SUBCASE("bad method and bad config") {
        const auto r = cli({"replay", "--trace", dir / "t.jsonl", "--method", "beam"});
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("eminf") != std::string::npos);
        CHECK(cli({"replay", "--trace", dir / "t.jsonl", "--gamma", "2"}).code == kExitUsage);
        CHECK(cli({"replay", "--trace", dir / "missing.jsonl"}).code == kExitUsage);
    }

    SUBCASE("malformed trace") {
        std::ofstream(dir / "bad.jsonl") << slurp(dir / "t.jsonl") << "{not json\n";
        const auto r = cli({"replay", "--trace", dir / "bad.jsonl"});
        CHECK(r.code == kExitValidation);
        CHECK(r.err.find("62") != std::string::npos);
    }

    SUBCASE("every method runs") {
        for (const char* m : {"sls", "identity", "greedy", "temperature", "eminf"}) {
            CHECK(cli({"replay", "--trace", dir / "t.jsonl", "--method", m, "--sampler", "categorical"}).code ==
                  kExitOk);
        }
    }
}

TEST_CASE("sls passes confident traces through") {
    CounterRng rng(21);
    const TraceHeader h{kTraceFormatVersion, 40, 16, "confident", 0};
    std::vector<TraceRecord> recs;
    for (std::uint64_t t = 1; t <= 50; ++t) {
        auto s = sls_test::random_slice(rng, 16, -1.0, 1.0, t);
        s.values[0] += 25.0;
        recs.push_back({t, s.indices, quantize_f32(s.values), std::nullopt});
    }
    Trace trace{h, recs};
    RunOptions opts;
    opts.settings.sls = SlsConfig([] {
        SlsParams p;
        p.k = 16;
        return p;
    }());
    opts.sampler = SamplerKind::categorical;
    opts.seed = 5;
    const auto sls_run = run_trace(trace, opts);
    opts.method = Method::identity;
    const auto id_run = run_trace(trace, opts);
    CHECK(sls_run.summary.steps_gated == 0);
    CHECK(sls_run.chosen_tokens == id_run.chosen_tokens);
}

TEST_CASE("compare") {
    TempDir dir;
    REQUIRE(cli({"record", "--demo", "--length", "50", "--k", "16", "--out", dir / "t.jsonl"}).code == kExitOk);

    SUBCASE("identity twice gives identical summaries") {
        const auto r = cli({"compare", "--trace", dir / "t.jsonl", "--method", "identity", "--method", "identity"});
        REQUIRE(r.code == kExitOk);
        const auto l = lines(r.out);
        REQUIRE(l.size() >= 3);
        CHECK(l[1]["summary"] == l[2]["summary"]);
        CHECK(r.err.find("identity") != std::string::npos);
    }

    SUBCASE("needs two methods") {
        CHECK(cli({"compare", "--trace", dir / "t.jsonl", "--method", "sls"}).code == kExitUsage);
    }

    SUBCASE("comma list and table on file output") {
        const auto r = cli({"compare", "--trace", dir / "t.jsonl", "--method", "sls,temperature,eminf", "--out",
                            dir / "c.jsonl"});
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.find("temperature") != std::string::npos);
        const auto l = lines(slurp(dir / "c.jsonl"));
        CHECK(l[0]["methods"] == json::array({"sls", "temperature", "eminf"}));
    }
}

TEST_CASE("config resolution: defaults < file < flags") {
    TempDir dir;
    {
        std::ofstream f(dir / "c.cfg");
        f << "# tuning\n\nwindow = 8\nrank=4 # inline\ngamma = 0.9\ntau=0.5\n";
    }
    SettingsDraft d;
    apply_config_file(dir / "c.cfg", d);
    d.set("gamma", "0.95");
    d.set("alpha-max", "2");
    const auto s = d.resolve();
    CHECK(s.sls.window() == 8);
    CHECK(s.sls.rank() == 4);
    CHECK(s.sls.gamma() == 0.95);
    CHECK(s.sls.alpha_max() == 2.0);
    CHECK(s.sls.h_thres() == 0.5);
    CHECK(s.tau == 0.5);
    CHECK(d.is_explicit("window"));
    CHECK_FALSE(d.is_explicit("k"));
    CHECK_THROWS_AS(d.set("beta", "1"), ConfigError);
    CHECK_THROWS_AS(d.set("rank", "four"), ConfigError);

    {
        std::ofstream(dir / "bad.cfg") << "window 8\n";
    }
    SettingsDraft d2;
    CHECK_THROWS_AS(apply_config_file(dir / "bad.cfg", d2), ConfigError);

    REQUIRE(cli({"record", "--demo", "--length", "5", "--k", "8", "--out", dir / "t.jsonl"}).code == kExitOk);
    const auto r = cli({"replay", "--trace", dir / "t.jsonl", "--config", dir / "c.cfg", "--rank", "2"});
    REQUIRE(r.code == kExitOk);
    const auto cfg = lines(r.out)[0]["config"];
    CHECK(cfg["window"] == 8);
    CHECK(cfg["rank"] == 2);
    CHECK(cfg["gamma"] == 0.9);
    CHECK(cfg["k"] == 8);
}

TEST_CASE("bench schema") {
    const auto r = cli({"bench", "--steps", "50", "--k", "64"});
    REQUIRE(r.code == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(j["report"] == "bench");
    CHECK(j["config"]["k"] == 64);
    for (const char* part : {"gated", "gate_off"}) {
        const auto& p = j[part];
        CHECK(p["steps"] == 50);
        CHECK(p["median_us"].get<double>() > 0.0);
        CHECK(p["p99_us"].get<double>() >= p["median_us"].get<double>());
        CHECK(p["mean_us"].get<double>() > 0.0);
    }
    CHECK(j["gated"]["gate_rate"] == 1.0);
    CHECK(j["gate_off"]["gate_rate"] == 0.0);
}

TEST_CASE("golden trace replay") {
    const fs::path data(SLS_TEST_DATA_DIR);
    const auto r = cli({"replay", "--trace", (data / "golden_k512_16.slstrace.jsonl").string(), "--no-timing"});
    REQUIRE(r.code == kExitOk);
    const auto got = lines(r.out);
    const auto want = lines(slurp(data / "golden_k512_16.expected.jsonl"));
    REQUIRE(want.size() == 16);
    REQUIRE(got.size() == 18);
    for (std::size_t i = 0; i < 16; ++i) {
        const auto& g = got[i + 1];
        const auto& w = want[i];
        CHECK(g["step"] == w["step"]);
        CHECK(g["gate_fired"] == w["gate_fired"]);
        CHECK(g["m_eff"] == w["m_eff"]);
        CHECK(std::abs(g["entropy_pre"].get<double>() - w["entropy_pre"].get<double>()) < 1e-9);
        CHECK(std::abs(g["entropy_post"].get<double>() - w["entropy_post"].get<double>()) < 1e-9);
        if (!w["alpha"].is_null()) CHECK(std::abs(g["alpha"].get<double>() - w["alpha"].get<double>()) < 1e-9);
        REQUIRE(g["singular_values"].size() == w["singular_values"].size());
        for (std::size_t k = 0; k < w["singular_values"].size(); ++k) {
            const double sw = w["singular_values"][k];
            CHECK(std::abs(g["singular_values"][k].get<double>() - sw) < 1e-9 * std::max(1.0, sw));
        }
    }
}

TEST_CASE("report bodies are deterministic") {
    TempDir dir;
    REQUIRE(cli({"record", "--demo", "--length", "40", "--k", "16", "--out", dir / "t.jsonl"}).code == kExitOk);
    for (const char* sampler : {"greedy", "categorical"}) {
        const auto a = cli({"replay", "--trace", dir / "t.jsonl", "--sampler", sampler, "--seed", "3"});
        const auto b = cli({"replay", "--trace", dir / "t.jsonl", "--sampler", sampler, "--seed", "3"});
        CHECK(body(a.out) == body(b.out));
        const auto c = cli({"replay", "--trace", dir / "t.jsonl", "--sampler", sampler, "--no-timing"});
        const auto d = cli({"replay", "--trace", dir / "t.jsonl", "--sampler", sampler, "--no-timing"});
        CHECK(c.out == d.out);
    }
}
