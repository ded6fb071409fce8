#include "sls/harness/methods.hpp"

#include "sls/entropy.hpp"
#include "sls/error.hpp"

namespace sls::harness {

namespace {

constexpr Method kAll[] = {Method::sls, Method::identity, Method::greedy, Method::temperature, Method::eminf};

StepDiagnostics passthrough_diagnostics(const TopKSlice& slice, double epsilon) {
    StepDiagnostics d;
    d.step = slice.step;
    d.entropy_pre = compute_entropy(slice.values, epsilon);
    d.gap = logit_gap(slice);
    d.entropy_post = d.entropy_pre;
    return d;
}

class SlsTransform final : public LogitTransform {
  public:
    explicit SlsTransform(const SlsConfig& config) : sculptor_(config) {}
    StepResult apply(const TopKSlice& slice) override { return sculptor_.step(slice); }
    void reset() override { sculptor_.reset(); }

  private:
    SpectralSculptor sculptor_;
};

class IdentityTransform final : public LogitTransform {
  public:
    explicit IdentityTransform(double epsilon) : epsilon_(epsilon) {}
    StepResult apply(const TopKSlice& slice) override { return {slice, passthrough_diagnostics(slice, epsilon_)}; }

  private:
    double epsilon_;
};

class TemperatureTransform final : public LogitTransform {
  public:
    TemperatureTransform(double tau, double epsilon) : tau_(tau), epsilon_(epsilon) {}

    StepResult apply(const TopKSlice& slice) override {
        StepResult r{temperature_scale(slice, tau_), passthrough_diagnostics(slice, epsilon_)};
        if (tau_ != 1.0) {
            r.diagnostics.gate_fired = true;
            r.diagnostics.entropy_post = compute_entropy(r.adjusted.values, epsilon_);
        }
        return r;
    }

  private:
    double tau_;
    double epsilon_;
};

class EmInfTransform final : public LogitTransform {
  public:
    EmInfTransform(const EmInfConfig& config, double epsilon) : config_(config), epsilon_(epsilon) {}

    StepResult apply(const TopKSlice& slice) override {
        StepResult r{entropy_minimize(slice, config_), passthrough_diagnostics(slice, epsilon_)};
        if (r.adjusted.values != slice.values) {
            r.diagnostics.gate_fired = true;
            r.diagnostics.entropy_post = compute_entropy(r.adjusted.values, epsilon_);
        }
        return r;
    }

  private:
    EmInfConfig config_;
    double epsilon_;
};

} // namespace

Method parse_method(const std::string& tag) {
    for (Method m : kAll) {
        if (tag == method_name(m)) {
            return m;
        }
    }
    throw UsageError("unknown method \"" + tag + "\"; valid methods: " + method_list());
}

const char* method_name(Method method) {
    switch (method) {
    case Method::sls: return "sls";
    case Method::identity: return "identity";
    case Method::greedy: return "greedy";
    case Method::temperature: return "temperature";
    case Method::eminf: return "eminf";
    }
    return "?";
}

std::string method_list() {
    std::string out;
    for (Method m : kAll) {
        if (!out.empty()) out += ", ";
        out += method_name(m);
    }
    return out;
}

std::unique_ptr<LogitTransform> make_transform(Method method, const MethodSettings& settings) {
    const double eps = settings.sls.epsilon();
    switch (method) {
    case Method::sls: return std::make_unique<SlsTransform>(settings.sls);
    case Method::identity:
    case Method::greedy: return std::make_unique<IdentityTransform>(eps);
    case Method::temperature:
        if (!(settings.tau > 0.0)) {
            throw ConfigError("temperature tau must be > 0");
        }
        return std::make_unique<TemperatureTransform>(settings.tau, eps);
    case Method::eminf:
        settings.eminf.validate();
        return std::make_unique<EmInfTransform>(settings.eminf, eps);
    }
    throw UsageError("unknown method");
}

} // namespace sls::harness
