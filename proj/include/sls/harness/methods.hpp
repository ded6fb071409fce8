#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sls/baselines.hpp"
#include "sls/config.hpp"
#include "sls/sculptor.hpp"

namespace sls::harness {

enum class Method { sls, identity, greedy, temperature, eminf };

// Throws UsageError listing the valid tags.
Method parse_method(const std::string& tag);
const char* method_name(Method method);
std::string method_list();

struct MethodSettings {
    SlsConfig sls;
    double tau = 0.7;
    EmInfConfig eminf;
};

// A per-stream logit transform. For the baselines, gate_fired reports
// whether the transform changed the values at that step.
class LogitTransform {
  public:
    virtual ~LogitTransform() = default;
    virtual StepResult apply(const TopKSlice& slice) = 0;
    virtual void reset() {}
};

std::unique_ptr<LogitTransform> make_transform(Method method, const MethodSettings& settings);

} // namespace sls::harness
