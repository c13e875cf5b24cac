#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qualgate/cutoff.hpp"
#include "qualgate/metrics.hpp"
#include "qualgate/selection.hpp"

namespace qualgate {

/// Pipeline-wide knobs, loadable from a JSON config file; command-line flags
/// strictly override individual fields. Round-trips through serialization
/// unchanged.
struct RunConfig {
    /// extra method descriptors (external:<name> registrations)
    std::vector<MethodDescriptor> extra_methods;

    std::vector<double> blur_sigmas;
    int rotation_steps = 6;
    double rotation_step_degrees = 15.0;

    SelectionCriteria selection;

    ScoreSpace cutoff_statistical_space = ScoreSpace::minmax;
    ScoreSpace cutoff_external_space = ScoreSpace::raw;
    std::map<std::string, ScoreSpace> cutoff_space_overrides;
    bool cutoff_quantile_fallback = false;
    double cutoff_fallback_quantile = 0.9;

    uint64_t seed = 0;

    RunConfig();

    /// Registry with built-ins plus the configured external methods.
    MethodRegistry build_registry() const;

    /// Effective score space for one method id.
    ScoreSpace cutoff_space_for(const std::string& method_id) const;
};

RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

} // namespace qualgate
