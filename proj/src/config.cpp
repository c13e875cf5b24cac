#include "qualgate/config.hpp"

#include <json.hpp>

#include "qualgate/error.hpp"
#include "qualgate/image.hpp"

namespace qualgate {

using json = nlohmann::ordered_json;

RunConfig::RunConfig() : blur_sigmas(default_blur_sigmas()) {}

MethodRegistry RunConfig::build_registry() const {
    MethodRegistry registry = MethodRegistry::with_builtins();
    for (const MethodDescriptor& descriptor : extra_methods) registry.add(descriptor);
    return registry;
}

ScoreSpace RunConfig::cutoff_space_for(const std::string& method_id) const {
    auto it = cutoff_space_overrides.find(method_id);
    if (it != cutoff_space_overrides.end()) return it->second;
    return method_id.rfind("external:", 0) == 0 ? cutoff_external_space
                                                : cutoff_statistical_space;
}

RunConfig config_from_json(const std::string& text) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded())
        throw Error(ErrorKind::parse_error, "config: invalid JSON");

    RunConfig config;
    if (root.contains("methods"))
        for (const json& m : root.at("methods"))
            config.extra_methods.push_back(
                {m.at("id").get<std::string>(),
                 polarity_from_name(m.at("polarity").get<std::string>()),
                 m.value("normalization", "raw") == "minmax" ? Normalization::minmax
                                                             : Normalization::raw});
    if (root.contains("augmentation")) {
        const json& aug = root.at("augmentation");
        if (aug.contains("blur_sigmas"))
            config.blur_sigmas = aug.at("blur_sigmas").get<std::vector<double>>();
        config.rotation_steps = aug.value("rotation_steps", config.rotation_steps);
        config.rotation_step_degrees =
            aug.value("rotation_step_degrees", config.rotation_step_degrees);
    }
    if (root.contains("selection")) {
        const json& sel = root.at("selection");
        config.selection.max_crop_corr = sel.value("max_crop_corr", config.selection.max_crop_corr);
        config.selection.max_rot_corr = sel.value("max_rot_corr", config.selection.max_rot_corr);
        config.selection.min_blur_corr = sel.value("min_blur_corr", config.selection.min_blur_corr);
        config.selection.target_count = sel.value("target_count", config.selection.target_count);
        if (sel.contains("statistic"))
            config.selection.statistic =
                selection_statistic_from_name(sel.at("statistic").get<std::string>());
    }
    if (root.contains("cutoff")) {
        const json& cut = root.at("cutoff");
        if (cut.contains("statistical_space"))
            config.cutoff_statistical_space =
                score_space_from_name(cut.at("statistical_space").get<std::string>());
        if (cut.contains("external_space"))
            config.cutoff_external_space =
                score_space_from_name(cut.at("external_space").get<std::string>());
        if (cut.contains("space_overrides"))
            for (const auto& [key, value] : cut.at("space_overrides").items())
                config.cutoff_space_overrides[key] =
                    score_space_from_name(value.get<std::string>());
        config.cutoff_quantile_fallback =
            cut.value("quantile_fallback", config.cutoff_quantile_fallback);
        config.cutoff_fallback_quantile =
            cut.value("fallback_quantile", config.cutoff_fallback_quantile);
    }
    if (root.contains("gating"))
        config.seed = root.at("gating").value("seed", config.seed);
    return config;
}

std::string config_to_json(const RunConfig& config) {
    json root;
    json methods = json::array();
    for (const MethodDescriptor& m : config.extra_methods)
        methods.push_back({{"id", m.id},
                           {"polarity", polarity_name(m.polarity)},
                           {"normalization",
                            m.normalization == Normalization::minmax ? "minmax" : "raw"}});
    root["methods"] = std::move(methods);
    root["augmentation"] = {{"blur_sigmas", config.blur_sigmas},
                            {"rotation_steps", config.rotation_steps},
                            {"rotation_step_degrees", config.rotation_step_degrees}};
    root["selection"] = {{"max_crop_corr", config.selection.max_crop_corr},
                         {"max_rot_corr", config.selection.max_rot_corr},
                         {"min_blur_corr", config.selection.min_blur_corr},
                         {"target_count", config.selection.target_count},
                         {"statistic", selection_statistic_name(config.selection.statistic)}};
    json overrides;
    for (const auto& [key, value] : config.cutoff_space_overrides)
        overrides[key] = score_space_name(value);
    root["cutoff"] = {{"statistical_space", score_space_name(config.cutoff_statistical_space)},
                      {"external_space", score_space_name(config.cutoff_external_space)},
                      {"space_overrides", std::move(overrides)},
                      {"quantile_fallback", config.cutoff_quantile_fallback},
                      {"fallback_quantile", config.cutoff_fallback_quantile}};
    root["gating"] = {{"seed", config.seed}};
    return root.dump(2) + "\n";
}

} // namespace qualgate
