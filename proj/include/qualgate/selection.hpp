#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qualgate/image.hpp"
#include "qualgate/metrics.hpp"

namespace qualgate {

/// One (method, augmentation) cell of the robustness report: absolute
/// correlations of (step index, score) per sample, or a failure cause.
struct ReportCell {
    std::vector<double> abs_pcc;
    std::vector<double> abs_srcc;
    std::optional<std::string> failure;

    double mean_abs_pcc() const;
    double mean_abs_srcc() const;
    size_t sample_count() const { return abs_pcc.size(); }
};

struct CorrelationReport {
    std::map<std::pair<std::string, AugmentationKind>, ReportCell> entries;
    std::vector<std::string> method_ids;

    const ReportCell* find(const std::string& method, AugmentationKind kind) const;
};

enum class SelectionStatistic { pcc, srcc, mean_of_both };

const char* selection_statistic_name(SelectionStatistic s);
SelectionStatistic selection_statistic_from_name(const std::string& name);

/// Pass thresholds plus the composite ranking knobs. A method passes when
/// crop <= max_crop_corr, rotation <= max_rot_corr and blur >= min_blur_corr
/// on the chosen statistic. Defaults follow the rank-based reading of the
/// published robustness table; the rotation bound sits at 0.5 because the
/// six-step protocol quantizes rank correlations to multiples of ~0.086 and
/// 0.4 would reject methods the study kept.
struct SelectionCriteria {
    double max_crop_corr = 0.4;
    double max_rot_corr = 0.5;
    double min_blur_corr = 0.8;
    int target_count = 3;
    SelectionStatistic statistic = SelectionStatistic::srcc;
};

struct BenchConfig {
    std::vector<double> blur_sigmas = default_blur_sigmas();
    int rotation_steps = 6;
    double rotation_step_degrees = 15.0;
};

using MetricFn = std::function<double(const GrayImage&)>;

/// Scoring callbacks for the built-in statistical methods (lapv/lapm/wavs
/// always; brisque/niqe when models are supplied).
std::vector<std::pair<std::string, MetricFn>> builtin_metric_fns();

/// Score every augmentation series step with every method and correlate the
/// scores against the step index; absolute PCC/SRCC averaged across samples.
/// A metric failure on any step is recorded as the cell's failure cause.
CorrelationReport run_robustness_bench(
    const std::vector<std::pair<std::string, GrayImage>>& samples,
    const std::vector<std::pair<std::string, MetricFn>>& methods,
    const BenchConfig& config = {});

struct MethodSelection {
    std::string method_id;
    double crop_corr = 0.0;
    double rot_corr = 0.0;
    double blur_corr = 0.0;
    double composite = 0.0; // blur - max(crop, rot)
    bool crop_ok = false;
    bool rot_ok = false;
    bool blur_ok = false;
    bool passed = false;
    std::optional<std::string> failure;
};

struct SelectionResult {
    std::vector<MethodSelection> ranked; // by composite desc, id asc
    std::vector<std::string> selected;   // top target_count passing methods
    bool underfilled = false;
};

/// Apply the criteria, rank by composite and return the top target_count
/// passing methods. The full ranked list stays in the result so a config can
/// override the pick when judgment disagrees with the thresholds.
SelectionResult select_methods(const CorrelationReport& report, const SelectionCriteria& criteria);

} // namespace qualgate
