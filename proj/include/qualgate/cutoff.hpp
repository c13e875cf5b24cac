#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qualgate/metrics.hpp"
#include "qualgate/stats.hpp"

namespace qualgate {

/// Ingested classifier outputs; confidences are never computed here.
struct PredictionRow {
    std::string image_id;
    double confidence = 0.0;
    std::string predicted_label;
    std::string true_label;

    bool correct() const { return predicted_label == true_label; }
};

struct PredictionLog {
    std::vector<PredictionRow> rows;

    void add(PredictionRow row);

private:
    std::map<std::string, size_t> index_;
};

enum class CutoffDirection { accept_above, accept_below };
enum class ScoreSpace { raw, minmax };

const char* cutoff_direction_name(CutoffDirection d);
CutoffDirection cutoff_direction_from_name(const std::string& name);
const char* score_space_name(ScoreSpace s);
ScoreSpace score_space_from_name(const std::string& name);

/// Everything needed to audit and re-derive the threshold decision.
struct CutoffDiagnostics {
    DensityCurve correct_density;
    DensityCurve incorrect_density;
    std::vector<double> crossings;
    double correct_median = 0.0;
    double incorrect_median = 0.0;
    bool fallback_used = false;
};

/// Per-method quality threshold. When score_space is minmax the calibration
/// min/max are recorded so new scores can be mapped into the same space.
struct CutoffSpec {
    std::string method_id;
    double threshold = 0.0;
    CutoffDirection direction = CutoffDirection::accept_above;
    ScoreSpace score_space = ScoreSpace::raw;
    double norm_min = 0.0;
    double norm_max = 0.0;
    CutoffDiagnostics diagnostics;

    /// Map a raw score into this cutoff's score space.
    double to_score_space(double raw) const;
    /// Boundary counts as good: at-threshold is not a low-quality score.
    bool accepts(double score_in_space) const;
};

struct CutoffOptions {
    ScoreSpace score_space = ScoreSpace::minmax; // statistical-method default
    bool quantile_fallback = false;              // opt-in NoCrossing fallback
    double fallback_quantile = 0.9;              // toward the good side
};

/// KDE the correct and incorrect score distributions on a shared grid and
/// take the crossing on the low-quality side of the correct-class median
/// (the crossing nearest the median when several exist there). Throws
/// NoCrossing when no crossing lies on that side, unless the quantile
/// fallback is enabled.
CutoffSpec determine_cutoff(const std::map<std::string, double>& raw_scores,
                            const PredictionLog& log, const MethodDescriptor& method,
                            const CutoffOptions& options = {});

/// Re-run the crossing selection on persisted diagnostics; equals the stored
/// threshold, which makes the decision auditable.
std::optional<double> replay_crossing_choice(const CutoffDiagnostics& diagnostics,
                                             CutoffDirection direction);

/// Signed correlation of quality score vs confidence across joined images.
struct ConfidenceCorrelation {
    double pcc = 0.0;
    double srcc = 0.0;
    size_t joined = 0;
};

ConfidenceCorrelation confidence_quality_correlation(
    const std::map<std::string, double>& raw_scores, const PredictionLog& log);

} // namespace qualgate
