#include "qualgate/cutoff.hpp"

#include <algorithm>
#include <cmath>

#include "qualgate/error.hpp"

namespace qualgate {

void PredictionLog::add(PredictionRow row) {
    if (row.confidence < 0.0 || row.confidence > 1.0)
        throw invalid_param("prediction log: confidence outside [0,1] for " + row.image_id);
    if (!index_.emplace(row.image_id, rows.size()).second)
        throw invalid_param("prediction log: duplicate image id " + row.image_id);
    rows.push_back(std::move(row));
}

const char* cutoff_direction_name(CutoffDirection d) {
    return d == CutoffDirection::accept_above ? "accept_above" : "accept_below";
}

CutoffDirection cutoff_direction_from_name(const std::string& name) {
    if (name == "accept_above") return CutoffDirection::accept_above;
    if (name == "accept_below") return CutoffDirection::accept_below;
    throw invalid_param("unknown cutoff direction: " + name);
}

const char* score_space_name(ScoreSpace s) { return s == ScoreSpace::raw ? "raw" : "minmax"; }

ScoreSpace score_space_from_name(const std::string& name) {
    if (name == "raw") return ScoreSpace::raw;
    if (name == "minmax") return ScoreSpace::minmax;
    throw invalid_param("unknown score space: " + name);
}

double CutoffSpec::to_score_space(double raw) const {
    if (score_space == ScoreSpace::raw) return raw;
    return (raw - norm_min) / (norm_max - norm_min);
}

bool CutoffSpec::accepts(double score_in_space) const {
    return direction == CutoffDirection::accept_above ? score_in_space >= threshold
                                                      : score_in_space <= threshold;
}

namespace {

std::vector<double> density_crossings(const DensityCurve& correct,
                                      const DensityCurve& incorrect) {
    std::vector<double> crossings;
    const size_t n = correct.grid.size();
    double prev = correct.density[0] - incorrect.density[0];
    for (size_t i = 1; i < n; ++i) {
        const double cur = correct.density[i] - incorrect.density[i];
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
            // linear interpolation of the sign change
            const double g0 = correct.grid[i - 1], g1 = correct.grid[i];
            const double t = prev / (prev - cur);
            crossings.push_back(g0 + t * (g1 - g0));
        }
        if (cur != 0.0) prev = cur;
    }
    return crossings;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::optional<double> replay_crossing_choice(const CutoffDiagnostics& diagnostics,
                                             CutoffDirection direction) {
    // low-quality side of the correct-class median; nearest crossing wins
    std::optional<double> chosen;
    for (double c : diagnostics.crossings) {
        if (direction == CutoffDirection::accept_above) {
            if (c < diagnostics.correct_median && (!chosen || c > *chosen)) chosen = c;
        } else {
            if (c > diagnostics.correct_median && (!chosen || c < *chosen)) chosen = c;
        }
    }
    return chosen;
}

CutoffSpec determine_cutoff(const std::map<std::string, double>& raw_scores,
                            const PredictionLog& log, const MethodDescriptor& method,
                            const CutoffOptions& options) {
    std::vector<double> correct_scores, incorrect_scores;
    for (const PredictionRow& row : log.rows) {
        auto it = raw_scores.find(row.image_id);
        if (it == raw_scores.end())
            throw invalid_param("determine_cutoff: no " + method.id + " score for image " +
                                row.image_id);
        (row.correct() ? correct_scores : incorrect_scores).push_back(it->second);
    }
    if (correct_scores.size() < 5 || incorrect_scores.size() < 5)
        throw insufficient_samples("determine_cutoff: need >= 5 correct and >= 5 incorrect rows");

    CutoffSpec spec;
    spec.method_id = method.id;
    spec.score_space = options.score_space;
    spec.direction = method.polarity == Polarity::higher_better ? CutoffDirection::accept_above
                                                                : CutoffDirection::accept_below;

    if (options.score_space == ScoreSpace::minmax) {
        std::vector<double> all = correct_scores;
        all.insert(all.end(), incorrect_scores.begin(), incorrect_scores.end());
        const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
        if (!(*hi > *lo))
            throw degenerate_series("determine_cutoff: constant scores for " + method.id);
        spec.norm_min = *lo;
        spec.norm_max = *hi;
        for (double& v : correct_scores) v = spec.to_score_space(v);
        for (double& v : incorrect_scores) v = spec.to_score_space(v);
    }

    const double h_correct = silverman_bandwidth(correct_scores);
    const double h_incorrect = silverman_bandwidth(incorrect_scores);
    const double pad = 3.0 * std::max(h_correct, h_incorrect);
    const double lo = std::min(*std::min_element(correct_scores.begin(), correct_scores.end()),
                               *std::min_element(incorrect_scores.begin(), incorrect_scores.end())) -
                      pad;
    const double hi = std::max(*std::max_element(correct_scores.begin(), correct_scores.end()),
                               *std::max_element(incorrect_scores.begin(), incorrect_scores.end())) +
                      pad;
    std::vector<double> grid(512);
    for (int i = 0; i < 512; ++i) grid[i] = lo + (hi - lo) * i / 511.0;

    CutoffDiagnostics& diag = spec.diagnostics;
    diag.correct_density = kde_on_grid(correct_scores, grid, h_correct);
    diag.incorrect_density = kde_on_grid(incorrect_scores, std::move(grid), h_incorrect);
    diag.crossings = density_crossings(diag.correct_density, diag.incorrect_density);
    diag.correct_median = median_of(correct_scores);
    diag.incorrect_median = median_of(incorrect_scores);

    const std::optional<double> chosen = replay_crossing_choice(diag, spec.direction);
    if (chosen) {
        spec.threshold = *chosen;
        return spec;
    }
    if (!options.quantile_fallback)
        throw Error(ErrorKind::no_crossing,
                    "determine_cutoff: no crossing on the low-quality side for " + method.id);

    // opt-in fallback: quantile of the incorrect-class scores toward the
    // good side, mirrored for lower_better methods
    diag.fallback_used = true;
    const double q = spec.direction == CutoffDirection::accept_above
                         ? options.fallback_quantile
                         : 1.0 - options.fallback_quantile;
    spec.threshold = quantile(incorrect_scores, q);
    return spec;
}

ConfidenceCorrelation confidence_quality_correlation(
    const std::map<std::string, double>& raw_scores, const PredictionLog& log) {
    std::vector<double> scores, confidences;
    for (const PredictionRow& row : log.rows) {
        auto it = raw_scores.find(row.image_id);
        if (it == raw_scores.end()) continue;
        scores.push_back(it->second);
        confidences.push_back(row.confidence);
    }
    if (scores.size() < 2)
        throw insufficient_samples("confidence_quality_correlation: fewer than 2 joined rows");
    ConfidenceCorrelation out;
    out.joined = scores.size();
    out.pcc = pcc(scores, confidences);
    out.srcc = srcc(scores, confidences);
    return out;
}

} // namespace qualgate
