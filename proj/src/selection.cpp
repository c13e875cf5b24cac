#include "qualgate/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qualgate/error.hpp"
#include "qualgate/stats.hpp"

namespace qualgate {

double ReportCell::mean_abs_pcc() const {
    if (abs_pcc.empty()) return std::nan("");
    return std::accumulate(abs_pcc.begin(), abs_pcc.end(), 0.0) / abs_pcc.size();
}

double ReportCell::mean_abs_srcc() const {
    if (abs_srcc.empty()) return std::nan("");
    return std::accumulate(abs_srcc.begin(), abs_srcc.end(), 0.0) / abs_srcc.size();
}

const ReportCell* CorrelationReport::find(const std::string& method,
                                          AugmentationKind kind) const {
    auto it = entries.find({method, kind});
    return it == entries.end() ? nullptr : &it->second;
}

const char* selection_statistic_name(SelectionStatistic s) {
    switch (s) {
    case SelectionStatistic::pcc: return "pcc";
    case SelectionStatistic::srcc: return "srcc";
    case SelectionStatistic::mean_of_both: return "mean_of_both";
    }
    return "unknown";
}

SelectionStatistic selection_statistic_from_name(const std::string& name) {
    if (name == "pcc") return SelectionStatistic::pcc;
    if (name == "srcc") return SelectionStatistic::srcc;
    if (name == "mean_of_both") return SelectionStatistic::mean_of_both;
    throw invalid_param("unknown selection statistic: " + name);
}

std::vector<std::pair<std::string, MetricFn>> builtin_metric_fns() {
    return {
        {"lapv", [](const GrayImage& img) { return lapv(img); }},
        {"lapm", [](const GrayImage& img) { return lapm(img); }},
        {"wavs", [](const GrayImage& img) { return wavs(img); }},
    };
}

CorrelationReport run_robustness_bench(
    const std::vector<std::pair<std::string, GrayImage>>& samples,
    const std::vector<std::pair<std::string, MetricFn>>& methods, const BenchConfig& config) {
    if (samples.empty()) throw invalid_param("bench: no samples");
    if (methods.empty()) throw invalid_param("bench: no methods");

    CorrelationReport report;
    for (const auto& [id, fn] : methods) report.method_ids.push_back(id);
    static constexpr AugmentationKind kKinds[3] = {AugmentationKind::crop,
                                                   AugmentationKind::rotate,
                                                   AugmentationKind::blur};
    for (const auto& [method, _] : methods)
        for (AugmentationKind kind : kKinds) report.entries[{method, kind}] = {};

    for (const auto& [sample_id, base] : samples) {
        std::vector<AugmentationSeries> series;
        series.push_back(crop_series(base, sample_id));
        series.push_back(rotation_series(base, sample_id, config.rotation_steps,
                                         config.rotation_step_degrees));
        series.push_back(blur_series(base, config.blur_sigmas, sample_id));

        for (const AugmentationSeries& s : series) {
            std::vector<double> index(s.steps.size());
            std::iota(index.begin(), index.end(), 0.0);
            for (const auto& [method, fn] : methods) {
                ReportCell& cell = report.entries[{method, s.kind}];
                if (cell.failure) continue;
                try {
                    std::vector<double> scores;
                    scores.reserve(s.steps.size());
                    for (const GrayImage& step : s.steps) scores.push_back(fn(step));
                    cell.abs_pcc.push_back(std::fabs(pcc(index, scores)));
                    cell.abs_srcc.push_back(std::fabs(srcc(index, scores)));
                } catch (const Error& e) {
                    cell.failure = std::string(e.kind_name()) + " on sample " + sample_id +
                                   ": " + e.what();
                }
            }
        }
    }
    return report;
}

namespace {

double cell_value(const ReportCell& cell, SelectionStatistic statistic) {
    switch (statistic) {
    case SelectionStatistic::pcc: return cell.mean_abs_pcc();
    case SelectionStatistic::srcc: return cell.mean_abs_srcc();
    case SelectionStatistic::mean_of_both:
        return 0.5 * (cell.mean_abs_pcc() + cell.mean_abs_srcc());
    }
    return std::nan("");
}

} // namespace

SelectionResult select_methods(const CorrelationReport& report,
                               const SelectionCriteria& criteria) {
    if (criteria.target_count < 1 || criteria.target_count % 2 == 0)
        throw invalid_param("select_methods: target_count must be odd and positive");

    SelectionResult result;
    for (const std::string& method : report.method_ids) {
        MethodSelection sel;
        sel.method_id = method;
        const ReportCell* crop = report.find(method, AugmentationKind::crop);
        const ReportCell* rot = report.find(method, AugmentationKind::rotate);
        const ReportCell* blur = report.find(method, AugmentationKind::blur);
        if (!crop || !rot || !blur)
            throw invalid_param("select_methods: report incomplete for " + method);

        for (const ReportCell* cell : {crop, rot, blur})
            if (cell->failure && !sel.failure) sel.failure = cell->failure;

        if (!sel.failure) {
            sel.crop_corr = cell_value(*crop, criteria.statistic);
            sel.rot_corr = cell_value(*rot, criteria.statistic);
            sel.blur_corr = cell_value(*blur, criteria.statistic);
            sel.crop_ok = sel.crop_corr <= criteria.max_crop_corr;
            sel.rot_ok = sel.rot_corr <= criteria.max_rot_corr;
            sel.blur_ok = sel.blur_corr >= criteria.min_blur_corr;
            sel.passed = sel.crop_ok && sel.rot_ok && sel.blur_ok;
            sel.composite = sel.blur_corr - std::max(sel.crop_corr, sel.rot_corr);
        }
        result.ranked.push_back(sel);
    }

    std::sort(result.ranked.begin(), result.ranked.end(),
              [](const MethodSelection& a, const MethodSelection& b) {
                  const double ca = a.failure ? -std::numeric_limits<double>::infinity()
                                              : a.composite;
                  const double cb = b.failure ? -std::numeric_limits<double>::infinity()
                                              : b.composite;
                  if (ca != cb) return ca > cb;
                  return a.method_id < b.method_id;
              });

    for (const MethodSelection& sel : result.ranked) {
        if (!sel.passed) continue;
        if (static_cast<int>(result.selected.size()) >= criteria.target_count) break;
        result.selected.push_back(sel.method_id);
    }
    result.underfilled = static_cast<int>(result.selected.size()) < criteria.target_count;
    return result;
}

} // namespace qualgate
