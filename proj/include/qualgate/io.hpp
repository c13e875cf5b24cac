#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qualgate/cutoff.hpp"
#include "qualgate/gating.hpp"
#include "qualgate/image.hpp"
#include "qualgate/metrics.hpp"
#include "qualgate/selection.hpp"

namespace qualgate {

/// Shortest round-trip decimal representation; the single formatter for every
/// artifact so identical doubles always serialize identically.
std::string format_double(double value);

/// Write-then-rename so partially written artifacts never appear under the
/// final name.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// ---- images ----------------------------------------------------------------

/// PNG/JPEG loader; color inputs reduce to Rec. 601 luminance, 16-bit inputs
/// rescale to [0,255].
GrayImage load_image_gray(const std::filesystem::path& path);

/// 8-bit grayscale PNG, values clamped to [0,255] and rounded.
void save_image_png(const GrayImage& img, const std::filesystem::path& path);

/// Write series steps as {base_id}_{kind}_{k:02}.png plus a JSON sidecar
/// listing step_params.
void write_series(const AugmentationSeries& series, const std::filesystem::path& dir);

// ---- CSV artifacts ----------------------------------------------------------

std::string score_table_to_csv(const ScoreTable& table);
ScoreTable score_table_from_csv(const std::string& text);

PredictionLog prediction_log_from_csv(const std::string& text);

std::vector<DatasetEntry> dataset_from_csv(const std::string& text);
std::string dataset_to_csv(const std::vector<DatasetEntry>& entries);

/// Robustness table, one row per (augmentation, statistic), one column per
/// method.
std::string report_to_csv(const CorrelationReport& report);

// ---- JSON artifacts ---------------------------------------------------------

std::string report_to_json(const CorrelationReport& report);
CorrelationReport report_from_json(const std::string& text);

std::string selection_to_json(const SelectionResult& result, const SelectionCriteria& criteria);

std::string cutoffs_to_json(const std::vector<CutoffSpec>& cutoffs);
std::vector<CutoffSpec> cutoffs_from_json(const std::string& text);

std::string manifest_to_json(const SubsetManifest& manifest);
SubsetManifest manifest_from_json(const std::string& text);

/// Full vote audit for a filter run: every dataset image, accepted flag,
/// one vote column per method.
std::string votes_to_csv(const std::vector<DatasetEntry>& dataset,
                         const std::vector<VoteDecision>& accepted,
                         const std::vector<VoteDecision>& rejected,
                         const std::vector<std::string>& method_ids);

SvrModel svr_model_from_json(const std::string& text);
std::string svr_model_to_json(const SvrModel& model);

PristineModel pristine_model_from_json(const std::string& text);
std::string pristine_model_to_json(const PristineModel& model);

std::string density_curve_to_json(const DensityCurve& curve);

} // namespace qualgate
