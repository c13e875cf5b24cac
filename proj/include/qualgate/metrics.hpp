#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qualgate/image.hpp"
#include "qualgate/stats.hpp"
#include "qualgate/wavelet.hpp"

namespace qualgate {

enum class Polarity { higher_better, lower_better };
enum class Normalization { raw, minmax };

const char* polarity_name(Polarity p);
Polarity polarity_from_name(const std::string& name);

/// Identity + interpretation of one scoring method. Built-in ids are
/// lapv|lapm|wavs|brisque|niqe; externally produced scores use
/// "external:<name>".
struct MethodDescriptor {
    std::string id;
    Polarity polarity = Polarity::higher_better;
    Normalization normalization = Normalization::minmax;
};

/// Descriptor registry; seeded with the built-in methods, external methods
/// are added explicitly before ingestion.
class MethodRegistry {
public:
    static MethodRegistry with_builtins();

    void add(const MethodDescriptor& descriptor);
    bool contains(const std::string& id) const;
    const MethodDescriptor& get(const std::string& id) const;
    std::vector<std::string> ids() const;

private:
    std::map<std::string, MethodDescriptor> methods_;
};

struct ScoreRow {
    std::string image_id;
    std::string method_id;
    double raw = 0.0;
    std::optional<double> normalized;
};

/// Per-(image, method) score accumulator. Append-only; (image, method) pairs
/// are unique; rows() returns them sorted so output order is independent of
/// insertion order.
class ScoreTable {
public:
    void add(ScoreRow row);
    const std::vector<ScoreRow>& rows() const;

    bool has(const std::string& image_id, const std::string& method_id) const;
    std::vector<std::string> method_ids() const;
    /// raw scores of one method keyed by image id
    std::map<std::string, double> column(const std::string& method_id) const;

    /// Fill the normalized field per method by min-max over this table.
    /// Methods with constant raw columns are left unnormalized.
    void normalize_minmax(const MethodRegistry& registry);

    size_t size() const { return rows_.size(); }

private:
    mutable std::vector<ScoreRow> rows_;
    mutable bool sorted_ = true;
    std::set<std::pair<std::string, std::string>> seen_;
};

// ---- focus measures -------------------------------------------------------

/// Variance of the 3x3 Laplacian response over the valid region.
double lapv(const GrayImage& img);

/// Mean modified-Laplacian magnitude |2f-fx-1-fx+1| + |2f-fy-1-fy+1| over
/// interior pixels. Per-pixel mean rather than a raw sum so the score does
/// not scale with resolution.
double lapm(const GrayImage& img);

/// Mean absolute first-level DWT detail coefficient (LH, HL, HH union).
/// db6 default; haar is exact on tiny hand cases.
double wavs(const GrayImage& img, WaveletKind wavelet = WaveletKind::db6);

// ---- BRISQUE --------------------------------------------------------------

/// 36 spatial NSS features: per scale (original + bicubic half) a GGD fit of
/// the MSCN field (alpha, sigma) plus AGGD fits (alpha, eta, sigma_l,
/// sigma_r) of the four orientation products H, V, D1, D2.
std::array<double, 36> brisque_features(const GrayImage& img);

/// RBF-SVR parameters; support vectors live in the [-1,1] scaled feature
/// space. The optional reference row lets a loaded file self-check.
struct SvrModel {
    double gamma = 0.0;
    double rho = 0.0;
    std::array<double, 36> feature_min{};
    std::array<double, 36> feature_max{};
    std::vector<std::array<double, 36>> support_vectors;
    std::vector<double> sv_coef;

    struct Reference {
        std::array<double, 36> features{};
        double score = 0.0;
    };
    std::optional<Reference> reference;
};

/// sum_i coef_i * exp(-gamma * ||scale(f) - sv_i||^2) - rho; lower is better.
double brisque_score(const std::array<double, 36>& features, const SvrModel& model);

// ---- NIQE -----------------------------------------------------------------

struct PristineModel {
    MvgModel mvg;
    int patch_size = 96;
    double sharpness_keep_fraction = 0.75;
};

/// Fit the pristine MVG over sharp patch features: partition each corpus
/// image into patch_size squares, keep patches whose mean local sigma is at
/// least keep_fraction of the per-image maximum, compute 36 features per
/// kept patch.
PristineModel niqe_fit(const std::vector<GrayImage>& corpus, int patch_size = 96,
                       double sharpness_keep_fraction = 0.75);

/// Mahalanobis-style distance between the pristine MVG and the MVG of the
/// image's own patch features, with a pseudo-inverse when the pooled
/// covariance is singular. All patches of the image participate.
double niqe_score(const GrayImage& img, const PristineModel& model);

// ---- external scores ------------------------------------------------------

/// Parse "image_id,method,raw_score" CSV text (optional header) and merge
/// into the table. Methods must be registered; duplicates and non-finite
/// scores are errors.
void ingest_external_scores(const std::string& csv_text, const MethodRegistry& registry,
                            ScoreTable& table);

} // namespace qualgate
