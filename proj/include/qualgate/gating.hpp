#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qualgate/cutoff.hpp"
#include "qualgate/metrics.hpp"

namespace qualgate {

enum class VoteValue { good, bad, missing };

const char* vote_value_name(VoteValue v);

/// Per-image voting outcome with the full per-method audit.
struct VoteDecision {
    std::string image_id;
    std::map<std::string, VoteValue> per_method;
    bool accepted = false;
};

/// One dataset entry as listed in the input manifest CSV.
struct DatasetEntry {
    std::string image_id;
    std::string path;
    std::string label;
    std::string split;
};

enum class SubsetKind { high_quality, matched_random, percent_removed };

const char* subset_kind_name(SubsetKind k);
SubsetKind subset_kind_from_name(const std::string& name);

enum class PoolMode { redraw_per_percent, shared };

const char* pool_mode_name(PoolMode m);
PoolMode pool_mode_from_name(const std::string& name);

/// Everything required to regenerate the manifest byte-identically. The
/// pool size is recorded explicitly because in shared mode it depends on
/// the largest percent of the original series, not on this entry alone.
struct SubsetRecipe {
    SubsetKind kind = SubsetKind::high_quality;
    uint64_t seed = 0;
    size_t target_n = 0;
    double percent = 0.0;
    size_t pool_size = 0;
    PoolMode pool_mode = PoolMode::redraw_per_percent;
    std::vector<std::string> method_ids; // voting or aggregate methods
};

struct SubsetManifest {
    std::string name;
    std::string source_dataset;
    SubsetRecipe recipe;
    std::vector<std::string> image_ids; // input order
    std::vector<VoteDecision> votes;    // high_quality manifests only
};

/// Majority vote over the cutoffs: a method votes good iff the image's score
/// sits on the accept side of its threshold (boundary counts as good), a
/// missing score votes bad, and acceptance needs a strict majority of the
/// voting methods. raw_scores are raw; each cutoff maps them into its own
/// score space.
VoteDecision vote(const std::string& image_id,
                  const std::map<std::string, double>& raw_scores,
                  const std::vector<CutoffSpec>& cutoffs);

struct FilterOutcome {
    SubsetManifest accepted;
    std::vector<VoteDecision> rejected;
    bool empty_subset = false;
    size_t missing_score_count = 0;
};

/// High-quality subset: vote every dataset image in input order.
FilterOutcome filter_dataset(const std::vector<DatasetEntry>& dataset,
                             const std::string& source_name, const ScoreTable& scores,
                             const std::vector<CutoffSpec>& cutoffs);

/// Uniform sample without replacement, seeded; output keeps input order.
SubsetManifest matched_random_subset(const std::vector<DatasetEntry>& dataset,
                                     const std::string& source_name, size_t n, uint64_t seed);

/// Polarity-oriented, min-max-normalized per-method scores averaged with
/// equal weight; higher = better quality. Normalization spans the whole
/// dataset so ranks do not depend on pool draws.
std::map<std::string, double> aggregate_quality(const std::vector<DatasetEntry>& dataset,
                                                const ScoreTable& scores,
                                                const MethodRegistry& registry,
                                                const std::vector<std::string>& method_ids);

/// For each percent p: draw a seeded pool of ceil(target_n / (1 - p/100))
/// images, drop the lowest p% by aggregate quality rank (ties broken by
/// image id), then trim uniformly at random to target_n. PoolMode::shared
/// draws one pool sized for the largest percent, which makes the removed
/// sets nested across percents.
std::vector<SubsetManifest> percent_removed_series(
    const std::vector<DatasetEntry>& dataset, const std::string& source_name,
    const ScoreTable& scores, const MethodRegistry& registry,
    const std::vector<std::string>& method_ids, const std::vector<double>& percents,
    size_t target_n, uint64_t seed, PoolMode pool_mode = PoolMode::redraw_per_percent);

/// Rebuild a manifest from its recipe; byte-identical to the original.
SubsetManifest regenerate(const SubsetRecipe& recipe, const std::vector<DatasetEntry>& dataset,
                          const std::string& source_name, const ScoreTable& scores,
                          const MethodRegistry& registry,
                          const std::vector<CutoffSpec>& cutoffs);

} // namespace qualgate
