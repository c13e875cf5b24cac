#include "qualgate/gating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qualgate/error.hpp"
#include "qualgate/rng.hpp"

namespace qualgate {

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + stream * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<size_t> sample_indices_without_replacement(size_t n, size_t k, Rng& rng) {
    if (k > n) throw invalid_param("sample: k exceeds population");
    std::vector<size_t> pool(n);
    std::iota(pool.begin(), pool.end(), size_t{0});
    for (size_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[i + rng.below(n - i)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

const char* vote_value_name(VoteValue v) {
    switch (v) {
    case VoteValue::good: return "good";
    case VoteValue::bad: return "bad";
    case VoteValue::missing: return "missing";
    }
    return "unknown";
}

const char* subset_kind_name(SubsetKind k) {
    switch (k) {
    case SubsetKind::high_quality: return "high_quality";
    case SubsetKind::matched_random: return "matched_random";
    case SubsetKind::percent_removed: return "percent_removed";
    }
    return "unknown";
}

SubsetKind subset_kind_from_name(const std::string& name) {
    if (name == "high_quality") return SubsetKind::high_quality;
    if (name == "matched_random") return SubsetKind::matched_random;
    if (name == "percent_removed") return SubsetKind::percent_removed;
    throw invalid_param("unknown subset kind: " + name);
}

const char* pool_mode_name(PoolMode m) {
    return m == PoolMode::redraw_per_percent ? "redraw_per_percent" : "shared";
}

PoolMode pool_mode_from_name(const std::string& name) {
    if (name == "redraw_per_percent") return PoolMode::redraw_per_percent;
    if (name == "shared") return PoolMode::shared;
    throw invalid_param("unknown pool mode: " + name);
}

VoteDecision vote(const std::string& image_id, const std::map<std::string, double>& raw_scores,
                  const std::vector<CutoffSpec>& cutoffs) {
    if (cutoffs.empty())
        throw Error(ErrorKind::no_voters, "vote: no applicable cutoffs");
    VoteDecision decision;
    decision.image_id = image_id;
    size_t good = 0;
    for (const CutoffSpec& cutoff : cutoffs) {
        auto it = raw_scores.find(cutoff.method_id);
        if (it == raw_scores.end() || !std::isfinite(it->second)) {
            decision.per_method[cutoff.method_id] = VoteValue::missing;
            continue;
        }
        const bool ok = cutoff.accepts(cutoff.to_score_space(it->second));
        decision.per_method[cutoff.method_id] = ok ? VoteValue::good : VoteValue::bad;
        if (ok) ++good;
    }
    const size_t required = cutoffs.size() / 2 + 1; // strict majority
    decision.accepted = good >= required;
    return decision;
}

FilterOutcome filter_dataset(const std::vector<DatasetEntry>& dataset,
                             const std::string& source_name, const ScoreTable& scores,
                             const std::vector<CutoffSpec>& cutoffs) {
    FilterOutcome outcome;
    outcome.accepted.name = "high_quality";
    outcome.accepted.source_dataset = source_name;
    outcome.accepted.recipe.kind = SubsetKind::high_quality;
    for (const CutoffSpec& cutoff : cutoffs)
        outcome.accepted.recipe.method_ids.push_back(cutoff.method_id);

    std::map<std::string, std::map<std::string, double>> columns;
    for (const CutoffSpec& cutoff : cutoffs)
        columns[cutoff.method_id] = scores.column(cutoff.method_id);

    for (const DatasetEntry& entry : dataset) {
        std::map<std::string, double> image_scores;
        for (const CutoffSpec& cutoff : cutoffs) {
            const auto& column = columns[cutoff.method_id];
            auto it = column.find(entry.image_id);
            if (it == column.end()) {
                ++outcome.missing_score_count;
                continue;
            }
            image_scores[cutoff.method_id] = it->second;
        }
        VoteDecision decision = vote(entry.image_id, image_scores, cutoffs);
        if (decision.accepted) {
            outcome.accepted.image_ids.push_back(entry.image_id);
            outcome.accepted.votes.push_back(std::move(decision));
        } else {
            outcome.rejected.push_back(std::move(decision));
        }
    }
    outcome.empty_subset = outcome.accepted.image_ids.empty();
    return outcome;
}

SubsetManifest matched_random_subset(const std::vector<DatasetEntry>& dataset,
                                     const std::string& source_name, size_t n, uint64_t seed) {
    if (n > dataset.size())
        throw invalid_param("matched_random_subset: n exceeds dataset size");
    SubsetManifest manifest;
    manifest.name = "matched_random";
    manifest.source_dataset = source_name;
    manifest.recipe.kind = SubsetKind::matched_random;
    manifest.recipe.seed = seed;
    manifest.recipe.target_n = n;
    Rng rng(seed);
    for (size_t idx : sample_indices_without_replacement(dataset.size(), n, rng))
        manifest.image_ids.push_back(dataset[idx].image_id);
    return manifest;
}

std::map<std::string, double> aggregate_quality(const std::vector<DatasetEntry>& dataset,
                                                const ScoreTable& scores,
                                                const MethodRegistry& registry,
                                                const std::vector<std::string>& method_ids) {
    if (method_ids.empty()) throw invalid_param("aggregate_quality: no methods");
    std::map<std::string, double> aggregate;
    std::map<std::string, size_t> counted;
    for (const std::string& method : method_ids) {
        const Polarity polarity = registry.get(method).polarity;
        const std::map<std::string, double> column = scores.column(method);
        std::vector<double> values;
        values.reserve(dataset.size());
        for (const DatasetEntry& entry : dataset) {
            auto it = column.find(entry.image_id);
            if (it == column.end())
                throw invalid_param("aggregate_quality: no " + method + " score for " +
                                    entry.image_id);
            values.push_back(it->second);
        }
        const std::vector<double> normalized = minmax_normalize(values);
        for (size_t i = 0; i < dataset.size(); ++i) {
            const double oriented =
                polarity == Polarity::higher_better ? normalized[i] : 1.0 - normalized[i];
            aggregate[dataset[i].image_id] += oriented;
            ++counted[dataset[i].image_id];
        }
    }
    for (auto& [id, value] : aggregate) value /= static_cast<double>(counted[id]);
    return aggregate;
}

namespace {

SubsetManifest one_percent_subset(const std::vector<DatasetEntry>& dataset,
                                  const std::string& source_name,
                                  const std::map<std::string, double>& aggregate,
                                  const std::vector<std::string>& method_ids, double percent,
                                  size_t pool_size, size_t target_n, uint64_t seed,
                                  PoolMode pool_mode) {
    Rng rng(mix_seed(seed, static_cast<uint64_t>(std::llround(percent * 100.0))));
    if (pool_mode == PoolMode::shared) rng = Rng(mix_seed(seed, 0));

    std::vector<size_t> pool = sample_indices_without_replacement(dataset.size(), pool_size, rng);

    // rank pool members by aggregate quality, worst first; ties by image id
    std::vector<size_t> ranked = pool;
    std::sort(ranked.begin(), ranked.end(), [&](size_t a, size_t b) {
        const double qa = aggregate.at(dataset[a].image_id);
        const double qb = aggregate.at(dataset[b].image_id);
        if (qa != qb) return qa < qb;
        return dataset[a].image_id < dataset[b].image_id;
    });
    size_t removed = static_cast<size_t>(std::llround(pool_size * percent / 100.0));
    removed = std::min(removed, pool_size - target_n);
    std::vector<size_t> kept(ranked.begin() + removed, ranked.end());
    std::sort(kept.begin(), kept.end());

    if (kept.size() > target_n) {
        std::vector<size_t> trim = sample_indices_without_replacement(kept.size(), target_n, rng);
        std::vector<size_t> trimmed;
        trimmed.reserve(target_n);
        for (size_t t : trim) trimmed.push_back(kept[t]);
        kept = std::move(trimmed);
    }

    SubsetManifest manifest;
    manifest.name = "percent_removed_" + std::to_string(static_cast<int>(std::llround(percent)));
    manifest.source_dataset = source_name;
    manifest.recipe.kind = SubsetKind::percent_removed;
    manifest.recipe.seed = seed;
    manifest.recipe.target_n = target_n;
    manifest.recipe.percent = percent;
    manifest.recipe.pool_size = pool_size;
    manifest.recipe.pool_mode = pool_mode;
    manifest.recipe.method_ids = method_ids;
    for (size_t idx : kept) manifest.image_ids.push_back(dataset[idx].image_id);
    return manifest;
}

size_t pool_size_for(double percent, size_t target_n) {
    return static_cast<size_t>(std::ceil(target_n / (1.0 - percent / 100.0)));
}

} // namespace

std::vector<SubsetManifest> percent_removed_series(
    const std::vector<DatasetEntry>& dataset, const std::string& source_name,
    const ScoreTable& scores, const MethodRegistry& registry,
    const std::vector<std::string>& method_ids, const std::vector<double>& percents,
    size_t target_n, uint64_t seed, PoolMode pool_mode) {
    if (percents.empty()) throw invalid_param("percent_removed_series: no percents");
    double max_percent = 0.0;
    for (double p : percents) {
        if (p < 0.0 || p >= 100.0)
            throw invalid_param("percent_removed_series: percent outside [0,100)");
        max_percent = std::max(max_percent, p);
    }
    if (pool_size_for(max_percent, target_n) > dataset.size())
        throw invalid_param("percent_removed_series: target_n infeasible for largest percent");

    const std::map<std::string, double> aggregate =
        aggregate_quality(dataset, scores, registry, method_ids);

    const size_t shared_pool = pool_size_for(max_percent, target_n);
    std::vector<SubsetManifest> out;
    for (double p : percents) {
        const size_t pool_size =
            pool_mode == PoolMode::shared ? shared_pool : pool_size_for(p, target_n);
        out.push_back(one_percent_subset(dataset, source_name, aggregate, method_ids, p,
                                         pool_size, target_n, seed, pool_mode));
    }
    return out;
}

SubsetManifest regenerate(const SubsetRecipe& recipe, const std::vector<DatasetEntry>& dataset,
                          const std::string& source_name, const ScoreTable& scores,
                          const MethodRegistry& registry,
                          const std::vector<CutoffSpec>& cutoffs) {
    switch (recipe.kind) {
    case SubsetKind::high_quality:
        return filter_dataset(dataset, source_name, scores, cutoffs).accepted;
    case SubsetKind::matched_random:
        return matched_random_subset(dataset, source_name, recipe.target_n, recipe.seed);
    case SubsetKind::percent_removed: {
        const auto aggregate = aggregate_quality(dataset, scores, registry, recipe.method_ids);
        return one_percent_subset(dataset, source_name, aggregate, recipe.method_ids,
                                  recipe.percent, recipe.pool_size, recipe.target_n,
                                  recipe.seed, recipe.pool_mode);
    }
    }
    throw invalid_param("regenerate: unknown recipe kind");
}

} // namespace qualgate
