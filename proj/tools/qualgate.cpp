// qualgate: NRIQA-guided dataset curation pipeline.
// Subcommands: score, bench, select, cutoff, filter, subset, report.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qualgate/config.hpp"
#include "qualgate/cutoff.hpp"
#include "qualgate/error.hpp"
#include "qualgate/gating.hpp"
#include "qualgate/io.hpp"
#include "qualgate/metrics.hpp"
#include "qualgate/selection.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qualgate;

namespace {

// flag/path/config problems exit 1; data problems exit 2
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LogLevel { quiet = 0, normal = 1, verbose = 2 };

struct Logger {
    LogLevel level = LogLevel::normal;
    void info(const std::string& message) const {
        if (level >= LogLevel::normal) std::cerr << message << "\n";
    }
    void debug(const std::string& message) const {
        if (level >= LogLevel::verbose) std::cerr << "[v] " << message << "\n";
    }
};

struct GlobalOptions {
    RunConfig config;
    Logger log;
    int jobs = 0;
    std::optional<uint64_t> seed_flag;

    uint64_t resolve_seed() const {
        if (seed_flag) return *seed_flag;
        if (config.seed != 0) return config.seed;
        if (const char* env = std::getenv("QUALGATE_SEED")) {
            try {
                return std::stoull(env);
            } catch (const std::exception&) {
                throw ValidationError("QUALGATE_SEED is not an integer");
            }
        }
        return 0;
    }

    int effective_jobs() const {
        if (jobs > 0) return jobs;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
};

void require_exists(const fs::path& path, const char* what) {
    if (!fs::exists(path))
        throw ValidationError(std::string(what) + " not found: " + path.string());
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_percent_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : split_list(text)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("bad percent value: " + item);
        }
    }
    return out;
}

bool is_image_file(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

/// (id, path) pairs; directory scans sort by filename for stable order.
std::vector<std::pair<std::string, fs::path>> collect_images(const fs::path& dir) {
    require_exists(dir, "image directory");
    if (!fs::is_directory(dir))
        throw ValidationError("not a directory: " + dir.string());
    std::vector<std::pair<std::string, fs::path>> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_image_file(entry.path()))
            out.push_back({entry.path().stem().string(), entry.path()});
    std::sort(out.begin(), out.end());
    if (out.empty()) throw ValidationError("no PNG/JPEG images in " + dir.string());
    return out;
}

/// Run fn(i) over [0, n) on a worker pool; the first exception resurfaces
/// after join.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            try {
                for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

struct MetricStack {
    std::vector<std::pair<std::string, MetricFn>> fns;
    std::shared_ptr<SvrModel> svr;
    std::shared_ptr<PristineModel> pristine;
};

/// Build scorers for the requested method ids. External methods are skipped
/// here; their scores arrive via --external files.
MetricStack build_metrics(const std::vector<std::string>& methods, const GlobalOptions& options,
                          const std::string& brisque_model_path,
                          const std::string& niqe_model_path,
                          const std::string& niqe_corpus_path) {
    MetricStack stack;
    for (const std::string& id : methods) {
        if (id == "lapv")
            stack.fns.push_back({id, [](const GrayImage& img) { return lapv(img); }});
        else if (id == "lapm")
            stack.fns.push_back({id, [](const GrayImage& img) { return lapm(img); }});
        else if (id == "wavs")
            stack.fns.push_back({id, [](const GrayImage& img) { return wavs(img); }});
        else if (id == "brisque") {
            if (brisque_model_path.empty())
                throw ValidationError("brisque requires --brisque-model");
            require_exists(brisque_model_path, "brisque model");
            stack.svr = std::make_shared<SvrModel>(svr_model_from_json(read_file(brisque_model_path)));
            auto model = stack.svr;
            stack.fns.push_back({id, [model](const GrayImage& img) {
                                     return brisque_score(brisque_features(img), *model);
                                 }});
        } else if (id == "niqe") {
            if (!niqe_model_path.empty()) {
                require_exists(niqe_model_path, "niqe model");
                stack.pristine = std::make_shared<PristineModel>(
                    pristine_model_from_json(read_file(niqe_model_path)));
            } else if (!niqe_corpus_path.empty()) {
                const auto corpus_files = collect_images(niqe_corpus_path);
                std::vector<GrayImage> corpus;
                for (const auto& [cid, cpath] : corpus_files)
                    corpus.push_back(load_image_gray(cpath));
                options.log.debug("fitting niqe pristine model on " +
                                  std::to_string(corpus.size()) + " images");
                stack.pristine = std::make_shared<PristineModel>(niqe_fit(corpus));
            } else {
                throw ValidationError("niqe requires --niqe-model or --niqe-corpus");
            }
            auto model = stack.pristine;
            stack.fns.push_back(
                {id, [model](const GrayImage& img) { return niqe_score(img, *model); }});
        } else if (id.rfind("external:", 0) == 0) {
            // nothing to compute
        } else {
            throw ValidationError("unknown method: " + id);
        }
    }
    return stack;
}

// ---- score ------------------------------------------------------------------

struct ScoreArgs {
    std::string images_dir;
    std::string dataset_csv;
    std::string methods = "lapv,lapm,wavs";
    std::string out;
    std::string brisque_model;
    std::string niqe_model;
    std::string niqe_corpus;
    std::string niqe_model_out;
    std::vector<std::string> external_files;
};

int cmd_score(const ScoreArgs& args, const GlobalOptions& options) {
    const std::vector<std::string> method_ids = split_list(args.methods);
    if (method_ids.empty()) throw ValidationError("no methods requested");
    if (args.images_dir.empty() == args.dataset_csv.empty())
        throw ValidationError("exactly one of --images / --dataset is required");

    std::vector<std::pair<std::string, fs::path>> inputs;
    if (!args.images_dir.empty()) {
        inputs = collect_images(args.images_dir);
    } else {
        require_exists(args.dataset_csv, "dataset manifest");
        for (const DatasetEntry& entry : dataset_from_csv(read_file(args.dataset_csv)))
            inputs.push_back({entry.image_id, entry.path});
        for (const auto& [id, path] : inputs) require_exists(path, "dataset image");
    }

    const MethodRegistry registry = options.config.build_registry();
    for (const std::string& id : method_ids)
        if (!registry.contains(id)) throw ValidationError("method has no descriptor: " + id);
    for (const std::string& file : args.external_files) require_exists(file, "external scores");

    MetricStack stack = build_metrics(method_ids, options, args.brisque_model, args.niqe_model,
                                      args.niqe_corpus);
    if (stack.pristine && !args.niqe_model_out.empty())
        atomic_write_file(args.niqe_model_out, pristine_model_to_json(*stack.pristine));

    options.log.debug("scoring " + std::to_string(inputs.size()) + " images with " +
                      std::to_string(stack.fns.size()) + " computed methods, jobs=" +
                      std::to_string(options.effective_jobs()));

    // per-image results computed in parallel, merged in input order
    std::vector<std::vector<std::pair<std::string, double>>> results(inputs.size());
    parallel_for(inputs.size(), options.effective_jobs(), [&](size_t i) {
        const GrayImage img = load_image_gray(inputs[i].second);
        for (const auto& [id, fn] : stack.fns) results[i].push_back({id, fn(img)});
    });

    ScoreTable table;
    for (size_t i = 0; i < inputs.size(); ++i)
        for (const auto& [method, value] : results[i])
            table.add({inputs[i].first, method, value, std::nullopt});
    for (const std::string& file : args.external_files)
        ingest_external_scores(read_file(file), registry, table);
    table.normalize_minmax(registry);

    atomic_write_file(args.out, score_table_to_csv(table));
    options.log.info("wrote " + std::to_string(table.size()) + " scores to " + args.out);
    return 0;
}

// ---- bench ------------------------------------------------------------------

struct BenchArgs {
    std::string samples_dir;
    std::string methods = "lapv,lapm,wavs";
    std::string out_dir;
    std::string brisque_model;
    std::string niqe_model;
    std::string dump_series_dir;
};

int cmd_bench(const BenchArgs& args, const GlobalOptions& options) {
    const auto files = collect_images(args.samples_dir);
    const std::vector<std::string> method_ids = split_list(args.methods);
    MetricStack stack =
        build_metrics(method_ids, options, args.brisque_model, args.niqe_model, "");
    if (stack.fns.empty()) throw ValidationError("no computable methods requested");

    std::vector<std::pair<std::string, GrayImage>> samples;
    for (const auto& [id, path] : files) samples.push_back({id, load_image_gray(path)});

    BenchConfig bench_config;
    bench_config.blur_sigmas = options.config.blur_sigmas;
    bench_config.rotation_steps = options.config.rotation_steps;
    bench_config.rotation_step_degrees = options.config.rotation_step_degrees;
    options.log.debug("bench: rotation_steps=" + std::to_string(bench_config.rotation_steps) +
                      " blur_steps=" + std::to_string(bench_config.blur_sigmas.size()));

    if (!args.dump_series_dir.empty()) {
        for (const auto& [id, img] : samples) {
            write_series(crop_series(img, id), args.dump_series_dir);
            write_series(rotation_series(img, id, bench_config.rotation_steps,
                                         bench_config.rotation_step_degrees),
                         args.dump_series_dir);
            write_series(blur_series(img, bench_config.blur_sigmas, id), args.dump_series_dir);
        }
    }

    const CorrelationReport report = run_robustness_bench(samples, stack.fns, bench_config);
    atomic_write_file(fs::path(args.out_dir) / "report.csv", report_to_csv(report));
    atomic_write_file(fs::path(args.out_dir) / "report.json", report_to_json(report));
    options.log.info("bench report over " + std::to_string(samples.size()) + " samples -> " +
                     args.out_dir);
    return 0;
}

// ---- select -----------------------------------------------------------------

struct SelectArgs {
    std::string report_json;
    std::string out;
    std::optional<double> max_crop;
    std::optional<double> max_rot;
    std::optional<double> min_blur;
    std::optional<int> target_count;
    std::string statistic;
};

int cmd_select(const SelectArgs& args, const GlobalOptions& options) {
    require_exists(args.report_json, "bench report");
    const CorrelationReport report = report_from_json(read_file(args.report_json));
    SelectionCriteria criteria = options.config.selection;
    if (args.max_crop) criteria.max_crop_corr = *args.max_crop;
    if (args.max_rot) criteria.max_rot_corr = *args.max_rot;
    if (args.min_blur) criteria.min_blur_corr = *args.min_blur;
    if (args.target_count) criteria.target_count = *args.target_count;
    if (!args.statistic.empty())
        criteria.statistic = selection_statistic_from_name(args.statistic);
    const SelectionResult result = select_methods(report, criteria);
    atomic_write_file(args.out, selection_to_json(result, criteria));
    if (result.underfilled)
        options.log.info("UnderfilledSelection: only " + std::to_string(result.selected.size()) +
                         " methods pass the criteria");
    std::string picked;
    for (const std::string& id : result.selected) picked += (picked.empty() ? "" : ",") + id;
    options.log.info("selected: " + (picked.empty() ? "(none)" : picked));
    return 0;
}

// ---- cutoff -----------------------------------------------------------------

struct CutoffArgs {
    std::string scores_csv;
    std::string predictions_csv;
    std::string methods;
    std::string out;
    std::string density_out_dir;
    bool fallback = false;
};

int cmd_cutoff(const CutoffArgs& args, const GlobalOptions& options) {
    require_exists(args.scores_csv, "scores");
    require_exists(args.predictions_csv, "predictions");
    const std::vector<std::string> method_ids = split_list(args.methods);
    if (method_ids.empty()) throw ValidationError("no methods requested");

    const MethodRegistry registry = options.config.build_registry();
    for (const std::string& id : method_ids)
        if (!registry.contains(id)) throw ValidationError("method has no descriptor: " + id);

    const ScoreTable table = score_table_from_csv(read_file(args.scores_csv));
    const PredictionLog log = prediction_log_from_csv(read_file(args.predictions_csv));

    std::vector<CutoffSpec> cutoffs;
    for (const std::string& id : method_ids) {
        CutoffOptions cutoff_options;
        cutoff_options.score_space = options.config.cutoff_space_for(id);
        cutoff_options.quantile_fallback =
            args.fallback || options.config.cutoff_quantile_fallback;
        cutoff_options.fallback_quantile = options.config.cutoff_fallback_quantile;

        const CutoffSpec spec =
            determine_cutoff(table.column(id), log, registry.get(id), cutoff_options);
        options.log.debug("cutoff " + id + ": h_correct=" +
                          format_double(spec.diagnostics.correct_density.bandwidth) +
                          " h_incorrect=" +
                          format_double(spec.diagnostics.incorrect_density.bandwidth) + " " +
                          std::to_string(spec.diagnostics.crossings.size()) + " crossings");
        const ConfidenceCorrelation corr = confidence_quality_correlation(table.column(id), log);
        options.log.info(id + ": threshold " + format_double(spec.threshold) + " (" +
                         score_space_name(spec.score_space) + "), score-confidence pcc " +
                         format_double(corr.pcc) + " srcc " + format_double(corr.srcc));
        cutoffs.push_back(spec);
    }

    atomic_write_file(args.out, cutoffs_to_json(cutoffs));
    if (!args.density_out_dir.empty()) {
        for (const CutoffSpec& spec : cutoffs) {
            atomic_write_file(fs::path(args.density_out_dir) / (spec.method_id + "_correct.json"),
                              density_curve_to_json(spec.diagnostics.correct_density));
            atomic_write_file(
                fs::path(args.density_out_dir) / (spec.method_id + "_incorrect.json"),
                density_curve_to_json(spec.diagnostics.incorrect_density));
        }
    }
    return 0;
}

// ---- filter -----------------------------------------------------------------

struct FilterArgs {
    std::string dataset_csv;
    std::string scores_csv;
    std::string cutoffs_json;
    std::string out_dir;
};

int cmd_filter(const FilterArgs& args, const GlobalOptions& options) {
    require_exists(args.dataset_csv, "dataset manifest");
    require_exists(args.scores_csv, "scores");
    require_exists(args.cutoffs_json, "cutoffs");

    const auto dataset = dataset_from_csv(read_file(args.dataset_csv));
    const ScoreTable scores = score_table_from_csv(read_file(args.scores_csv));
    const std::vector<CutoffSpec> cutoffs = cutoffs_from_json(read_file(args.cutoffs_json));

    FilterOutcome outcome =
        filter_dataset(dataset, fs::path(args.dataset_csv).stem().string(), scores, cutoffs);
    if (outcome.missing_score_count > 0)
        options.log.info("warning: " + std::to_string(outcome.missing_score_count) +
                         " missing scores voted bad");
    if (outcome.empty_subset) options.log.info("warning: EmptySubset, nothing accepted");

    std::vector<std::string> method_ids;
    for (const CutoffSpec& spec : cutoffs) method_ids.push_back(spec.method_id);

    atomic_write_file(fs::path(args.out_dir) / "manifest.json",
                      manifest_to_json(outcome.accepted));
    atomic_write_file(fs::path(args.out_dir) / "votes.csv",
                      votes_to_csv(dataset, outcome.accepted.votes, outcome.rejected, method_ids));
    options.log.info("accepted " + std::to_string(outcome.accepted.image_ids.size()) + " of " +
                     std::to_string(dataset.size()) + " images");
    return 0;
}

// ---- subset -----------------------------------------------------------------

struct SubsetArgs {
    std::string mode; // matched | percent-series
    std::string dataset_csv;
    std::string scores_csv;
    std::string methods;
    std::string percents = "0,10,20,30,40,50";
    std::string pool_mode = "redraw_per_percent";
    size_t n = 0;
    std::string out_dir;
};

int cmd_subset(const SubsetArgs& args, const GlobalOptions& options) {
    require_exists(args.dataset_csv, "dataset manifest");
    const auto dataset = dataset_from_csv(read_file(args.dataset_csv));
    const std::string source = fs::path(args.dataset_csv).stem().string();
    const uint64_t seed = options.resolve_seed();
    options.log.debug("subset seed=" + std::to_string(seed));

    std::vector<SubsetManifest> manifests;
    if (args.mode == "matched") {
        manifests.push_back(matched_random_subset(dataset, source, args.n, seed));
    } else if (args.mode == "percent-series") {
        require_exists(args.scores_csv, "scores");
        const std::vector<std::string> method_ids = split_list(args.methods);
        if (method_ids.empty()) throw ValidationError("percent-series requires --methods");
        const ScoreTable scores = score_table_from_csv(read_file(args.scores_csv));
        manifests = percent_removed_series(dataset, source, scores,
                                           options.config.build_registry(), method_ids,
                                           parse_percent_list(args.percents), args.n, seed,
                                           pool_mode_from_name(args.pool_mode));
    } else {
        throw ValidationError("--mode must be matched or percent-series");
    }

    for (const SubsetManifest& manifest : manifests) {
        atomic_write_file(fs::path(args.out_dir) / (manifest.name + ".manifest.json"),
                          manifest_to_json(manifest));
        std::string members = "image_id,accepted\n";
        for (const std::string& id : manifest.image_ids) members += id + ",1\n";
        atomic_write_file(fs::path(args.out_dir) / (manifest.name + ".members.csv"), members);
        options.log.info(manifest.name + ": " + std::to_string(manifest.image_ids.size()) +
                         " images");
    }
    return 0;
}

// ---- report -----------------------------------------------------------------

struct ReportArgs {
    std::string bench_dir;
    std::string cutoffs_json;
    std::string subset_dir;
    std::string json_out;
};

int cmd_report(const ReportArgs& args, const GlobalOptions&) {
    std::ostringstream text;
    json machine;
    bool missing_artifact = false;

    if (!args.bench_dir.empty()) {
        const fs::path path = fs::path(args.bench_dir) / "report.json";
        if (!fs::exists(path)) {
            text << "bench report: ABSENT (" << path.string() << ")\n";
            missing_artifact = true;
        } else {
            const CorrelationReport report = report_from_json(read_file(path));
            text << "Robustness correlations (mean |r| per augmentation x statistic):\n";
            std::istringstream csv(report_to_csv(report));
            std::string line;
            while (std::getline(csv, line)) text << "  " << line << "\n";
            machine["bench"] = json::parse(report_to_json(report));
        }
    }

    if (!args.cutoffs_json.empty()) {
        if (!fs::exists(args.cutoffs_json)) {
            text << "cutoffs: ABSENT (" << args.cutoffs_json << ")\n";
            missing_artifact = true;
        } else {
            const auto cutoffs = cutoffs_from_json(read_file(args.cutoffs_json));
            text << "Cut-off points:\n";
            json cut_list = json::array();
            for (const CutoffSpec& spec : cutoffs) {
                text << "  " << spec.method_id << ": " << format_double(spec.threshold) << " ("
                     << score_space_name(spec.score_space) << ", "
                     << cutoff_direction_name(spec.direction) << ", "
                     << spec.diagnostics.crossings.size() << " crossings"
                     << (spec.diagnostics.fallback_used ? ", quantile fallback" : "") << ")\n";
                cut_list.push_back({{"method_id", spec.method_id},
                                    {"threshold", spec.threshold},
                                    {"direction", cutoff_direction_name(spec.direction)},
                                    {"score_space", score_space_name(spec.score_space)},
                                    {"crossings", spec.diagnostics.crossings.size()},
                                    {"fallback_used", spec.diagnostics.fallback_used}});
            }
            machine["cutoffs"] = std::move(cut_list);
        }
    }

    if (!args.subset_dir.empty()) {
        const fs::path manifest_path = fs::path(args.subset_dir) / "manifest.json";
        const fs::path votes_path = fs::path(args.subset_dir) / "votes.csv";
        if (!fs::exists(manifest_path) || !fs::exists(votes_path)) {
            text << "subset: ABSENT (" << args.subset_dir << ")\n";
            missing_artifact = true;
        } else {
            const SubsetManifest manifest = manifest_from_json(read_file(manifest_path));
            std::istringstream in(read_file(votes_path));
            std::string line;
            std::getline(in, line);
            std::vector<std::string> header;
            {
                std::istringstream hs(line);
                std::string field;
                while (std::getline(hs, field, ',')) header.push_back(field);
            }
            size_t total = 0, accepted = 0, rejected = 0;
            std::map<std::string, size_t> veto_votes; // bad votes on rejected images
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::istringstream ls(line);
                std::vector<std::string> fields;
                std::string field;
                while (std::getline(ls, field, ',')) fields.push_back(field);
                ++total;
                const bool is_accepted = fields.size() > 1 && fields[1] == "1";
                if (is_accepted)
                    ++accepted;
                else
                    ++rejected;
                for (size_t c = 2; c < fields.size() && c < header.size(); ++c) {
                    if (fields[c] == "good") continue;
                    if (!is_accepted) ++veto_votes[header[c].substr(5)]; // strip vote_
                }
            }
            const double rate = total == 0 ? 0.0 : 100.0 * accepted / total;
            text << "Subset " << manifest.name << " from " << manifest.source_dataset << ":\n";
            text << "  accepted " << accepted << "/" << total << " (" << format_double(rate)
                 << "%)" << (accepted == 0 ? "  <-- empty subset" : "") << "\n";
            size_t veto_total = 0;
            for (const auto& [method, count] : veto_votes) {
                text << "  veto votes " << method << ": " << count << "\n";
                veto_total += count;
            }
            text << "  veto sanity: " << veto_total << " bad votes across " << rejected
                 << " rejected images\n";
            machine["subset"] = {{"name", manifest.name},
                                 {"total", total},
                                 {"accepted", accepted},
                                 {"rejected", rejected},
                                 {"acceptance_rate_percent", rate}};
            json veto_json;
            for (const auto& [method, count] : veto_votes) veto_json[method] = count;
            machine["subset"]["veto_votes"] = std::move(veto_json);
        }
    }

    std::cout << text.str();
    if (!args.json_out.empty()) atomic_write_file(args.json_out, machine.dump(2) + "\n");
    if (missing_artifact) throw ValidationError("one or more artifacts are absent");
    return 0;
}

void emit_error(const char* kind, const std::string& message) {
    json err;
    err["error"] = {{"kind", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"NRIQA-guided dataset curation: score, bench, select, cutoff, filter, subset, "
                 "report"};
    app.require_subcommand(1);

    GlobalOptions options;
    std::string config_path;
    bool quiet = false, verbose = false;
    uint64_t seed_value = 0;
    app.add_option("--config", config_path, "JSON config file; flags override its fields");
    app.add_flag("--quiet", quiet, "suppress progress output");
    app.add_flag("--verbose", verbose, "echo effective parameter values");
    app.add_option("--jobs", options.jobs, "worker threads (default: available parallelism)");
    auto* seed_opt = app.add_option("--seed", seed_value,
                                    "global seed (fallback: config, then QUALGATE_SEED)");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "score images with NRIQA methods");
    score_cmd->add_option("--images", score_args.images_dir, "directory of PNG/JPEG images");
    score_cmd->add_option("--dataset", score_args.dataset_csv, "dataset manifest CSV");
    score_cmd->add_option("--methods", score_args.methods, "comma list (default lapv,lapm,wavs)");
    score_cmd->add_option("--out", score_args.out, "output scores CSV")->required();
    score_cmd->add_option("--brisque-model", score_args.brisque_model, "SVR model JSON");
    score_cmd->add_option("--niqe-model", score_args.niqe_model, "pristine model JSON");
    score_cmd->add_option("--niqe-corpus", score_args.niqe_corpus,
                          "directory of sharp images to fit the pristine model");
    score_cmd->add_option("--niqe-model-out", score_args.niqe_model_out,
                          "persist the fitted pristine model");
    score_cmd->add_option("--external", score_args.external_files,
                          "external scores CSV (repeatable)");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "run the augmentation robustness bench");
    bench_cmd->add_option("--samples", bench_args.samples_dir, "directory of base images")
        ->required();
    bench_cmd->add_option("--methods", bench_args.methods, "comma list of computable methods");
    bench_cmd->add_option("--out", bench_args.out_dir, "output directory")->required();
    bench_cmd->add_option("--brisque-model", bench_args.brisque_model, "SVR model JSON");
    bench_cmd->add_option("--niqe-model", bench_args.niqe_model, "pristine model JSON");
    bench_cmd->add_option("--dump-series", bench_args.dump_series_dir,
                          "also write augmentation series PNGs here");

    SelectArgs select_args;
    auto* select_cmd = app.add_subcommand("select", "apply selection criteria to a bench report");
    select_cmd->add_option("--report", select_args.report_json, "bench report.json")->required();
    select_cmd->add_option("--out", select_args.out, "selection JSON")->required();
    select_cmd->add_option("--max-crop", select_args.max_crop, "crop correlation bound");
    select_cmd->add_option("--max-rot", select_args.max_rot, "rotation correlation bound");
    select_cmd->add_option("--min-blur", select_args.min_blur, "blur correlation floor");
    select_cmd->add_option("--count", select_args.target_count, "methods to select (odd)");
    select_cmd->add_option("--statistic", select_args.statistic, "pcc | srcc | mean_of_both");

    CutoffArgs cutoff_args;
    auto* cutoff_cmd = app.add_subcommand("cutoff", "derive per-method cut-off points");
    cutoff_cmd->add_option("--scores", cutoff_args.scores_csv, "scores CSV")->required();
    cutoff_cmd->add_option("--predictions", cutoff_args.predictions_csv, "prediction log CSV")
        ->required();
    cutoff_cmd->add_option("--methods", cutoff_args.methods, "comma list")->required();
    cutoff_cmd->add_option("--out", cutoff_args.out, "cutoffs JSON")->required();
    cutoff_cmd->add_option("--density-out", cutoff_args.density_out_dir,
                           "export per-class density curves here");
    cutoff_cmd->add_flag("--fallback", cutoff_args.fallback,
                         "enable the quantile fallback when no crossing exists");

    FilterArgs filter_args;
    auto* filter_cmd = app.add_subcommand("filter", "majority-vote the high-quality subset");
    filter_cmd->add_option("--dataset", filter_args.dataset_csv, "dataset manifest CSV")
        ->required();
    filter_cmd->add_option("--scores", filter_args.scores_csv, "scores CSV")->required();
    filter_cmd->add_option("--cutoffs", filter_args.cutoffs_json, "cutoffs JSON")->required();
    filter_cmd->add_option("--out", filter_args.out_dir, "output directory")->required();

    SubsetArgs subset_args;
    auto* subset_cmd = app.add_subcommand("subset", "matched-random or percent-removed subsets");
    subset_cmd->add_option("--mode", subset_args.mode, "matched | percent-series")->required();
    subset_cmd->add_option("--dataset", subset_args.dataset_csv, "dataset manifest CSV")
        ->required();
    subset_cmd->add_option("--scores", subset_args.scores_csv, "scores CSV (percent-series)");
    subset_cmd->add_option("--methods", subset_args.methods, "aggregate methods (percent-series)");
    subset_cmd->add_option("--percents", subset_args.percents, "comma list of percents");
    subset_cmd->add_option("--pool-mode", subset_args.pool_mode, "redraw_per_percent | shared");
    subset_cmd->add_option("--n", subset_args.n, "target subset size")->required();
    subset_cmd->add_option("--out", subset_args.out_dir, "output directory")->required();

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "summarize pipeline artifacts");
    report_cmd->add_option("--bench", report_args.bench_dir, "bench output directory");
    report_cmd->add_option("--cutoffs", report_args.cutoffs_json, "cutoffs JSON");
    report_cmd->add_option("--subset", report_args.subset_dir, "filter output directory");
    report_cmd->add_option("--json", report_args.json_out, "machine-readable summary JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        emit_error("InvalidParam", e.what());
        return 1;
    }

    options.log.level = quiet ? LogLevel::quiet : verbose ? LogLevel::verbose : LogLevel::normal;
    if (seed_opt->count() > 0) options.seed_flag = seed_value;

    try {
        if (!config_path.empty()) {
            require_exists(config_path, "config");
            try {
                options.config = config_from_json(read_file(config_path));
            } catch (const Error& e) {
                throw ValidationError(e.what());
            }
        }
        if (options.log.level >= LogLevel::verbose) {
            options.log.debug("selection thresholds crop<=" +
                              format_double(options.config.selection.max_crop_corr) + " rot<=" +
                              format_double(options.config.selection.max_rot_corr) + " blur>=" +
                              format_double(options.config.selection.min_blur_corr) +
                              " statistic=" +
                              selection_statistic_name(options.config.selection.statistic));
            options.log.debug("kde bandwidth rule: 0.9*min(sd, IQR/1.34)*n^(-1/5)");
        }

        if (*score_cmd) return cmd_score(score_args, options);
        if (*bench_cmd) return cmd_bench(bench_args, options);
        if (*select_cmd) return cmd_select(select_args, options);
        if (*cutoff_cmd) return cmd_cutoff(cutoff_args, options);
        if (*filter_cmd) return cmd_filter(filter_args, options);
        if (*subset_cmd) return cmd_subset(subset_args, options);
        if (*report_cmd) return cmd_report(report_args, options);
        emit_error("InvalidParam", "no subcommand");
        return 1;
    } catch (const ValidationError& e) {
        emit_error("InvalidParam", e.what());
        return 1;
    } catch (const Error& e) {
        emit_error(e.kind_name(), e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error("ParseError", e.what());
        return 2;
    }
}
