#include "qualgate/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <sstream>

#include <json.hpp>

#include "qualgate/error.hpp"

namespace qualgate {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void atomic_write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_param("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw invalid_param("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_param("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---- images ----------------------------------------------------------------

GrayImage load_image_gray(const fs::path& path) {
    cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (mat.empty()) throw invalid_image("cannot decode image: " + path.string());

    const int depth = mat.depth();
    if (depth != CV_8U && depth != CV_16U)
        throw invalid_image("unsupported bit depth: " + path.string());
    const double scale = depth == CV_16U ? 255.0 / 65535.0 : 1.0;

    GrayImage out(mat.cols, mat.rows);
    for (int y = 0; y < mat.rows; ++y)
        for (int x = 0; x < mat.cols; ++x) {
            double v = 0.0;
            switch (mat.channels()) {
            case 1:
                v = depth == CV_8U ? mat.at<uint8_t>(y, x) : mat.at<uint16_t>(y, x) * scale;
                break;
            case 3:
            case 4: {
                // OpenCV stores BGR(A)
                double b, g, r;
                if (depth == CV_8U) {
                    const uint8_t* px = mat.ptr<uint8_t>(y) + x * mat.channels();
                    b = px[0];
                    g = px[1];
                    r = px[2];
                } else {
                    const uint16_t* px = mat.ptr<uint16_t>(y) + x * mat.channels();
                    b = px[0] * scale;
                    g = px[1] * scale;
                    r = px[2] * scale;
                }
                v = 0.299 * r + 0.587 * g + 0.114 * b;
                break;
            }
            default:
                throw invalid_image("unsupported channel count: " + path.string());
            }
            out.at(y, x) = v;
        }
    return out;
}

void save_image_png(const GrayImage& img, const fs::path& path) {
    if (img.empty()) throw invalid_image("save_image_png: empty image");
    cv::Mat mat(img.height, img.width, CV_8UC1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const double v = std::clamp(img.at(y, x), 0.0, 255.0);
            mat.at<uint8_t>(y, x) = static_cast<uint8_t>(std::lround(v));
        }
    std::vector<uint8_t> encoded;
    if (!cv::imencode(".png", mat, encoded))
        throw invalid_param("cannot encode image: " + path.string());
    atomic_write_file(path, std::string(encoded.begin(), encoded.end()));
}

void write_series(const AugmentationSeries& series, const fs::path& dir) {
    fs::create_directories(dir);
    const std::string kind = augmentation_kind_name(series.kind);
    for (size_t k = 0; k < series.steps.size(); ++k) {
        char name[512];
        std::snprintf(name, sizeof(name), "%s_%s_%02zu.png", series.base_id.c_str(),
                      kind.c_str(), k);
        save_image_png(series.steps[k], dir / name);
    }
    json sidecar;
    sidecar["base_id"] = series.base_id;
    sidecar["kind"] = kind;
    sidecar["step_params"] = series.step_params;
    atomic_write_file(dir / (series.base_id + "_" + kind + "_params.json"),
                      sidecar.dump(2) + "\n");
}

// ---- CSV helpers ------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double_field(const std::string& text, const char* what, size_t line_no) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::parse_error, std::string(what) + " line " +
                                                std::to_string(line_no) + ": bad number '" +
                                                text + "'");
    }
}

std::vector<std::string> read_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

} // namespace

std::string score_table_to_csv(const ScoreTable& table) {
    std::string out = "image_id,method,raw,normalized\n";
    for (const ScoreRow& row : table.rows()) {
        out += row.image_id + "," + row.method_id + "," + format_double(row.raw) + ",";
        if (row.normalized) out += format_double(*row.normalized);
        out += "\n";
    }
    return out;
}

ScoreTable score_table_from_csv(const std::string& text) {
    ScoreTable table;
    const auto lines = read_lines(text);
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i == 0 && lines[i] == "image_id,method,raw,normalized") continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 4)
            throw Error(ErrorKind::parse_error,
                        "scores line " + std::to_string(i + 1) + ": expected 4 fields");
        ScoreRow row;
        row.image_id = fields[0];
        row.method_id = fields[1];
        row.raw = parse_double_field(fields[2], "scores", i + 1);
        if (!fields[3].empty())
            row.normalized = parse_double_field(fields[3], "scores", i + 1);
        table.add(std::move(row));
    }
    return table;
}

PredictionLog prediction_log_from_csv(const std::string& text) {
    PredictionLog log;
    const auto lines = read_lines(text);
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i == 0 && lines[i] == "image_id,confidence,predicted_label,true_label") continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 4)
            throw Error(ErrorKind::parse_error,
                        "predictions line " + std::to_string(i + 1) + ": expected 4 fields");
        PredictionRow row;
        row.image_id = fields[0];
        row.confidence = parse_double_field(fields[1], "predictions", i + 1);
        row.predicted_label = fields[2];
        row.true_label = fields[3];
        log.add(std::move(row));
    }
    return log;
}

std::vector<DatasetEntry> dataset_from_csv(const std::string& text) {
    std::vector<DatasetEntry> entries;
    std::set<std::string> seen;
    const auto lines = read_lines(text);
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i == 0 && lines[i] == "image_id,path,label,split") continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 4)
            throw Error(ErrorKind::parse_error,
                        "dataset line " + std::to_string(i + 1) + ": expected 4 fields");
        if (!seen.insert(fields[0]).second)
            throw Error(ErrorKind::parse_error, "dataset: duplicate image id " + fields[0]);
        entries.push_back({fields[0], fields[1], fields[2], fields[3]});
    }
    return entries;
}

std::string dataset_to_csv(const std::vector<DatasetEntry>& entries) {
    std::string out = "image_id,path,label,split\n";
    for (const DatasetEntry& e : entries)
        out += e.image_id + "," + e.path + "," + e.label + "," + e.split + "\n";
    return out;
}

std::string report_to_csv(const CorrelationReport& report) {
    std::string out = "augmentation,statistic";
    for (const std::string& method : report.method_ids) out += "," + method;
    out += "\n";
    static constexpr AugmentationKind kKinds[3] = {AugmentationKind::crop,
                                                   AugmentationKind::rotate,
                                                   AugmentationKind::blur};
    for (AugmentationKind kind : kKinds)
        for (const char* stat : {"pcc", "srcc"}) {
            out += std::string(augmentation_kind_name(kind)) + "," + stat;
            for (const std::string& method : report.method_ids) {
                const ReportCell* cell = report.find(method, kind);
                out += ",";
                if (cell && !cell->failure && cell->sample_count() > 0)
                    out += format_double(std::string(stat) == "pcc" ? cell->mean_abs_pcc()
                                                                    : cell->mean_abs_srcc());
            }
            out += "\n";
        }
    return out;
}

// ---- JSON -------------------------------------------------------------------

namespace {

json density_to_json_obj(const DensityCurve& curve) {
    json obj;
    obj["grid"] = curve.grid;
    obj["density"] = curve.density;
    obj["bandwidth"] = curve.bandwidth;
    return obj;
}

DensityCurve density_from_json_obj(const json& obj) {
    DensityCurve curve;
    curve.grid = obj.at("grid").get<std::vector<double>>();
    curve.density = obj.at("density").get<std::vector<double>>();
    curve.bandwidth = obj.at("bandwidth").get<double>();
    return curve;
}

json wrap_parse(const std::string& text, const char* what) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded())
        throw Error(ErrorKind::parse_error, std::string(what) + ": invalid JSON");
    return parsed;
}

} // namespace

std::string density_curve_to_json(const DensityCurve& curve) {
    return density_to_json_obj(curve).dump(2) + "\n";
}

std::string report_to_json(const CorrelationReport& report) {
    json cells = json::array();
    static constexpr AugmentationKind kKinds[3] = {AugmentationKind::crop,
                                                   AugmentationKind::rotate,
                                                   AugmentationKind::blur};
    for (const std::string& method : report.method_ids)
        for (AugmentationKind kind : kKinds) {
            const ReportCell* cell = report.find(method, kind);
            if (!cell) continue;
            json entry;
            entry["method"] = method;
            entry["kind"] = augmentation_kind_name(kind);
            entry["abs_pcc"] = cell->abs_pcc;
            entry["abs_srcc"] = cell->abs_srcc;
            if (cell->failure)
                entry["failure"] = *cell->failure;
            else {
                entry["mean_abs_pcc"] = cell->mean_abs_pcc();
                entry["mean_abs_srcc"] = cell->mean_abs_srcc();
            }
            cells.push_back(std::move(entry));
        }
    json root;
    root["methods"] = report.method_ids;
    root["cells"] = std::move(cells);
    return root.dump(2) + "\n";
}

CorrelationReport report_from_json(const std::string& text) {
    const json root = wrap_parse(text, "report");
    CorrelationReport report;
    report.method_ids = root.at("methods").get<std::vector<std::string>>();
    for (const json& entry : root.at("cells")) {
        ReportCell cell;
        cell.abs_pcc = entry.at("abs_pcc").get<std::vector<double>>();
        cell.abs_srcc = entry.at("abs_srcc").get<std::vector<double>>();
        if (entry.contains("failure")) cell.failure = entry.at("failure").get<std::string>();
        report.entries[{entry.at("method").get<std::string>(),
                        augmentation_kind_from_name(entry.at("kind").get<std::string>())}] =
            std::move(cell);
    }
    return report;
}

std::string selection_to_json(const SelectionResult& result, const SelectionCriteria& criteria) {
    json root;
    root["criteria"] = {{"max_crop_corr", criteria.max_crop_corr},
                        {"max_rot_corr", criteria.max_rot_corr},
                        {"min_blur_corr", criteria.min_blur_corr},
                        {"target_count", criteria.target_count},
                        {"statistic", selection_statistic_name(criteria.statistic)}};
    json ranked = json::array();
    for (const MethodSelection& sel : result.ranked) {
        json entry;
        entry["method_id"] = sel.method_id;
        if (sel.failure) {
            entry["failure"] = *sel.failure;
        } else {
            entry["crop_corr"] = sel.crop_corr;
            entry["rot_corr"] = sel.rot_corr;
            entry["blur_corr"] = sel.blur_corr;
            entry["composite"] = sel.composite;
            entry["crop_ok"] = sel.crop_ok;
            entry["rot_ok"] = sel.rot_ok;
            entry["blur_ok"] = sel.blur_ok;
            entry["passed"] = sel.passed;
        }
        ranked.push_back(std::move(entry));
    }
    root["ranked"] = std::move(ranked);
    root["selected"] = result.selected;
    root["underfilled"] = result.underfilled;
    return root.dump(2) + "\n";
}

std::string cutoffs_to_json(const std::vector<CutoffSpec>& cutoffs) {
    json list = json::array();
    for (const CutoffSpec& spec : cutoffs) {
        json entry;
        entry["method_id"] = spec.method_id;
        entry["threshold"] = spec.threshold;
        entry["direction"] = cutoff_direction_name(spec.direction);
        entry["score_space"] = score_space_name(spec.score_space);
        if (spec.score_space == ScoreSpace::minmax) {
            entry["norm_min"] = spec.norm_min;
            entry["norm_max"] = spec.norm_max;
        }
        json diag;
        diag["correct_density"] = density_to_json_obj(spec.diagnostics.correct_density);
        diag["incorrect_density"] = density_to_json_obj(spec.diagnostics.incorrect_density);
        diag["crossings"] = spec.diagnostics.crossings;
        diag["correct_median"] = spec.diagnostics.correct_median;
        diag["incorrect_median"] = spec.diagnostics.incorrect_median;
        diag["fallback_used"] = spec.diagnostics.fallback_used;
        entry["diagnostics"] = std::move(diag);
        list.push_back(std::move(entry));
    }
    json root;
    root["cutoffs"] = std::move(list);
    return root.dump(2) + "\n";
}

std::vector<CutoffSpec> cutoffs_from_json(const std::string& text) {
    const json root = wrap_parse(text, "cutoffs");
    std::vector<CutoffSpec> out;
    for (const json& entry : root.at("cutoffs")) {
        CutoffSpec spec;
        spec.method_id = entry.at("method_id").get<std::string>();
        spec.threshold = entry.at("threshold").get<double>();
        spec.direction = cutoff_direction_from_name(entry.at("direction").get<std::string>());
        spec.score_space = score_space_from_name(entry.at("score_space").get<std::string>());
        if (spec.score_space == ScoreSpace::minmax) {
            spec.norm_min = entry.at("norm_min").get<double>();
            spec.norm_max = entry.at("norm_max").get<double>();
        }
        if (entry.contains("diagnostics")) {
            const json& diag = entry.at("diagnostics");
            spec.diagnostics.correct_density = density_from_json_obj(diag.at("correct_density"));
            spec.diagnostics.incorrect_density =
                density_from_json_obj(diag.at("incorrect_density"));
            spec.diagnostics.crossings = diag.at("crossings").get<std::vector<double>>();
            spec.diagnostics.correct_median = diag.at("correct_median").get<double>();
            spec.diagnostics.incorrect_median = diag.at("incorrect_median").get<double>();
            spec.diagnostics.fallback_used = diag.at("fallback_used").get<bool>();
        }
        out.push_back(std::move(spec));
    }
    return out;
}

std::string manifest_to_json(const SubsetManifest& manifest) {
    json root;
    root["name"] = manifest.name;
    root["source_dataset"] = manifest.source_dataset;
    json recipe;
    recipe["kind"] = subset_kind_name(manifest.recipe.kind);
    recipe["seed"] = manifest.recipe.seed;
    recipe["target_n"] = manifest.recipe.target_n;
    recipe["percent"] = manifest.recipe.percent;
    recipe["pool_size"] = manifest.recipe.pool_size;
    recipe["pool_mode"] = pool_mode_name(manifest.recipe.pool_mode);
    recipe["method_ids"] = manifest.recipe.method_ids;
    root["recipe"] = std::move(recipe);
    root["image_ids"] = manifest.image_ids;
    return root.dump(2) + "\n";
}

SubsetManifest manifest_from_json(const std::string& text) {
    const json root = wrap_parse(text, "manifest");
    SubsetManifest manifest;
    manifest.name = root.at("name").get<std::string>();
    manifest.source_dataset = root.at("source_dataset").get<std::string>();
    const json& recipe = root.at("recipe");
    manifest.recipe.kind = subset_kind_from_name(recipe.at("kind").get<std::string>());
    manifest.recipe.seed = recipe.at("seed").get<uint64_t>();
    manifest.recipe.target_n = recipe.at("target_n").get<size_t>();
    manifest.recipe.percent = recipe.at("percent").get<double>();
    manifest.recipe.pool_size = recipe.at("pool_size").get<size_t>();
    manifest.recipe.pool_mode = pool_mode_from_name(recipe.at("pool_mode").get<std::string>());
    manifest.recipe.method_ids = recipe.at("method_ids").get<std::vector<std::string>>();
    manifest.image_ids = root.at("image_ids").get<std::vector<std::string>>();
    return manifest;
}

std::string votes_to_csv(const std::vector<DatasetEntry>& dataset,
                         const std::vector<VoteDecision>& accepted,
                         const std::vector<VoteDecision>& rejected,
                         const std::vector<std::string>& method_ids) {
    std::map<std::string, const VoteDecision*> by_id;
    for (const VoteDecision& d : accepted) by_id[d.image_id] = &d;
    for (const VoteDecision& d : rejected) by_id[d.image_id] = &d;

    std::string out = "image_id,accepted";
    for (const std::string& method : method_ids) out += ",vote_" + method;
    out += "\n";
    for (const DatasetEntry& entry : dataset) {
        auto it = by_id.find(entry.image_id);
        if (it == by_id.end()) continue;
        const VoteDecision& d = *it->second;
        out += entry.image_id;
        out += d.accepted ? ",1" : ",0";
        for (const std::string& method : method_ids) {
            auto vote_it = d.per_method.find(method);
            out += ",";
            out += vote_it == d.per_method.end() ? "missing" : vote_value_name(vote_it->second);
        }
        out += "\n";
    }
    return out;
}

SvrModel svr_model_from_json(const std::string& text) {
    const json root = wrap_parse(text, "svr model");
    SvrModel model;
    model.gamma = root.at("gamma").get<double>();
    model.rho = root.at("rho").get<double>();
    const auto fmin = root.at("feature_min").get<std::vector<double>>();
    const auto fmax = root.at("feature_max").get<std::vector<double>>();
    if (fmin.size() != 36 || fmax.size() != 36)
        throw Error(ErrorKind::parse_error, "svr model: feature bounds must have 36 entries");
    std::copy(fmin.begin(), fmin.end(), model.feature_min.begin());
    std::copy(fmax.begin(), fmax.end(), model.feature_max.begin());
    for (const json& sv : root.at("sv")) {
        const auto row = sv.get<std::vector<double>>();
        if (row.size() != 36)
            throw Error(ErrorKind::parse_error, "svr model: support vector must have 36 entries");
        std::array<double, 36> arr{};
        std::copy(row.begin(), row.end(), arr.begin());
        model.support_vectors.push_back(arr);
    }
    model.sv_coef = root.at("sv_coef").get<std::vector<double>>();
    if (model.sv_coef.size() != model.support_vectors.size())
        throw Error(ErrorKind::parse_error, "svr model: sv/coef count mismatch");
    if (root.contains("reference")) {
        SvrModel::Reference ref;
        const auto feats = root.at("reference").at("features").get<std::vector<double>>();
        if (feats.size() != 36)
            throw Error(ErrorKind::parse_error, "svr model: reference features must have 36");
        std::copy(feats.begin(), feats.end(), ref.features.begin());
        ref.score = root.at("reference").at("score").get<double>();
        model.reference = ref;
    }
    return model;
}

std::string svr_model_to_json(const SvrModel& model) {
    json root;
    root["gamma"] = model.gamma;
    root["rho"] = model.rho;
    root["feature_min"] = model.feature_min;
    root["feature_max"] = model.feature_max;
    json svs = json::array();
    for (const auto& sv : model.support_vectors) svs.push_back(sv);
    root["sv"] = std::move(svs);
    root["sv_coef"] = model.sv_coef;
    if (model.reference) {
        root["reference"] = {{"features", model.reference->features},
                             {"score", model.reference->score}};
    }
    return root.dump(2) + "\n";
}

PristineModel pristine_model_from_json(const std::string& text) {
    const json root = wrap_parse(text, "pristine model");
    PristineModel model;
    model.patch_size = root.at("patch_size").get<int>();
    model.sharpness_keep_fraction = root.at("sharpness_keep_fraction").get<double>();
    model.mvg.dim = root.at("mvg").at("dim").get<int>();
    model.mvg.mean = root.at("mvg").at("mean").get<std::vector<double>>();
    model.mvg.cov = root.at("mvg").at("cov").get<std::vector<double>>();
    if (model.mvg.mean.size() != static_cast<size_t>(model.mvg.dim) ||
        model.mvg.cov.size() != static_cast<size_t>(model.mvg.dim) * model.mvg.dim)
        throw Error(ErrorKind::parse_error, "pristine model: inconsistent dimensions");
    return model;
}

std::string pristine_model_to_json(const PristineModel& model) {
    json root;
    root["patch_size"] = model.patch_size;
    root["sharpness_keep_fraction"] = model.sharpness_keep_fraction;
    root["mvg"] = {{"dim", model.mvg.dim}, {"mean", model.mvg.mean}, {"cov", model.mvg.cov}};
    return root.dump(2) + "\n";
}

} // namespace qualgate
