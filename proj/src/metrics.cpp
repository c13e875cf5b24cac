#include "qualgate/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "qualgate/error.hpp"

namespace qualgate {

const char* polarity_name(Polarity p) {
    return p == Polarity::higher_better ? "higher_better" : "lower_better";
}

Polarity polarity_from_name(const std::string& name) {
    if (name == "higher_better") return Polarity::higher_better;
    if (name == "lower_better") return Polarity::lower_better;
    throw invalid_param("unknown polarity: " + name);
}

MethodRegistry MethodRegistry::with_builtins() {
    MethodRegistry registry;
    registry.add({"lapv", Polarity::higher_better, Normalization::minmax});
    registry.add({"lapm", Polarity::higher_better, Normalization::minmax});
    registry.add({"wavs", Polarity::higher_better, Normalization::minmax});
    registry.add({"brisque", Polarity::lower_better, Normalization::minmax});
    registry.add({"niqe", Polarity::lower_better, Normalization::minmax});
    return registry;
}

void MethodRegistry::add(const MethodDescriptor& descriptor) {
    if (descriptor.id.empty()) throw invalid_param("method id must be nonempty");
    if (methods_.count(descriptor.id))
        throw invalid_param("duplicate method id: " + descriptor.id);
    methods_[descriptor.id] = descriptor;
}

bool MethodRegistry::contains(const std::string& id) const { return methods_.count(id) > 0; }

const MethodDescriptor& MethodRegistry::get(const std::string& id) const {
    auto it = methods_.find(id);
    if (it == methods_.end())
        throw Error(ErrorKind::unknown_method, "unknown method: " + id);
    return it->second;
}

std::vector<std::string> MethodRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : methods_) out.push_back(id);
    return out;
}

void ScoreTable::add(ScoreRow row) {
    if (!std::isfinite(row.raw))
        throw Error(ErrorKind::parse_error, "non-finite score for " + row.image_id);
    auto key = std::make_pair(row.image_id, row.method_id);
    if (!seen_.insert(key).second)
        throw Error(ErrorKind::duplicate_score,
                    "duplicate score for (" + row.image_id + ", " + row.method_id + ")");
    rows_.push_back(std::move(row));
    sorted_ = false;
}

const std::vector<ScoreRow>& ScoreTable::rows() const {
    if (!sorted_) {
        std::sort(rows_.begin(), rows_.end(), [](const ScoreRow& a, const ScoreRow& b) {
            return std::tie(a.image_id, a.method_id) < std::tie(b.image_id, b.method_id);
        });
        sorted_ = true;
    }
    return rows_;
}

bool ScoreTable::has(const std::string& image_id, const std::string& method_id) const {
    return seen_.count({image_id, method_id}) > 0;
}

std::vector<std::string> ScoreTable::method_ids() const {
    std::set<std::string> ids;
    for (const auto& row : rows_) ids.insert(row.method_id);
    return {ids.begin(), ids.end()};
}

std::map<std::string, double> ScoreTable::column(const std::string& method_id) const {
    std::map<std::string, double> out;
    for (const auto& row : rows_)
        if (row.method_id == method_id) out[row.image_id] = row.raw;
    return out;
}

void ScoreTable::normalize_minmax(const MethodRegistry& registry) {
    for (const std::string& method : method_ids()) {
        if (registry.contains(method) &&
            registry.get(method).normalization != Normalization::minmax)
            continue;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& row : rows_)
            if (row.method_id == method) {
                lo = std::min(lo, row.raw);
                hi = std::max(hi, row.raw);
            }
        if (!(hi > lo)) continue; // constant column stays raw-only
        for (auto& row : rows_)
            if (row.method_id == method) row.normalized = (row.raw - lo) / (hi - lo);
    }
}

// ---- focus measures -------------------------------------------------------

namespace {

const Kernel& laplacian_kernel() {
    static const Kernel k(3, 3, {0, 1, 0, 1, -4, 1, 0, 1, 0});
    return k;
}

void require_min_size(const GrayImage& img, int side, const char* op) {
    if (img.width < side || img.height < side)
        throw invalid_size(std::string(op) + ": image smaller than " + std::to_string(side) +
                           "x" + std::to_string(side));
}

} // namespace

double lapv(const GrayImage& img) {
    require_min_size(img, 3, "lapv");
    return convolve2d(img, laplacian_kernel()).variance();
}

double lapm(const GrayImage& img) {
    require_min_size(img, 3, "lapm");
    double acc = 0.0;
    size_t count = 0;
    for (int y = 1; y < img.height - 1; ++y)
        for (int x = 1; x < img.width - 1; ++x) {
            const double f = img.at(y, x);
            acc += std::fabs(2.0 * f - img.at(y, x - 1) - img.at(y, x + 1)) +
                   std::fabs(2.0 * f - img.at(y - 1, x) - img.at(y + 1, x));
            ++count;
        }
    return acc / static_cast<double>(count);
}

double wavs(const GrayImage& img, WaveletKind wavelet) {
    const DwtBands bands = dwt2(img, wavelet);
    double acc = 0.0;
    size_t count = 0;
    for (const GrayImage* band : {&bands.lh, &bands.hl, &bands.hh}) {
        for (double v : band->data) acc += std::fabs(v);
        count += band->data.size();
    }
    return acc / static_cast<double>(count);
}

// ---- external scores ------------------------------------------------------

void ingest_external_scores(const std::string& csv_text, const MethodRegistry& registry,
                            ScoreTable& table) {
    std::istringstream in(csv_text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string image_id, method, raw_text;
        if (!std::getline(fields, image_id, ',') || !std::getline(fields, method, ',') ||
            !std::getline(fields, raw_text))
            throw Error(ErrorKind::parse_error,
                        "external scores line " + std::to_string(line_no) + ": expected 3 fields");
        if (line_no == 1 && raw_text == "raw_score") continue; // header
        double raw = 0.0;
        try {
            size_t used = 0;
            raw = std::stod(raw_text, &used);
            if (used != raw_text.size()) throw std::invalid_argument(raw_text);
        } catch (const std::exception&) {
            throw Error(ErrorKind::parse_error, "external scores line " + std::to_string(line_no) +
                                                    ": bad score '" + raw_text + "'");
        }
        if (!std::isfinite(raw))
            throw Error(ErrorKind::parse_error,
                        "external scores line " + std::to_string(line_no) + ": non-finite score");
        if (!registry.contains(method))
            throw Error(ErrorKind::unknown_method,
                        "external scores line " + std::to_string(line_no) +
                            ": method '" + method + "' has no descriptor");
        table.add({image_id, method, raw, std::nullopt});
    }
}

} // namespace qualgate
