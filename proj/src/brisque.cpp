#include <algorithm>
#include <cmath>
#include <vector>

#include "nss_internal.hpp"
#include "qualgate/error.hpp"
#include "qualgate/metrics.hpp"

namespace qualgate {

namespace nss {

namespace {

constexpr int kWindowRadius = 3; // 7x7
constexpr double kWindowSigma = 7.0 / 6.0;

const std::vector<double>& window_taps() {
    static const std::vector<double> taps = [] {
        std::vector<double> t(2 * kWindowRadius + 1);
        double sum = 0.0;
        for (int k = -kWindowRadius; k <= kWindowRadius; ++k) {
            t[k + kWindowRadius] = std::exp(-0.5 * k * k / (kWindowSigma * kWindowSigma));
            sum += t[k + kWindowRadius];
        }
        for (double& w : t) w /= sum;
        return t;
    }();
    return taps;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

GrayImage separable_filter_replicate(const GrayImage& img) {
    const auto& taps = window_taps();
    GrayImage horiz(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int k = -kWindowRadius; k <= kWindowRadius; ++k)
                acc += taps[k + kWindowRadius] * img.at(y, clamp_index(x + k, img.width));
            horiz.at(y, x) = acc;
        }
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int k = -kWindowRadius; k <= kWindowRadius; ++k)
                acc += taps[k + kWindowRadius] * horiz.at(clamp_index(y + k, img.height), x);
            out.at(y, x) = acc;
        }
    return out;
}

} // namespace

void local_mean_sigma(const GrayImage& img, GrayImage& mu, GrayImage& sigma) {
    mu = separable_filter_replicate(img);
    GrayImage squared(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) squared.data[i] = img.data[i] * img.data[i];
    sigma = separable_filter_replicate(squared);
    for (size_t i = 0; i < sigma.data.size(); ++i)
        sigma.data[i] = std::sqrt(std::max(0.0, sigma.data[i] - mu.data[i] * mu.data[i]));
}

GrayImage mscn_field(const GrayImage& img) {
    GrayImage mu, sigma;
    local_mean_sigma(img, mu, sigma);
    GrayImage out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = (img.data[i] - mu.data[i]) / (sigma.data[i] + 1.0);
    return out;
}

GrayImage bicubic_half(const GrayImage& img) {
    // constant fractional offset 0.5 -> fixed 4-tap kernel
    static constexpr double kTaps[4] = {-0.0625, 0.5625, 0.5625, -0.0625};
    const int ow = img.width / 2, oh = img.height / 2;
    GrayImage horiz(ow, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += kTaps[k] * img.at(y, clamp_index(2 * x - 1 + k, img.width));
            horiz.at(y, x) = acc;
        }
    GrayImage out(ow, oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = 0; k < 4; ++k)
                acc += kTaps[k] * horiz.at(clamp_index(2 * y - 1 + k, img.height), x);
            out.at(y, x) = acc;
        }
    return out;
}

} // namespace nss

namespace {

struct Shift {
    int dy;
    int dx;
};

// H, V, D1, D2 neighbor products over the valid overlap.
std::vector<double> orientation_product(const GrayImage& mscn, Shift shift) {
    std::vector<double> out;
    const int y0 = std::max(0, -shift.dy), y1 = mscn.height - std::max(0, shift.dy);
    const int x0 = std::max(0, -shift.dx), x1 = mscn.width - std::max(0, shift.dx);
    out.reserve(static_cast<size_t>(y1 - y0) * (x1 - x0));
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            out.push_back(mscn.at(y, x) * mscn.at(y + shift.dy, x + shift.dx));
    return out;
}

void scale_features(const GrayImage& img, double* out) {
    const GrayImage mscn = nss::mscn_field(img);
    const GgdParams ggd = fit_ggd(mscn.data);
    out[0] = ggd.alpha;
    out[1] = ggd.sigma;
    static constexpr Shift kShifts[4] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
    for (int s = 0; s < 4; ++s) {
        const std::vector<double> prod = orientation_product(mscn, kShifts[s]);
        const AggdParams aggd = fit_aggd(prod);
        out[2 + 4 * s + 0] = aggd.alpha;
        out[2 + 4 * s + 1] = aggd.eta;
        out[2 + 4 * s + 2] = aggd.sigma_l;
        out[2 + 4 * s + 3] = aggd.sigma_r;
    }
}

} // namespace

std::array<double, 36> brisque_features(const GrayImage& img) {
    if (img.width < 32 || img.height < 32)
        throw invalid_size("brisque_features: image smaller than 32x32");
    std::array<double, 36> features{};
    scale_features(img, features.data());
    scale_features(nss::bicubic_half(img), features.data() + 18);
    return features;
}

double brisque_score(const std::array<double, 36>& features, const SvrModel& model) {
    std::array<double, 36> scaled{};
    for (int i = 0; i < 36; ++i) {
        const double span = model.feature_max[i] - model.feature_min[i];
        scaled[i] = span > 0.0 ? -1.0 + 2.0 * (features[i] - model.feature_min[i]) / span : 0.0;
    }
    if (model.support_vectors.size() != model.sv_coef.size())
        throw invalid_param("brisque_score: sv/coef count mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < model.support_vectors.size(); ++i) {
        double dist2 = 0.0;
        for (int j = 0; j < 36; ++j) {
            const double d = scaled[j] - model.support_vectors[i][j];
            dist2 += d * d;
        }
        acc += model.sv_coef[i] * std::exp(-model.gamma * dist2);
    }
    return acc - model.rho;
}

} // namespace qualgate
