#include "qualgate/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qualgate/error.hpp"

namespace qualgate {

double GrayImage::mean() const {
    if (data.empty()) return 0.0;
    return std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
}

double GrayImage::variance() const {
    if (data.empty()) return 0.0;
    const double m = mean();
    double acc = 0.0;
    for (double v : data) acc += (v - m) * (v - m);
    return acc / static_cast<double>(data.size());
}

const char* augmentation_kind_name(AugmentationKind kind) {
    switch (kind) {
    case AugmentationKind::crop: return "crop";
    case AugmentationKind::rotate: return "rotate";
    case AugmentationKind::blur: return "blur";
    }
    return "unknown";
}

AugmentationKind augmentation_kind_from_name(const std::string& name) {
    if (name == "crop") return AugmentationKind::crop;
    if (name == "rotate") return AugmentationKind::rotate;
    if (name == "blur") return AugmentationKind::blur;
    throw invalid_param("unknown augmentation kind: " + name);
}

GrayImage to_grayscale(const uint8_t* rgb, int width, int height) {
    if (width <= 0 || height <= 0 || rgb == nullptr)
        throw invalid_image("to_grayscale: zero-sized image");
    GrayImage out(width, height);
    const size_t n = out.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        const uint8_t* px = rgb + 3 * i;
        out.data[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    }
    return out;
}

GrayImage convolve2d(const GrayImage& img, const Kernel& kernel) {
    if (kernel.width % 2 == 0 || kernel.height % 2 == 0)
        throw invalid_param("convolve2d: kernel sides must be odd");
    if (kernel.width > img.width || kernel.height > img.height)
        throw invalid_size("convolve2d: kernel larger than image");
    const int ow = img.width - kernel.width + 1;
    const int oh = img.height - kernel.height + 1;
    GrayImage out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int ky = 0; ky < kernel.height; ++ky)
                for (int kx = 0; kx < kernel.width; ++kx)
                    acc += kernel.at(ky, kx) * img.at(y + ky, x + kx);
            out.at(y, x) = acc;
        }
    }
    return out;
}

namespace {

// Edge-inclusive reflection: ... x1 x0 | x0 x1 ... xn-1 | xn-1 xn-2 ...
// Folds repeatedly so radii larger than the image stay valid.
int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

std::vector<double> gaussian_taps(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * (k * k) / (sigma * sigma));
        taps[k + radius] = w;
        sum += w;
    }
    for (double& w : taps) w /= sum;
    return taps;
}

} // namespace

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    if (sigma < 0.0) throw invalid_param("gaussian_blur: negative sigma");
    if (img.empty()) throw invalid_image("gaussian_blur: empty image");
    if (sigma == 0.0) return img;

    const std::vector<double> taps = gaussian_taps(sigma);
    const int radius = (static_cast<int>(taps.size()) - 1) / 2;

    GrayImage horiz(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += taps[k + radius] * img.at(y, reflect_index(x + k, img.width));
            horiz.at(y, x) = acc;
        }
    }
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += taps[k + radius] * horiz.at(reflect_index(y + k, img.height), x);
            out.at(y, x) = acc;
        }
    }
    return out;
}

AugmentationSeries crop_series(const GrayImage& img, const std::string& base_id) {
    if (img.width < 20 || img.height < 20)
        throw invalid_size("crop_series: image smaller than 20x20");
    const int row_step = img.height / 20;
    const int col_step = img.width / 20;
    AugmentationSeries series;
    series.kind = AugmentationKind::crop;
    series.base_id = base_id;
    for (int k = 0; k < 10; ++k) {
        const int h = img.height - k * row_step;
        const int w = img.width - k * col_step;
        GrayImage step(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                step.at(y, x) = img.at(y, x);
        series.steps.push_back(std::move(step));
        series.step_params.push_back(k / 20.0);
    }
    return series;
}

AugmentationSeries rotation_series(const GrayImage& img, const std::string& base_id,
                                   int step_count, double step_degrees) {
    if (img.width != img.height)
        throw invalid_size("rotation_series: image must be square");
    if (img.empty()) throw invalid_image("rotation_series: empty image");
    if (step_count < 1 || step_degrees <= 0.0)
        throw invalid_param("rotation_series: bad step configuration");

    const double fill = img.mean();
    const double c = (img.width - 1) / 2.0;

    AugmentationSeries series;
    series.kind = AugmentationKind::rotate;
    series.base_id = base_id;
    for (int k = 0; k < step_count; ++k) {
        const double degrees = k * step_degrees;
        series.step_params.push_back(degrees);
        if (k == 0) {
            series.steps.push_back(img);
            continue;
        }
        const double theta = degrees * M_PI / 180.0;
        const double ct = std::cos(theta), st = std::sin(theta);
        GrayImage out(img.width, img.height, fill);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                // inverse map into the source frame
                const double dx = x - c, dy = y - c;
                const double sx = c + ct * dx + st * dy;
                const double sy = c - st * dx + ct * dy;
                if (sx < 0.0 || sy < 0.0 || sx > img.width - 1 || sy > img.height - 1)
                    continue;
                const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
                const int x1 = std::min(x0 + 1, img.width - 1);
                const int y1 = std::min(y0 + 1, img.height - 1);
                const double fx = sx - x0, fy = sy - y0;
                out.at(y, x) = (1 - fy) * ((1 - fx) * img.at(y0, x0) + fx * img.at(y0, x1)) +
                               fy * ((1 - fx) * img.at(y1, x0) + fx * img.at(y1, x1));
            }
        }
        series.steps.push_back(std::move(out));
    }
    return series;
}

AugmentationSeries blur_series(const GrayImage& img, const std::vector<double>& sigmas,
                               const std::string& base_id) {
    if (sigmas.empty()) throw invalid_param("blur_series: empty sigma list");
    if (sigmas.front() != 0.0)
        throw invalid_param("blur_series: sigmas must start at 0");
    for (size_t i = 1; i < sigmas.size(); ++i)
        if (sigmas[i] <= sigmas[i - 1])
            throw invalid_param("blur_series: sigmas must be strictly increasing");

    AugmentationSeries series;
    series.kind = AugmentationKind::blur;
    series.base_id = base_id;
    series.step_params = sigmas;
    for (double sigma : sigmas)
        series.steps.push_back(gaussian_blur(img, sigma));
    return series;
}

std::vector<double> default_blur_sigmas() {
    std::vector<double> sigmas(10);
    for (int i = 0; i < 10; ++i) sigmas[i] = 0.5 * i;
    return sigmas;
}

} // namespace qualgate
