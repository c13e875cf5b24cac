#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qualgate {

/// Single-channel luminance field, row-major, values in [0, 255] (floating,
/// never quantized between operations).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }

    bool empty() const { return width <= 0 || height <= 0; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }

    double mean() const;
    double variance() const; // population convention
};

/// 2-D convolution stencil; values may be negative, unlike image pixels.
struct Kernel {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Kernel() = default;
    Kernel(int w, int h, std::vector<double> d) : width(w), height(h), data(std::move(d)) {}

    double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
};

enum class AugmentationKind { crop, rotate, blur };

const char* augmentation_kind_name(AugmentationKind kind);
AugmentationKind augmentation_kind_from_name(const std::string& name);

/// Ordered degradation series for one base image. step_params holds the
/// scalar knob per step (crop fraction removed, rotation degrees, blur sigma)
/// and is strictly increasing; steps[0] is the unmodified base.
struct AugmentationSeries {
    AugmentationKind kind = AugmentationKind::blur;
    std::string base_id;
    std::vector<GrayImage> steps;
    std::vector<double> step_params;
};

/// Rec. 601 luma from interleaved 8-bit RGB; result stays floating.
GrayImage to_grayscale(const uint8_t* rgb, int width, int height);

/// Exact correlation (no kernel flip) over the valid region only; output is
/// (h-kh+1) x (w-kw+1). Kernel sides must be odd and fit inside the image.
GrayImage convolve2d(const GrayImage& img, const Kernel& kernel);

/// Separable Gaussian, kernel radius ceil(3*sigma), edge-inclusive reflect
/// padding (x[-1] = x[0]); that padding keeps the global mean of the image
/// exactly preserved for symmetric kernels. sigma = 0 returns the input.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Ten nested crops; step k removes k*floor(h/20) rows from the bottom and
/// k*floor(w/20) columns from the right. Requires at least 20x20.
AugmentationSeries crop_series(const GrayImage& img, const std::string& base_id = "");

/// Rotations at 0,15,...,75 degrees about the center, bilinear interpolation,
/// canvas kept at the original size; out-of-frame pixels take the image mean.
/// Requires a square image. step_count generalizes the series length for
/// de-quantized rank tests; the default matches the six-step protocol.
AugmentationSeries rotation_series(const GrayImage& img, const std::string& base_id = "",
                                   int step_count = 6, double step_degrees = 15.0);

/// One Gaussian-blurred image per sigma; sigmas must be strictly increasing
/// with sigmas[0] == 0 so the first step is the unmodified base.
AugmentationSeries blur_series(const GrayImage& img, const std::vector<double>& sigmas,
                               const std::string& base_id = "");

/// The ten-step defocus schedule used when none is configured: 0,0.5,...,4.5.
std::vector<double> default_blur_sigmas();

} // namespace qualgate
