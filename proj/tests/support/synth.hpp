#pragma once

// Deterministic synthetic fixtures and independent oracles shared by the
// test suites. Everything here is seeded and reproducible; nothing depends
// on the library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qualgate/image.hpp"
#include "qualgate/rng.hpp"

namespace testsupport {

// ---- deterministic samplers -------------------------------------------------

class Sampler {
public:
    explicit Sampler(uint64_t seed) : rng_(seed) {}

    double uniform01() {
        // 53-bit mantissa draw
        return (rng_.next_u64() >> 11) * 0x1.0p-53;
    }

    double normal() {
        // Marsaglia polar method
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double laplace(double scale = 1.0) {
        const double u = uniform01() - 0.5;
        return -scale * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::fabs(u));
    }

    // Marsaglia-Tsang gamma; shapes below 1 use the boost trick
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Symmetric generalized Gaussian with shape alpha and scale beta:
    /// |X| = beta * G^(1/alpha), G ~ Gamma(1/alpha).
    double ggd(double alpha, double beta) {
        const double magnitude = beta * std::pow(gamma(1.0 / alpha), 1.0 / alpha);
        return uniform01() < 0.5 ? -magnitude : magnitude;
    }

    /// Asymmetric variant: the negative side carries mass beta_l/(beta_l+beta_r).
    double aggd(double alpha, double beta_l, double beta_r) {
        const bool negative = uniform01() < beta_l / (beta_l + beta_r);
        const double beta = negative ? beta_l : beta_r;
        const double magnitude = beta * std::pow(gamma(1.0 / alpha), 1.0 / alpha);
        return negative ? -magnitude : magnitude;
    }

    qualgate::Rng& raw() { return rng_; }

private:
    qualgate::Rng rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline std::vector<double> draw(Sampler& sampler, size_t n, double (Sampler::*fn)()) {
    std::vector<double> out(n);
    for (double& v : out) v = (sampler.*fn)();
    return out;
}

// ---- synthetic images ---------------------------------------------------------

/// Band-limited lattice noise: random values on a coarse grid, cosine-
/// interpolated, several octaves. Output spans roughly [20, 235].
inline qualgate::GrayImage value_noise(int width, int height, uint64_t seed, int octaves = 4,
                                       int base_cell = 32) {
    Sampler sampler(seed);
    std::vector<double> field(static_cast<size_t>(width) * height, 0.0);
    double amplitude = 1.0, total_amp = 0.0;
    for (int oct = 0; oct < octaves; ++oct) {
        const int cell = std::max(2, base_cell >> oct);
        const int gw = width / cell + 2, gh = height / cell + 2;
        std::vector<double> lattice(static_cast<size_t>(gw) * gh);
        for (double& v : lattice) v = sampler.uniform01();
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                const double fx = static_cast<double>(x) / cell;
                const double fy = static_cast<double>(y) / cell;
                const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
                auto smooth = [](double t) { return 0.5 - 0.5 * std::cos(M_PI * t); };
                const double tx = smooth(fx - x0), ty = smooth(fy - y0);
                const double v00 = lattice[static_cast<size_t>(y0) * gw + x0];
                const double v01 = lattice[static_cast<size_t>(y0) * gw + x0 + 1];
                const double v10 = lattice[static_cast<size_t>(y0 + 1) * gw + x0];
                const double v11 = lattice[static_cast<size_t>(y0 + 1) * gw + x0 + 1];
                const double v = (1 - ty) * ((1 - tx) * v00 + tx * v01) +
                                 ty * ((1 - tx) * v10 + tx * v11);
                field[static_cast<size_t>(y) * width + x] += amplitude * v;
            }
        total_amp += amplitude;
        amplitude *= 0.55;
    }
    qualgate::GrayImage img(width, height);
    for (size_t i = 0; i < field.size(); ++i)
        img.data[i] = 20.0 + 215.0 * field[i] / total_amp;
    return img;
}

inline qualgate::GrayImage iid_noise(int width, int height, uint64_t seed) {
    Sampler sampler(seed);
    qualgate::GrayImage img(width, height);
    for (double& v : img.data) v = 255.0 * sampler.uniform01();
    return img;
}

inline qualgate::GrayImage checkerboard(int width, int height, int period, double low = 30.0,
                                        double high = 220.0) {
    qualgate::GrayImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.at(y, x) = ((x / period + y / period) % 2 == 0) ? low : high;
    return img;
}

/// Mixed texture for corpus-style fixtures: value noise modulated with an
/// oriented sinusoid and a contrast jitter, so features vary across images.
inline qualgate::GrayImage textured_photo(int width, int height, uint64_t seed) {
    Sampler sampler(seed);
    qualgate::GrayImage base = value_noise(width, height, seed * 7919 + 13, 5, 48);
    const double angle = sampler.uniform01() * M_PI;
    const double freq = 0.08 + 0.22 * sampler.uniform01();
    const double contrast = 0.6 + 0.4 * sampler.uniform01();
    const double cx = std::cos(angle) * freq, cy = std::sin(angle) * freq;
    qualgate::GrayImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double stripe = 0.5 + 0.5 * std::sin(cx * x + cy * y);
            double v = base.at(y, x) * (0.55 + 0.45 * stripe);
            v = 127.5 + contrast * (v - 127.5);
            img.at(y, x) = std::clamp(v, 0.0, 255.0);
        }
    return img;
}

/// 90-degree symmetric plus sign. Arm pixels alternate +/- amplitude on a
/// checkerboard so the global mean stays at the background level; the side
/// is forced odd so the checkerboard parity survives 90-degree rotation
/// about the center.
inline qualgate::GrayImage cross_image(int side, double background = 128.0,
                                       double amplitude = 90.0) {
    side |= 1;
    qualgate::GrayImage img(side, side, background);
    const int center = side / 2, arm = side / 3, thickness = side / 12;
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            const bool horizontal =
                std::abs(y - center) <= thickness && std::abs(x - center) <= arm;
            const bool vertical =
                std::abs(x - center) <= thickness && std::abs(y - center) <= arm;
            if (horizontal || vertical)
                img.at(y, x) = background + ((x + y) % 2 == 0 ? amplitude : -amplitude);
        }
    return img;
}

// ---- oracles ------------------------------------------------------------------

/// Textbook computational Pearson formula, a different algebraic route than
/// the library's two-pass centering.
inline double pcc_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

/// O(n^2) counting ranks with average ties.
inline std::vector<double> rank_oracle(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        size_t below = 0, equal = 0;
        for (size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++below;
            if (v[j] == v[i]) ++equal;
        }
        ranks[i] = below + 1 + (equal - 1) * 0.5;
    }
    return ranks;
}

inline double srcc_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    return pcc_oracle(rank_oracle(x), rank_oracle(y));
}

} // namespace testsupport
