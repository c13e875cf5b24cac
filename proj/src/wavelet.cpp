#include "qualgate/wavelet.hpp"

#include <array>
#include <cstddef>
#include <vector>

#include "qualgate/error.hpp"

namespace qualgate {

namespace {

// Orthonormal Daubechies-6 scaling coefficients (12 taps, sum = sqrt(2)).
constexpr std::array<double, 12> kDb6Lo = {
    0.11154074335008017,  0.4946238903983854,   0.7511339080215775,
    0.3152503517092432,   -0.22626469396516913, -0.12976686756709563,
    0.09750160558707936,  0.02752286553001629,  -0.031582039318031156,
    0.0005538422009938016, 0.004777257511010651, -0.00107730108499558};

constexpr std::array<double, 2> kHaarLo = {0.7071067811865476, 0.7071067811865476};

struct FilterPair {
    std::vector<double> lo;
    std::vector<double> hi; // quadrature mirror: hi[k] = (-1)^k lo[L-1-k]
};

FilterPair make_filters(WaveletKind kind) {
    FilterPair f;
    if (kind == WaveletKind::db6)
        f.lo.assign(kDb6Lo.begin(), kDb6Lo.end());
    else
        f.lo.assign(kHaarLo.begin(), kHaarLo.end());
    const size_t len = f.lo.size();
    f.hi.resize(len);
    for (size_t k = 0; k < len; ++k)
        f.hi[k] = ((k % 2 == 0) ? 1.0 : -1.0) * f.lo[len - 1 - k];
    return f;
}

// Periodic decimated filtering along x: out has width w/2.
void analyze_rows(const GrayImage& in, const std::vector<double>& taps, GrayImage& out) {
    const int w = in.width;
    const int half = w / 2;
    const int len = static_cast<int>(taps.size());
    out = GrayImage(half, in.height);
    for (int y = 0; y < in.height; ++y)
        for (int j = 0; j < half; ++j) {
            double acc = 0.0;
            for (int k = 0; k < len; ++k)
                acc += taps[k] * in.at(y, (2 * j + k) % w);
            out.at(y, j) = acc;
        }
}

void analyze_cols(const GrayImage& in, const std::vector<double>& taps, GrayImage& out) {
    const int h = in.height;
    const int half = h / 2;
    const int len = static_cast<int>(taps.size());
    out = GrayImage(in.width, half);
    for (int j = 0; j < half; ++j)
        for (int x = 0; x < in.width; ++x) {
            double acc = 0.0;
            for (int k = 0; k < len; ++k)
                acc += taps[k] * in.at((2 * j + k) % h, x);
            out.at(j, x) = acc;
        }
}

} // namespace

DwtBands dwt2(const GrayImage& img, WaveletKind kind) {
    const FilterPair filters = make_filters(kind);
    const int len = static_cast<int>(filters.lo.size());

    int w = img.width - img.width % 2;
    int h = img.height - img.height % 2;
    if (w < len || h < len)
        throw invalid_size("dwt2: image smaller than filter support");

    GrayImage even(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) even.at(y, x) = img.at(y, x);

    GrayImage lo_x, hi_x;
    analyze_rows(even, filters.lo, lo_x);
    analyze_rows(even, filters.hi, hi_x);

    DwtBands bands;
    analyze_cols(lo_x, filters.lo, bands.ll);
    analyze_cols(lo_x, filters.hi, bands.lh);
    analyze_cols(hi_x, filters.lo, bands.hl);
    analyze_cols(hi_x, filters.hi, bands.hh);
    return bands;
}

} // namespace qualgate
