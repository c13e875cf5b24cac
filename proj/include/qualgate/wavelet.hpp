#pragma once

#include "qualgate/image.hpp"

namespace qualgate {

enum class WaveletKind { db6, haar };

/// One-level 2-D DWT subbands; ll is the coarse approximation, the other
/// three hold the horizontal/vertical/diagonal detail coefficients.
struct DwtBands {
    GrayImage ll;
    GrayImage lh;
    GrayImage hl;
    GrayImage hh;
};

/// Separable one-level DWT with periodic signal extension. Odd image sides
/// are cropped by one row/column first. Throws InvalidSize when the cropped
/// image is smaller than the filter support.
DwtBands dwt2(const GrayImage& img, WaveletKind kind = WaveletKind::db6);

} // namespace qualgate
