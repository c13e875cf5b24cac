#pragma once

// Shared natural-scene-statistics internals for the BRISQUE/NIQE feature
// extractors. Not part of the public headers.

#include "qualgate/image.hpp"

namespace qualgate::nss {

/// Local mean and local sigma maps from a 7x7 Gaussian window (sigma 7/6),
/// replicate padding.
void local_mean_sigma(const GrayImage& img, GrayImage& mu, GrayImage& sigma);

/// Mean-subtracted contrast-normalized field (I - mu) / (sigma + 1); the
/// stabilizing constant 1 matches the [0,255] intensity scale.
GrayImage mscn_field(const GrayImage& img);

/// Half-size bicubic downsample (Keys a = -0.5, centers aligned, replicate
/// borders).
GrayImage bicubic_half(const GrayImage& img);

} // namespace qualgate::nss
