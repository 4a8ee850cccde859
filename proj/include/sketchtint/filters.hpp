#pragma once

#include <utility>
#include <vector>

#include "sketchtint/image.hpp"

namespace sketchtint {

/// Gaussian sigma implied by a bare kernel size: 0.3*((size-1)/2 - 1) + 0.8.
double gaussian_sigma_for_kernel(int kernel_size);

/// Normalized 1-D Gaussian taps; the 2-D kernel is their outer product.
std::vector<double> gaussian_kernel_1d(int kernel_size);

/// Repeated Gaussian blur with edge replication, rounding to 8 bits after each pass.
///
/// Throws InvalidArgument if `kernel_size` is even, below 3, or larger than
/// min(width, height), or if `iterations` < 1.
RgbImage gaussian_blur(const RgbImage& img, int kernel_size, int iterations);

/// Rec. 601 luma rounded to the nearest integer.
int luma(Rgb p) noexcept;

/// 255 where luma(p) < threshold, else 0.
StrokeMask binary_threshold_mask(const RgbImage& sketch, int threshold);

/// Crops both images to the component-wise minimum size, dropping bottom rows
/// and right columns.
std::pair<RgbImage, RgbImage> align_dimensions(const RgbImage& a, const RgbImage& b);

}  // namespace sketchtint
