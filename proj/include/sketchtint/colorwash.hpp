#pragma once

#include "sketchtint/image.hpp"

namespace sketchtint {

inline constexpr double kDefaultSaturationFactor = 1.8;

/// Lightness from the sketch, a*/b* chroma from the photo, back to RGB.
/// Throws InvalidArgument if the images differ in size.
RgbImage lab_channel_swap(const RgbImage& photo, const RgbImage& sketch);

/// S' = min(1, factor * S); H and V untouched. Throws InvalidArgument if factor < 0.
HsvImage boost_saturation(const HsvImage& img, double factor);
RgbImage boost_saturation(const RgbImage& img, double factor = kDefaultSaturationFactor);

/// align -> lab_channel_swap -> boost_saturation(factor).
RgbImage make_colored_sketch(const RgbImage& photo, const RgbImage& sketch,
                             double factor = kDefaultSaturationFactor);

}  // namespace sketchtint
