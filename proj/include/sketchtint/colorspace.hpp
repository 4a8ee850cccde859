#pragma once

#include "sketchtint/image.hpp"

namespace sketchtint {

struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct Hsv {
    double h = 0.0;  // degrees, [0,360)
    double s = 0.0;
    double v = 0.0;
};

// Per-pixel conversions. sRGB primaries, D65 reference white.
Lab rgb_to_lab(Rgb rgb) noexcept;
/// Out-of-gamut results are clamped per channel after gamma encoding.
Rgb lab_to_rgb(const Lab& lab) noexcept;
/// Linear-light RGB in [0,1] before clamping; lets callers test gamut membership.
std::array<double, 3> lab_to_linear_rgb(const Lab& lab) noexcept;

Hsv rgb_to_hsv(Rgb rgb) noexcept;
Rgb hsv_to_rgb(const Hsv& hsv) noexcept;

// Whole-image conversions.
LabImage rgb_to_lab(const RgbImage& img);
RgbImage lab_to_rgb(const LabImage& img);
HsvImage rgb_to_hsv(const RgbImage& img);
RgbImage hsv_to_rgb(const HsvImage& img);

}  // namespace sketchtint
