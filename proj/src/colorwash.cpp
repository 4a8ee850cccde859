#include "sketchtint/colorwash.hpp"

#include <algorithm>
#include <cmath>

#include "sketchtint/colorspace.hpp"
#include "sketchtint/filters.hpp"

namespace sketchtint {

RgbImage lab_channel_swap(const RgbImage& photo, const RgbImage& sketch) {
    if (!photo.same_size(sketch)) throw InvalidArgument("photo and sketch dimensions differ");
    RgbImage out(photo.width(), photo.height());
    for (std::size_t i = 0; i < photo.pixel_count(); ++i) {
        const Lab chroma = rgb_to_lab(photo.pixel(i));
        const Lab lightness = rgb_to_lab(sketch.pixel(i));
        out.set_pixel(i, lab_to_rgb(Lab{lightness.l, chroma.a, chroma.b}));
    }
    return out;
}

HsvImage boost_saturation(const HsvImage& img, double factor) {
    if (!(factor >= 0.0) || !std::isfinite(factor)) throw InvalidArgument("saturation factor must be >= 0");
    HsvImage out = img;
    auto s = out.samples();
    for (std::size_t i = 0; i < out.pixel_count(); ++i) s[i * 3 + 1] = std::min(1.0, factor * s[i * 3 + 1]);
    return out;
}

RgbImage boost_saturation(const RgbImage& img, double factor) {
    return hsv_to_rgb(boost_saturation(rgb_to_hsv(img), factor));
}

RgbImage make_colored_sketch(const RgbImage& photo, const RgbImage& sketch, double factor) {
    const auto [aligned_photo, aligned_sketch] = align_dimensions(photo, sketch);
    return boost_saturation(lab_channel_swap(aligned_photo, aligned_sketch), factor);
}

}  // namespace sketchtint
