#include "sketchtint/image.hpp"

#include <algorithm>

namespace sketchtint {

RgbImage make_uniform(int width, int height, Rgb color) {
    RgbImage img(width, height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) img.set_pixel(i, color);
    return img;
}

std::size_t distinct_colors(const RgbImage& img) {
    std::vector<std::uint32_t> packed;
    packed.reserve(img.pixel_count());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const auto p = img.pixel(i);
        packed.push_back((std::uint32_t{p[0]} << 16) | (std::uint32_t{p[1]} << 8) | p[2]);
    }
    std::sort(packed.begin(), packed.end());
    return static_cast<std::size_t>(std::unique(packed.begin(), packed.end()) - packed.begin());
}

RgbImage crop_top_left(const RgbImage& img, int width, int height) {
    if (width > img.width() || height > img.height()) {
        throw InvalidArgument("crop region exceeds source image");
    }
    if (img.same_size(width, height)) return img;
    RgbImage out(width, height);
    const auto src = img.samples();
    auto dst = out.samples();
    const std::size_t row = static_cast<std::size_t>(width) * 3;
    for (int y = 0; y < height; ++y) {
        const auto from = src.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(y) * img.width() * 3);
        std::copy_n(from, row, dst.begin() + static_cast<std::ptrdiff_t>(y * row));
    }
    return out;
}

}  // namespace sketchtint
