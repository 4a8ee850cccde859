#include "sketchtint/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sketchtint {

double gaussian_sigma_for_kernel(int kernel_size) {
    return 0.3 * ((kernel_size - 1) * 0.5 - 1.0) + 0.8;
}

std::vector<double> gaussian_kernel_1d(int kernel_size) {
    if (kernel_size < 3 || kernel_size % 2 == 0) {
        throw InvalidArgument("gaussian kernel size must be odd and >= 3, got " + std::to_string(kernel_size));
    }
    const double sigma = gaussian_sigma_for_kernel(kernel_size);
    const int radius = kernel_size / 2;
    std::vector<double> taps(static_cast<std::size_t>(kernel_size));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (auto& w : taps) w /= sum;
    return taps;
}

namespace {

// One separable pass. The clamp on each axis is independent, so the pair of
// passes equals a 2-D convolution with replicated borders.
RgbImage blur_once(const RgbImage& src, const std::vector<double>& taps) {
    const int w = src.width();
    const int h = src.height();
    const int radius = static_cast<int>(taps.size()) / 2;
    std::vector<double> horiz(src.samples().size());

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int sx = std::clamp(x + k, 0, w - 1);
                    acc += taps[static_cast<std::size_t>(k + radius)] * src.at(sx, y, c);
                }
                horiz[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
            }
        }
    }

    RgbImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int sy = std::clamp(y + k, 0, h - 1);
                    acc += taps[static_cast<std::size_t>(k + radius)] *
                           horiz[(static_cast<std::size_t>(sy) * w + x) * 3 + c];
                }
                out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
            }
        }
    }
    return out;
}

}  // namespace

RgbImage gaussian_blur(const RgbImage& img, int kernel_size, int iterations) {
    if (iterations < 1) throw InvalidArgument("blur iterations must be >= 1");
    const auto taps = gaussian_kernel_1d(kernel_size);
    if (kernel_size > std::min(img.width(), img.height())) {
        throw InvalidArgument("blur kernel size " + std::to_string(kernel_size) + " exceeds image size " +
                              std::to_string(img.width()) + "x" + std::to_string(img.height()));
    }
    RgbImage out = img;
    for (int i = 0; i < iterations; ++i) out = blur_once(out, taps);
    return out;
}

int luma(Rgb p) noexcept {
    // Integer form of round(0.299R + 0.587G + 0.114B).
    return (299 * p[0] + 587 * p[1] + 114 * p[2] + 500) / 1000;
}

StrokeMask binary_threshold_mask(const RgbImage& sketch, int threshold) {
    StrokeMask mask(sketch.width(), sketch.height());
    auto out = mask.samples();
    for (std::size_t i = 0; i < sketch.pixel_count(); ++i) {
        out[i] = luma(sketch.pixel(i)) < threshold ? 255 : 0;
    }
    return mask;
}

std::pair<RgbImage, RgbImage> align_dimensions(const RgbImage& a, const RgbImage& b) {
    const int w = std::min(a.width(), b.width());
    const int h = std::min(a.height(), b.height());
    return {crop_top_left(a, w, h), crop_top_left(b, w, h)};
}

}  // namespace sketchtint
