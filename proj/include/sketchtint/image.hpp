#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sketchtint {

/// Raised when an operation's preconditions on its arguments are violated.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised on file-system failures (missing roots, unwritable outputs).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an image file cannot be decoded.
class DecodeError : public IoError {
public:
    using IoError::IoError;
};

/// Row-major interleaved raster with a fixed channel count.
///
/// Dimensions are always positive and `samples().size() == width * height * Channels`.
template <typename T, int Channels>
class Raster {
public:
    using value_type = T;
    using Pixel = std::array<T, Channels>;
    static constexpr int channels = Channels;

    Raster(int width, int height, T fill = T{})
        : width_(checked_dim(width, "width")), height_(checked_dim(height, "height")),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * Channels, fill) {}

    Raster(int width, int height, std::vector<T> samples)
        : width_(checked_dim(width, "width")), height_(checked_dim(height, "height")),
          data_(std::move(samples)) {
        if (data_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_) * Channels) {
            throw InvalidArgument("raster sample count does not match " + std::to_string(width_) + "x" +
                                  std::to_string(height_) + "x" + std::to_string(Channels));
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    std::span<const T> samples() const noexcept { return data_; }
    std::span<T> samples() noexcept { return data_; }

    Pixel pixel(std::size_t index) const noexcept {
        Pixel p{};
        for (int c = 0; c < Channels; ++c) p[c] = data_[index * Channels + c];
        return p;
    }
    Pixel pixel(int x, int y) const noexcept { return pixel(offset(x, y)); }

    void set_pixel(std::size_t index, const Pixel& p) noexcept {
        for (int c = 0; c < Channels; ++c) data_[index * Channels + c] = p[c];
    }
    void set_pixel(int x, int y, const Pixel& p) noexcept { set_pixel(offset(x, y), p); }

    T& at(int x, int y, int c) noexcept { return data_[offset(x, y) * Channels + c]; }
    const T& at(int x, int y, int c) const noexcept { return data_[offset(x, y) * Channels + c]; }

    bool same_size(int w, int h) const noexcept { return width_ == w && height_ == h; }
    template <typename U, int C>
    bool same_size(const Raster<U, C>& other) const noexcept {
        return same_size(other.width(), other.height());
    }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    static int checked_dim(int v, const char* name) {
        if (v < 1) throw InvalidArgument(std::string("raster ") + name + " must be >= 1");
        return v;
    }
    std::size_t offset(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<T> data_;
};

/// 8-bit sRGB, interleaved R,G,B.
using RgbImage = Raster<std::uint8_t, 3>;
/// Binary stroke raster: 255 marks a stroke, 0 background.
using StrokeMask = Raster<std::uint8_t, 1>;
/// CIELAB triples (L*, a*, b*), D65.
using LabImage = Raster<double, 3>;
/// Hexcone HSV triples: H in degrees [0,360), S and V in [0,1].
using HsvImage = Raster<double, 3>;

using Rgb = RgbImage::Pixel;

/// Solid-color image.
RgbImage make_uniform(int width, int height, Rgb color);

/// Number of distinct colors in the image.
std::size_t distinct_colors(const RgbImage& img);

/// Sub-rectangle starting at the origin. Throws if larger than the source.
RgbImage crop_top_left(const RgbImage& img, int width, int height);

}  // namespace sketchtint
