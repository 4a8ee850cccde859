#pragma once

// Synthetic photos, sketches and dataset trees for tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>

#include <unistd.h>

#include "sketchtint/image.hpp"
#include "sketchtint/image_io.hpp"

namespace fixtures {

using sketchtint::Rgb;
using sketchtint::RgbImage;
namespace fs = std::filesystem;

inline std::uint8_t clamp8(double v) {
    return static_cast<std::uint8_t>(std::lround(std::min(255.0, std::max(0.0, v))));
}

/// Smooth gradient with a few flat-colored ellipses and mild noise.
inline RgbImage synthetic_photo(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Rgb top{clamp8(255 * u(rng)), clamp8(255 * u(rng)), clamp8(255 * u(rng))};
    const Rgb bottom{clamp8(255 * u(rng)), clamp8(255 * u(rng)), clamp8(255 * u(rng))};
    RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        const double t = h > 1 ? double(y) / (h - 1) : 0.0;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = clamp8(top[c] * (1 - t) + bottom[c] * t);
        }
    }
    const int blobs = 3 + static_cast<int>(rng() % 3);
    for (int b = 0; b < blobs; ++b) {
        const double cx = u(rng) * w, cy = u(rng) * h;
        const double rx = (0.1 + 0.25 * u(rng)) * w, ry = (0.1 + 0.25 * u(rng)) * h;
        const Rgb color{clamp8(255 * u(rng)), clamp8(255 * u(rng)), clamp8(255 * u(rng))};
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                if (dx * dx + dy * dy <= 1.0) img.set_pixel(x, y, color);
            }
        }
    }
    std::normal_distribution<double> noise(0.0, 3.0);
    for (auto& s : img.samples()) s = clamp8(s + noise(rng));
    return img;
}

/// White canvas with black strokes of the given width: a few lines and a ring.
inline RgbImage synthetic_sketch(int w, int h, int stroke_width, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RgbImage img = sketchtint::make_uniform(w, h, {255, 255, 255});
    const double half = stroke_width / 2.0;
    auto stamp = [&](double px, double py) {
        for (int y = static_cast<int>(py - half); y <= static_cast<int>(py + half); ++y) {
            for (int x = static_cast<int>(px - half); x <= static_cast<int>(px + half); ++x) {
                if (x >= 0 && y >= 0 && x < w && y < h) img.set_pixel(x, y, {0, 0, 0});
            }
        }
    };
    for (int line = 0; line < 4; ++line) {
        const double x0 = u(rng) * w, y0 = u(rng) * h, x1 = u(rng) * w, y1 = u(rng) * h;
        const int steps = 2 * (w + h);
        for (int s = 0; s <= steps; ++s) {
            const double t = double(s) / steps;
            stamp(x0 + (x1 - x0) * t, y0 + (y1 - y0) * t);
        }
    }
    const double cx = w * (0.3 + 0.4 * u(rng)), cy = h * (0.3 + 0.4 * u(rng)), rad = 0.2 * std::min(w, h);
    for (int s = 0; s < 720; ++s) {
        const double a = s * M_PI / 360.0;
        stamp(cx + rad * std::cos(a), cy + rad * std::sin(a));
    }
    return img;
}

struct TreeOptions {
    int photos = 2;
    int width = 40;
    int height = 32;
    /// (photo index, version) pairs to leave out for all stroke widths.
    std::set<std::pair<int, int>> missing_versions;
    /// Make some sketches a couple of pixels larger than their photo.
    bool ragged = true;
};

/// Writes image/{id}.jpg and sketch/{id}_w{w}_v{v}.png under `root`.
inline void write_tree(const fs::path& root, const TreeOptions& opt = {}) {
    fs::create_directories(root / "image");
    fs::create_directories(root / "sketch");
    for (int p = 0; p < opt.photos; ++p) {
        const std::string id = std::to_string(100 + p);
        sketchtint::write_jpeg(root / "image" / (id + ".jpg"),
                               synthetic_photo(opt.width, opt.height, 1000u + static_cast<std::uint32_t>(p)));
        for (int w : {1, 3, 5}) {
            for (int v = 1; v <= 5; ++v) {
                if (opt.missing_versions.count({p, v})) continue;
                const int extra = opt.ragged ? (v % 3) : 0;
                const auto sketch = synthetic_sketch(opt.width + (v == 2 ? extra : 0), opt.height + extra, w,
                                                     static_cast<std::uint32_t>(p * 100 + v));
                sketchtint::write_png(root / "sketch" / (id + "_w" + std::to_string(w) + "_v" + std::to_string(v) + ".png"),
                                      sketch);
            }
        }
    }
}

/// Fresh empty directory under the system temp dir.
inline fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sketchtint_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace fixtures
