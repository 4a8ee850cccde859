#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "sketchtint/image.hpp"

namespace sketchtint {

using Centroid = std::array<double, 3>;

/// Outcome of clustering an image's pixels in RGB space.
struct QuantizationResult {
    int k = 0;
    /// Exactly k centroids, real-valued, in [0,255].
    std::vector<Centroid> palette;
    /// Per-pixel index into `palette`.
    std::vector<std::uint32_t> labels;
    /// Mean squared RGB distance between each pixel and its centroid.
    double inertia = 0.0;
    /// Set by select_k when no scheduled k reached the threshold.
    bool saturated = false;
    /// Inertia of the fitted sample after each Lloyd assignment step.
    std::vector<double> inertia_trace;
    /// (k, inertia) of every fit made by select_k, in schedule order.
    std::vector<std::pair<int, double>> search_trace;

    /// Palette rounded to 8-bit colors.
    std::vector<Rgb> palette_rgb() const;
};

struct KMeansOptions {
    std::uint64_t seed = 42;
    int max_iters = 50;
    /// Stop once (previous - current) <= tol * previous.
    double tol = 1e-3;
    /// Independent k-means++ seedings; the lowest-inertia fit is kept.
    int restarts = 10;
    /// Worker threads for the assignment step; never affects results.
    int threads = 1;
};

/// Parameters of the inertia-threshold search over k.
struct KSearchConfig {
    double tau = 70.0;
    int k_start = 5;
    int stride = 5;
    int k_max = 105;
    std::uint64_t seed = 42;
    int max_iters = 50;
    double tol = 1e-3;
    /// Seedings per fit. One keeps the k search affordable on full-size photos.
    int restarts = 1;

    /// Throws InvalidArgument unless tau > 0, k_start >= 1, stride >= 1, k_max >= k_start.
    void validate() const;
    /// k_start, k_start + stride, ... up to and including k_max.
    std::vector<int> schedule() const;
    KMeansOptions kmeans_options(int threads = 1) const { return {seed, max_iters, tol, restarts, threads}; }

    friend bool operator==(const KSearchConfig&, const KSearchConfig&) = default;
};

/// Images larger than this are fitted on a seeded subsample of this many pixels.
inline constexpr std::size_t kMaxFitPixels = std::size_t{1} << 20;

/// Lloyd's algorithm with k-means++ seeding. Empty clusters are re-seeded at the
/// point farthest from its centroid. Throws InvalidArgument if k < 1.
QuantizationResult kmeans(const RgbImage& img, int k, const KMeansOptions& opts = {});

/// Fits k = k_start, k_start + stride, ... and returns the first fit whose
/// inertia is <= tau, or the last scheduled fit flagged `saturated`.
QuantizationResult select_k(const RgbImage& img, const KSearchConfig& cfg, int threads = 1);

/// Replaces each pixel with its rounded centroid.
RgbImage apply_palette(const RgbImage& img, const QuantizationResult& result);

}  // namespace sketchtint
