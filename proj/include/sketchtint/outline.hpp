#pragma once

#include <span>
#include <vector>

#include "sketchtint/image.hpp"
#include "sketchtint/quantize.hpp"

namespace sketchtint {

/// Everything that shapes a colored outline.
struct OutlineConfig {
    KSearchConfig search;
    int blur_kernel = 5;
    int blur_iters = 3;
    int mask_threshold = 128;
    /// Assignment-step workers inside k-means; results do not depend on it.
    int threads = 1;

    void validate() const;
    friend bool operator==(const OutlineConfig&, const OutlineConfig&) = default;
};

/// Colored outline plus the intermediates that produced it.
struct OutlineRender {
    RgbImage image;
    RgbImage quantized;
    StrokeMask mask;
    QuantizationResult quantization;
};

/// Blurred, palette-reduced photo and the fit behind it.
struct QuantizedPhoto {
    RgbImage quantized;
    QuantizationResult quantization;
};

/// Blur then quantize with the k search. `photo` should already be aligned.
QuantizedPhoto quantize_photo(const RgbImage& photo, const OutlineConfig& cfg);

/// Stroke pixels take the photo's quantized color, everything else is white:
/// per channel, out = (c & m) | ~m.
RgbImage merge_outline(const RgbImage& quantized, const StrokeMask& mask);

/// Align, blur the photo, quantize with the k search, mask the sketch, merge.
OutlineRender render_colored_outline_detailed(const RgbImage& photo, const RgbImage& sketch,
                                              const OutlineConfig& cfg = {});

/// Mask the (aligned) sketch and merge it with an already quantized photo.
OutlineRender render_with_quantized(QuantizedPhoto photo, const RgbImage& sketch, const OutlineConfig& cfg);

RgbImage render_colored_outline(const RgbImage& photo, const RgbImage& sketch, const OutlineConfig& cfg = {});

/// One outline per inertia threshold, every other setting shared.
std::vector<OutlineRender> render_threshold_ablation(const RgbImage& photo, const RgbImage& sketch,
                                                     std::span<const double> taus, const OutlineConfig& cfg = {});

}  // namespace sketchtint
