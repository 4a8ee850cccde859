#include "sketchtint/outline.hpp"

#include <string>

#include "sketchtint/filters.hpp"

namespace sketchtint {

void OutlineConfig::validate() const {
    search.validate();
    if (blur_kernel < 3 || blur_kernel % 2 == 0) {
        throw InvalidArgument("blur kernel must be odd and >= 3, got " + std::to_string(blur_kernel));
    }
    if (blur_iters < 1) throw InvalidArgument("blur iterations must be >= 1");
    if (mask_threshold < 0 || mask_threshold > 255) throw InvalidArgument("mask threshold must be in [0,255]");
}

RgbImage merge_outline(const RgbImage& quantized, const StrokeMask& mask) {
    if (!quantized.same_size(mask)) throw InvalidArgument("mask and image dimensions differ");
    RgbImage out(quantized.width(), quantized.height());
    const auto src = quantized.samples();
    const auto m = mask.samples();
    auto dst = out.samples();
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto mi = m[i];
        for (std::size_t c = 0; c < 3; ++c) {
            dst[i * 3 + c] = static_cast<std::uint8_t>((src[i * 3 + c] & mi) | static_cast<std::uint8_t>(~mi));
        }
    }
    return out;
}

QuantizedPhoto quantize_photo(const RgbImage& photo, const OutlineConfig& cfg) {
    cfg.validate();
    const RgbImage blurred = gaussian_blur(photo, cfg.blur_kernel, cfg.blur_iters);
    QuantizationResult quant = select_k(blurred, cfg.search, cfg.threads);
    RgbImage quantized = apply_palette(blurred, quant);
    return {std::move(quantized), std::move(quant)};
}

OutlineRender render_with_quantized(QuantizedPhoto photo, const RgbImage& sketch, const OutlineConfig& cfg) {
    if (!photo.quantized.same_size(sketch)) throw InvalidArgument("quantized photo and sketch dimensions differ");
    StrokeMask mask = binary_threshold_mask(sketch, cfg.mask_threshold);
    RgbImage image = merge_outline(photo.quantized, mask);
    return {std::move(image), std::move(photo.quantized), std::move(mask), std::move(photo.quantization)};
}

OutlineRender render_colored_outline_detailed(const RgbImage& photo, const RgbImage& sketch,
                                              const OutlineConfig& cfg) {
    cfg.validate();
    const auto [aligned_photo, aligned_sketch] = align_dimensions(photo, sketch);
    return render_with_quantized(quantize_photo(aligned_photo, cfg), aligned_sketch, cfg);
}

RgbImage render_colored_outline(const RgbImage& photo, const RgbImage& sketch, const OutlineConfig& cfg) {
    return render_colored_outline_detailed(photo, sketch, cfg).image;
}

std::vector<OutlineRender> render_threshold_ablation(const RgbImage& photo, const RgbImage& sketch,
                                                     std::span<const double> taus, const OutlineConfig& cfg) {
    if (taus.empty()) throw InvalidArgument("threshold ablation needs at least one tau");
    std::vector<OutlineRender> renders;
    renders.reserve(taus.size());
    for (double tau : taus) {
        OutlineConfig local = cfg;
        local.search.tau = tau;
        renders.push_back(render_colored_outline_detailed(photo, sketch, local));
    }
    return renders;
}

}  // namespace sketchtint
