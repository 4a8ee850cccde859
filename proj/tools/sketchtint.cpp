// sketchtint: colored outlines and colored sketches from photo/sketch pairs.
//
// Exit codes: 0 success, 2 usage or validation, 3 I/O, 4 internal.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sketchtint/colorwash.hpp"
#include "sketchtint/dataset.hpp"
#include "sketchtint/filters.hpp"
#include "sketchtint/image_io.hpp"
#include "sketchtint/outline.hpp"
#include "sketchtint/quantize.hpp"

namespace {

using namespace sketchtint;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void add_search_flags(CLI::App* cmd, KSearchConfig& search) {
    cmd->add_option("--tau", search.tau, "Inertia threshold for the k search")->capture_default_str();
    cmd->add_option("--k-start", search.k_start, "First k tried")->capture_default_str();
    cmd->add_option("--stride", search.stride, "Step between tried k values")->capture_default_str();
    cmd->add_option("--k-max", search.k_max, "Largest k tried")->capture_default_str();
    cmd->add_option("--seed", search.seed, "Seed for every stochastic step")->capture_default_str();
    cmd->add_option("--restarts", search.restarts, "k-means++ seedings per fit")->capture_default_str();
}

void add_outline_flags(CLI::App* cmd, OutlineConfig& cfg) {
    add_search_flags(cmd, cfg.search);
    cmd->add_option("--blur-kernel", cfg.blur_kernel, "Gaussian kernel size (odd, >= 3)")->capture_default_str();
    cmd->add_option("--blur-iters", cfg.blur_iters, "Gaussian blur passes")->capture_default_str();
    cmd->add_option("--mask-threshold", cfg.mask_threshold, "Luma below this is a stroke")->capture_default_str();
}

void check_search(const KSearchConfig& s) {
    if (!(s.tau > 0)) throw UsageError("--tau must be > 0");
    if (s.k_start < 1) throw UsageError("--k-start must be >= 1");
    if (s.stride < 1) throw UsageError("--stride must be >= 1");
    if (s.k_max < s.k_start) throw UsageError("--k-max must be >= --k-start");
    if (s.restarts < 1) throw UsageError("--restarts must be >= 1");
}

void check_outline(const OutlineConfig& cfg) {
    check_search(cfg.search);
    if (cfg.blur_kernel < 3 || cfg.blur_kernel % 2 == 0) {
        throw UsageError("--blur-kernel must be odd and >= 3, got " + std::to_string(cfg.blur_kernel));
    }
    if (cfg.blur_iters < 1) throw UsageError("--blur-iters must be >= 1");
    if (cfg.mask_threshold < 0 || cfg.mask_threshold > 255) throw UsageError("--mask-threshold must be in [0,255]");
}

void check_saturation(double s) {
    if (!(s >= 0.0)) throw UsageError("--saturation must be >= 0");
}

void print_stats(const QuantizationResult& q) {
    nlohmann::ordered_json j;
    j["k"] = q.k;
    j["inertia"] = q.inertia;
    j["saturated"] = q.saturated;
    std::cout << j.dump() << std::endl;
}

int default_jobs() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Colored outlines and colored sketches from photo/sketch pairs", "sketchtint"};
    app.require_subcommand(1);

    // outline
    OutlineConfig outline_cfg;
    std::string outline_photo, outline_sketch, outline_out;
    auto* outline = app.add_subcommand("outline", "Render a colored outline for one photo/sketch pair");
    outline->add_option("--photo", outline_photo, "Photo (PNG or JPEG)")->required();
    outline->add_option("--sketch", outline_sketch, "Sketch (PNG or JPEG)")->required();
    outline->add_option("--out", outline_out, "Output PNG")->required();
    add_outline_flags(outline, outline_cfg);

    // colorize
    double colorize_saturation = kDefaultSaturationFactor;
    std::string colorize_photo, colorize_sketch, colorize_out;
    auto* colorize = app.add_subcommand("colorize", "Render a color-filled sketch for one photo/sketch pair");
    colorize->add_option("--photo", colorize_photo, "Photo (PNG or JPEG)")->required();
    colorize->add_option("--sketch", colorize_sketch, "Sketch (PNG or JPEG)")->required();
    colorize->add_option("--out", colorize_out, "Output PNG")->required();
    colorize->add_option("--saturation", colorize_saturation, "HSV saturation factor")->capture_default_str();

    // dataset build
    RenderSettings build_settings;
    NamingLayout layout;
    std::string build_root, build_out, build_manifest;
    int build_jobs = default_jobs();
    auto* dataset = app.add_subcommand("dataset", "Batch operations over a dataset tree");
    dataset->require_subcommand(1);
    auto* build = dataset->add_subcommand("build", "Render every photo/sketch pair and write a manifest");
    build->add_option("--root", build_root, "Dataset root directory")->required();
    build->add_option("--out-dir", build_out, "Output directory")->required();
    build->add_option("--manifest", build_manifest, "Manifest path (default <out-dir>/manifest.json)");
    build->add_option("--jobs", build_jobs, "Worker threads")->envname("SKETCHTINT_JOBS")->capture_default_str();
    build->add_option("--image-template", layout.image_template, "Photo path template")->capture_default_str();
    build->add_option("--sketch-template", layout.sketch_template, "Sketch path template")->capture_default_str();
    build->add_option("--saturation", build_settings.saturation, "HSV saturation factor")->capture_default_str();
    add_outline_flags(build, build_settings.outline);

    // quantize
    KSearchConfig quant_search;
    std::optional<int> quant_k;
    std::string quant_photo, quant_out;
    auto* quantize = app.add_subcommand("quantize", "Reduce a photo's colors with k-means");
    quantize->add_option("--photo", quant_photo, "Photo (PNG or JPEG)")->required();
    quantize->add_option("--out", quant_out, "Output PNG")->required();
    auto* k_opt = quantize->add_option("--k", quant_k, "Fixed cluster count (skips the k search)");
    add_search_flags(quantize, quant_search);
    k_opt->excludes(quantize->get_option("--tau"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*outline) {
            check_outline(outline_cfg);
            const auto photo = read_image(outline_photo);
            const auto sketch = read_image(outline_sketch);
            const auto render = render_colored_outline_detailed(photo, sketch, outline_cfg);
            write_png(outline_out, render.image);
            print_stats(render.quantization);
        } else if (*colorize) {
            check_saturation(colorize_saturation);
            const auto photo = read_image(colorize_photo);
            const auto sketch = read_image(colorize_sketch);
            write_png(colorize_out, make_colored_sketch(photo, sketch, colorize_saturation));
        } else if (*build) {
            check_outline(build_settings.outline);
            check_saturation(build_settings.saturation);
            if (build_jobs < 1) throw UsageError("--jobs must be >= 1");
            const auto scan = scan_dataset(build_root, layout);
            for (const auto& w : scan.warnings) std::cerr << "warning: " << w.path.string() << ": " << w.message << "\n";
            BuildOptions opts;
            opts.out_dir = build_out;
            opts.manifest_path = build_manifest;
            opts.dataset_root = build_root;
            opts.jobs = build_jobs;
            const auto manifest = build_all(scan.entries, build_settings, opts);
            std::size_t failed = 0;
            for (const auto& e : manifest.entries) {
                if (e.error) {
                    ++failed;
                    std::cerr << "error: " << e.sketch_path.string() << ": " << *e.error << "\n";
                }
            }
            std::cerr << manifest.entries.size() - failed << "/" << manifest.entries.size() << " entries rendered\n";
            if (failed == manifest.entries.size()) return kExitIo;
        } else if (*quantize) {
            check_search(quant_search);
            if (quant_k && *quant_k < 1) throw UsageError("--k must be >= 1");
            const auto photo = read_image(quant_photo);
            const auto result = quant_k ? kmeans(photo, *quant_k, quant_search.kmeans_options())
                                        : select_k(photo, quant_search);
            write_png(quant_out, apply_palette(photo, result));
            print_stats(result);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const EmptyDatasetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
