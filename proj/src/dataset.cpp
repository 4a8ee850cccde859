#include "sketchtint/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <regex>
#include <thread>
#include <tuple>

#include "sketchtint/filters.hpp"
#include "sketchtint/image_io.hpp"

namespace sketchtint {

namespace {

enum class Field { Id, Width, Version };

struct CompiledTemplate {
    std::regex pattern;
    std::vector<Field> groups;
};

CompiledTemplate compile_template(const std::string& tmpl, bool needs_variant) {
    static const std::string special = R"(\^$.|?*+()[]{}/)";
    std::string re;
    std::vector<Field> groups;
    for (std::size_t i = 0; i < tmpl.size();) {
        if (tmpl[i] == '{') {
            const auto close = tmpl.find('}', i);
            if (close == std::string::npos) throw InvalidArgument("unterminated placeholder in template: " + tmpl);
            const std::string name = tmpl.substr(i + 1, close - i - 1);
            if (name == "id") {
                groups.push_back(Field::Id);
                re += "([^/]+?)";
            } else if (name == "width") {
                groups.push_back(Field::Width);
                re += "([0-9]+)";
            } else if (name == "version") {
                groups.push_back(Field::Version);
                re += "([0-9]+)";
            } else {
                throw InvalidArgument("unknown placeholder {" + name + "} in template: " + tmpl);
            }
            i = close + 1;
            continue;
        }
        if (special.find(tmpl[i]) != std::string::npos && tmpl[i] != '/') re += '\\';
        re += tmpl[i++];
    }
    auto has = [&](Field f) { return std::count(groups.begin(), groups.end(), f) == 1; };
    if (!has(Field::Id)) throw InvalidArgument("template needs exactly one {id}: " + tmpl);
    if (needs_variant && !(has(Field::Width) && has(Field::Version))) {
        throw InvalidArgument("sketch template needs {width} and {version}: " + tmpl);
    }
    return {std::regex(re), std::move(groups)};
}

struct Match {
    std::string id;
    int width = 0;
    int version = 0;
};

std::optional<Match> match_template(const CompiledTemplate& t, const std::string& rel) {
    std::smatch m;
    if (!std::regex_match(rel, m, t.pattern)) return std::nullopt;
    Match out;
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        const std::string text = m[g + 1].str();
        switch (t.groups[g]) {
            case Field::Id: out.id = text; break;
            case Field::Width: out.width = text.size() > 3 ? -1 : std::stoi(text); break;
            case Field::Version: out.version = text.size() > 3 ? -1 : std::stoi(text); break;
        }
    }
    return out;
}

DatasetEntry make_entry(fs::path image, fs::path sketch, int width, int version) {
    DatasetEntry e;
    e.image_path = std::move(image);
    e.sketch_path = std::move(sketch);
    e.width = width;
    e.version = version;
    return e;
}

bool valid_width(int w) { return std::find(kStrokeWidths.begin(), kStrokeWidths.end(), w) != kStrokeWidths.end(); }

}  // namespace

ScanResult scan_dataset(const fs::path& root, const NamingLayout& layout) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IoError("dataset root is not a readable directory: " + root.string());

    const auto image_t = compile_template(layout.image_template, false);
    const auto sketch_t = compile_template(layout.sketch_template, true);

    std::vector<fs::path> files;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot read dataset root " + root.string() + ": " + ec.message());
    for (const auto& de : it) {
        if (de.is_regular_file()) files.push_back(de.path());
    }
    std::sort(files.begin(), files.end());

    ScanResult result;
    std::map<std::string, fs::path> images;
    std::map<std::string, std::map<std::pair<int, int>, fs::path>> sketches;

    for (const auto& file : files) {
        const std::string rel = file.lexically_relative(root).generic_string();
        if (auto m = match_template(image_t, rel)) {
            if (!images.emplace(m->id, file).second) {
                result.warnings.push_back({file, "duplicate photo for id " + m->id});
            }
            continue;
        }
        if (auto m = match_template(sketch_t, rel)) {
            if (!valid_width(m->width) || m->version < 1 || m->version > kSketchVersions) {
                result.warnings.push_back({file, "sketch variant out of range (width " + std::to_string(m->width) +
                                                     ", version " + std::to_string(m->version) + ")"});
                continue;
            }
            sketches[m->id].emplace(std::pair{m->width, m->version}, file);
            continue;
        }
        result.warnings.push_back({file, "file matches neither naming template"});
    }

    for (const auto& [id, image] : images) {
        const auto found = sketches.find(id);
        std::vector<std::string> missing;
        for (int w : kStrokeWidths) {
            for (int v = 1; v <= kSketchVersions; ++v) {
                if (found != sketches.end()) {
                    if (auto s = found->second.find({w, v}); s != found->second.end()) {
                        result.entries.push_back(make_entry(image, s->second, w, v));
                        continue;
                    }
                }
                missing.push_back("w" + std::to_string(w) + "v" + std::to_string(v));
            }
        }
        if (!missing.empty()) {
            std::string msg = "photo " + id + " is missing sketch variants:";
            for (const auto& m : missing) msg += " " + m;
            result.warnings.push_back({image, std::move(msg)});
        }
    }
    for (const auto& [id, variants] : sketches) {
        if (images.contains(id)) continue;
        for (const auto& [key, path] : variants) result.warnings.push_back({path, "sketch has no photo (id " + id + ")"});
    }

    if (result.entries.empty()) throw EmptyDatasetError("no photo/sketch pairs found under " + root.string());
    std::sort(result.entries.begin(), result.entries.end(), [](const DatasetEntry& a, const DatasetEntry& b) {
        return std::tie(a.image_path, a.sketch_path) < std::tie(b.image_path, b.sketch_path);
    });
    return result;
}

void RenderSettings::validate() const {
    outline.validate();
    if (!(saturation >= 0.0)) throw InvalidArgument("saturation factor must be >= 0");
}

namespace {

fs::path mirrored_name(const fs::path& sketch, const fs::path& root) {
    fs::path rel;
    if (!root.empty()) {
        rel = fs::absolute(sketch).lexically_normal().lexically_relative(fs::absolute(root).lexically_normal());
    }
    if (rel.empty() || *rel.begin() == "..") rel = sketch.filename();
    rel.replace_extension(".png");
    return rel;
}

// Quantized photos keyed by (photo, aligned size). Every sketch variant of one
// photo shares the same fit; the slot is released once its last entry is done.
class PhotoCache {
public:
    explicit PhotoCache(const std::vector<DatasetEntry>& entries) {
        for (const auto& e : entries) ++remaining_[e.image_path];
    }

    std::shared_ptr<const QuantizedPhoto> get(const fs::path& image, const RgbImage& aligned_photo,
                                              const OutlineConfig& cfg) {
        const Key key{image, aligned_photo.width(), aligned_photo.height()};
        std::shared_ptr<Slot> slot;
        {
            std::lock_guard lock(mu_);
            auto& s = slots_[key];
            if (!s) s = std::make_shared<Slot>();
            slot = s;
        }
        std::call_once(slot->once, [&] {
            try {
                slot->value = std::make_shared<const QuantizedPhoto>(quantize_photo(aligned_photo, cfg));
            } catch (...) {
                slot->error = std::current_exception();
            }
        });
        if (slot->error) std::rethrow_exception(slot->error);
        return slot->value;
    }

    void release(const fs::path& image) {
        std::lock_guard lock(mu_);
        if (--remaining_[image] > 0) return;
        for (auto it = slots_.begin(); it != slots_.end();) {
            it = std::get<0>(it->first) == image ? slots_.erase(it) : std::next(it);
        }
    }

private:
    using Key = std::tuple<fs::path, int, int>;
    struct Slot {
        std::once_flag once;
        std::shared_ptr<const QuantizedPhoto> value;
        std::exception_ptr error;
    };
    std::mutex mu_;
    std::map<Key, std::shared_ptr<Slot>> slots_;
    std::map<fs::path, int> remaining_;
};

DatasetEntry render_entry(DatasetEntry entry, const RenderSettings& settings, const BuildOptions& options,
                          PhotoCache& cache) {
    const fs::path name = mirrored_name(entry.sketch_path, options.dataset_root);
    const fs::path outline_path = (options.out_dir / "colored_outline" / name).lexically_normal();
    const fs::path sketch_path = (options.out_dir / "colored_sketch" / name).lexically_normal();

    const RgbImage photo = read_image(entry.image_path);
    const RgbImage sketch = read_image(entry.sketch_path);
    const auto [aligned_photo, aligned_sketch] = align_dimensions(photo, sketch);

    const auto quantized = cache.get(entry.image_path, aligned_photo, settings.outline);
    const OutlineRender outline = render_with_quantized(*quantized, aligned_sketch, settings.outline);
    const RgbImage colored = boost_saturation(lab_channel_swap(aligned_photo, aligned_sketch), settings.saturation);

    fs::create_directories(outline_path.parent_path());
    fs::create_directories(sketch_path.parent_path());
    write_png(outline_path, outline.image);
    write_png(sketch_path, colored);

    entry.colored_outline = outline_path;
    entry.colored_sketch = sketch_path;
    entry.k_used = outline.quantization.k;
    entry.inertia = outline.quantization.inertia;
    entry.saturated_k = outline.quantization.saturated;
    return entry;
}

}  // namespace

Manifest build_all(const std::vector<DatasetEntry>& entries, const RenderSettings& settings,
                   const BuildOptions& options) {
    if (entries.empty()) throw EmptyDatasetError("no entries to build");
    settings.validate();
    if (options.out_dir.empty()) throw InvalidArgument("output directory is required");

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec || !fs::is_directory(options.out_dir)) {
        throw IoError("cannot create output directory " + options.out_dir.string() +
                      (ec ? ": " + ec.message() : std::string{}));
    }

    BuildOptions opts = options;
    opts.out_dir = fs::absolute(options.out_dir).lexically_normal();
    const fs::path manifest_path =
        options.manifest_path.empty() ? opts.out_dir / "manifest.json" : fs::absolute(options.manifest_path);

    {
        const fs::path probe = opts.out_dir / ".sketchtint-write-probe";
        std::ofstream out(probe);
        if (!out) throw IoError("output directory is not writable: " + opts.out_dir.string());
        out.close();
        fs::remove(probe, ec);
    }

    RenderSettings effective = settings;
    effective.outline.threads = 1;

    std::vector<DatasetEntry> work;
    work.reserve(entries.size());
    for (const auto& e : entries) {
        work.push_back(make_entry(fs::absolute(e.image_path).lexically_normal(),
                                  fs::absolute(e.sketch_path).lexically_normal(), e.width, e.version));
    }

    Manifest manifest;
    manifest.config = effective;
    manifest.entries.resize(work.size());
    PhotoCache cache(work);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
            try {
                manifest.entries[i] = render_entry(work[i], effective, opts, cache);
            } catch (const std::exception& e) {
                manifest.entries[i] = work[i];
                manifest.entries[i].error = e.what();
            }
            cache.release(work[i].image_path);
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.jobs, 1)), 1,
                                                        entries.size());
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    write_manifest(manifest, manifest_path);
    return manifest;
}

}  // namespace sketchtint
