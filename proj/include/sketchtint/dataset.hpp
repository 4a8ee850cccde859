#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sketchtint/colorwash.hpp"
#include "sketchtint/image.hpp"
#include "sketchtint/outline.hpp"

namespace sketchtint {

namespace fs = std::filesystem;

inline constexpr std::array<int, 3> kStrokeWidths = {1, 3, 5};
inline constexpr int kSketchVersions = 5;
inline constexpr std::string_view kManifestSchemaVersion = "1.0";

class EmptyDatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filename templates relative to the dataset root. Placeholders: {id}, {width}, {version}.
struct NamingLayout {
    std::string image_template = "image/{id}.jpg";
    std::string sketch_template = "sketch/{id}_w{width}_v{version}.png";
};

/// One photo paired with one sketch variant, plus rendering outcomes.
struct DatasetEntry {
    fs::path image_path;
    fs::path sketch_path;
    int width = 1;
    int version = 1;
    std::optional<fs::path> colored_outline;
    std::optional<fs::path> colored_sketch;
    std::optional<int> k_used;
    std::optional<double> inertia;
    std::optional<bool> saturated_k;
    std::optional<std::string> error;

    bool complete() const noexcept { return colored_outline && colored_sketch && !error; }
    friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

struct ScanWarning {
    fs::path path;
    std::string message;
};

struct ScanResult {
    std::vector<DatasetEntry> entries;
    std::vector<ScanWarning> warnings;
};

/// Pairs every photo with each of its width x version sketch variants.
/// Missing variants and orphan sketches are reported as warnings. Entries are
/// sorted by (image path, sketch path). Throws IoError if `root` is not a
/// directory and EmptyDatasetError if no pair is found.
ScanResult scan_dataset(const fs::path& root, const NamingLayout& layout = {});

/// Every parameter that influences rendered bytes.
struct RenderSettings {
    OutlineConfig outline;
    double saturation = kDefaultSaturationFactor;

    void validate() const;
    friend bool operator==(const RenderSettings&, const RenderSettings&) = default;
};

struct Manifest {
    std::string schema_version{kManifestSchemaVersion};
    RenderSettings config;
    std::vector<DatasetEntry> entries;

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct BuildOptions {
    fs::path out_dir;
    /// Defaults to out_dir / "manifest.json".
    fs::path manifest_path;
    /// Output trees mirror sketch paths relative to this root; file names only when empty.
    fs::path dataset_root;
    int jobs = 1;
};

/// Renders the colored outline and colored sketch of every entry with a pool of
/// `jobs` workers, then writes the manifest atomically. A failing entry records
/// its error and the batch continues. Output bytes never depend on `jobs`.
/// Throws IoError if the output directory cannot be created or written.
Manifest build_all(const std::vector<DatasetEntry>& entries, const RenderSettings& settings,
                   const BuildOptions& options);

/// Manifest as JSON text; paths are written relative to `base_dir`.
std::string serialize_manifest(const Manifest& manifest, const fs::path& base_dir);
/// Inverse of serialize_manifest; relative paths are resolved against `base_dir`.
/// Throws InvalidArgument on malformed input.
Manifest parse_manifest(std::string_view text, const fs::path& base_dir);

/// Writes via a temporary file and rename. Throws IoError.
void write_manifest(const Manifest& manifest, const fs::path& path);
Manifest read_manifest(const fs::path& path);

}  // namespace sketchtint
