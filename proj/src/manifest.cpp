#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sketchtint/dataset.hpp"

namespace sketchtint {

namespace {

using Json = nlohmann::ordered_json;

std::string relative_to(const fs::path& p, const fs::path& base) {
    const fs::path rel = fs::absolute(p).lexically_normal().lexically_relative(base);
    return (rel.empty() ? p : rel).generic_string();
}

fs::path resolve(const std::string& text, const fs::path& base) {
    const fs::path p(text);
    return (p.is_absolute() ? p : base / p).lexically_normal();
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json config_json(const RenderSettings& s) {
    const auto& k = s.outline.search;
    Json j;
    j["tau"] = k.tau;
    j["k_start"] = k.k_start;
    j["stride"] = k.stride;
    j["k_max"] = k.k_max;
    j["seed"] = k.seed;
    j["max_iters"] = k.max_iters;
    j["tol"] = k.tol;
    j["restarts"] = k.restarts;
    j["blur_kernel"] = s.outline.blur_kernel;
    j["blur_iters"] = s.outline.blur_iters;
    j["mask_threshold"] = s.outline.mask_threshold;
    j["saturation"] = s.saturation;
    return j;
}

RenderSettings config_from_json(const Json& j) {
    RenderSettings s;
    auto& k = s.outline.search;
    k.tau = j.at("tau").get<double>();
    k.k_start = j.at("k_start").get<int>();
    k.stride = j.at("stride").get<int>();
    k.k_max = j.at("k_max").get<int>();
    k.seed = j.at("seed").get<std::uint64_t>();
    k.max_iters = j.at("max_iters").get<int>();
    k.tol = j.at("tol").get<double>();
    k.restarts = j.at("restarts").get<int>();
    s.outline.blur_kernel = j.at("blur_kernel").get<int>();
    s.outline.blur_iters = j.at("blur_iters").get<int>();
    s.outline.mask_threshold = j.at("mask_threshold").get<int>();
    s.saturation = j.at("saturation").get<double>();
    return s;
}

template <typename T>
std::optional<T> optional_from(const Json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<T>();
}

}  // namespace

std::string serialize_manifest(const Manifest& manifest, const fs::path& base_dir) {
    const fs::path base = fs::absolute(base_dir).lexically_normal();
    Json root;
    root["schema_version"] = manifest.schema_version;
    root["config"] = config_json(manifest.config);
    Json entries = Json::array();
    for (const auto& e : manifest.entries) {
        Json j;
        j["image_path"] = relative_to(e.image_path, base);
        j["sketch_path"] = relative_to(e.sketch_path, base);
        j["width"] = e.width;
        j["version"] = e.version;
        j["colored_outline"] = e.colored_outline ? Json(relative_to(*e.colored_outline, base)) : Json(nullptr);
        j["colored_sketch"] = e.colored_sketch ? Json(relative_to(*e.colored_sketch, base)) : Json(nullptr);
        j["k_used"] = optional_json(e.k_used);
        j["inertia"] = optional_json(e.inertia);
        j["saturated_k"] = optional_json(e.saturated_k);
        j["error"] = optional_json(e.error);
        entries.push_back(std::move(j));
    }
    root["entries"] = std::move(entries);
    return root.dump(2) + "\n";
}

Manifest parse_manifest(std::string_view text, const fs::path& base_dir) {
    const fs::path base = fs::absolute(base_dir).lexically_normal();
    try {
        const Json root = Json::parse(text);
        Manifest m;
        m.schema_version = root.at("schema_version").get<std::string>();
        m.config = config_from_json(root.at("config"));
        for (const auto& j : root.at("entries")) {
            DatasetEntry e;
            e.image_path = resolve(j.at("image_path").get<std::string>(), base);
            e.sketch_path = resolve(j.at("sketch_path").get<std::string>(), base);
            e.width = j.at("width").get<int>();
            e.version = j.at("version").get<int>();
            if (auto p = optional_from<std::string>(j, "colored_outline")) e.colored_outline = resolve(*p, base);
            if (auto p = optional_from<std::string>(j, "colored_sketch")) e.colored_sketch = resolve(*p, base);
            e.k_used = optional_from<int>(j, "k_used");
            e.inertia = optional_from<double>(j, "inertia");
            e.saturated_k = optional_from<bool>(j, "saturated_k");
            e.error = optional_from<std::string>(j, "error");
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed manifest: ") + e.what());
    }
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
    const fs::path target = fs::absolute(path);
    const std::string text = serialize_manifest(manifest, target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write manifest: " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw IoError("failed writing manifest: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot move manifest into place at " + target.string() + ": " + ec.message());
}

Manifest read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read manifest: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), fs::absolute(path).parent_path());
}

}  // namespace sketchtint
