#include <doctest.h>

#include <fstream>
#include <iterator>
#include <map>
#include <set>

#include "sketchtint/dataset.hpp"
#include "sketchtint/image_io.hpp"
#include "support/fixtures.hpp"

using namespace sketchtint;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Every regular file under `dir`, keyed by relative path, with its bytes.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
    }
    return files;
}

RenderSettings fast_settings() {
    RenderSettings s;
    s.outline.search.k_max = 30;
    return s;
}

}  // namespace

TEST_SUITE("scan_dataset") {
    TEST_CASE("one photo with all 15 variants") {
        const auto root = fixtures::temp_dir("scan15");
        fixtures::write_tree(root, {.photos = 1});
        const auto scan = scan_dataset(root);
        REQUIRE(scan.entries.size() == 15);
        CHECK(scan.warnings.empty());
        std::set<std::pair<int, int>> variants;
        for (const auto& e : scan.entries) {
            variants.insert({e.width, e.version});
            CHECK(e.image_path.filename() == "100.jpg");
            CHECK_FALSE(e.complete());
        }
        CHECK(variants.size() == 15);
        CHECK(std::is_sorted(scan.entries.begin(), scan.entries.end(), [](const auto& a, const auto& b) {
            return std::tie(a.image_path, a.sketch_path) < std::tie(b.image_path, b.sketch_path);
        }));
        fs::remove_all(root);
    }

    TEST_CASE("missing version 3 leaves 12 entries and one warning") {
        const auto root = fixtures::temp_dir("scan12");
        fixtures::write_tree(root, {.photos = 1, .missing_versions = {{0, 3}}});
        const auto scan = scan_dataset(root);
        CHECK(scan.entries.size() == 12);
        REQUIRE(scan.warnings.size() == 1);
        CHECK(scan.warnings[0].path.filename() == "100.jpg");
        for (const auto& e : scan.entries) CHECK(e.version != 3);
        fs::remove_all(root);
    }

    TEST_CASE("orphans and strays are reported, not fatal") {
        const auto root = fixtures::temp_dir("scanstray");
        fixtures::write_tree(root, {.photos = 1});
        write_png(root / "sketch" / "999_w1_v1.png", make_uniform(4, 4, {0, 0, 0}));
        std::ofstream(root / "notes.txt") << "hello";
        const auto scan = scan_dataset(root);
        CHECK(scan.entries.size() == 15);
        CHECK(scan.warnings.size() == 2);
        fs::remove_all(root);
    }

    TEST_CASE("empty directory") {
        const auto root = fixtures::temp_dir("scanempty");
        CHECK_THROWS_AS(scan_dataset(root), EmptyDatasetError);
        fs::remove_all(root);
    }

    TEST_CASE("missing root") {
        CHECK_THROWS_AS(scan_dataset(fs::temp_directory_path() / "sketchtint_no_such_dir_x"), IoError);
    }

    TEST_CASE("custom templates") {
        const auto root = fixtures::temp_dir("scantmpl");
        fs::create_directories(root / "photos");
        write_jpeg(root / "photos" / "a7.jpg", fixtures::synthetic_photo(20, 20, 1));
        write_png(root / "a7-5-2.png", fixtures::synthetic_sketch(20, 20, 5, 1));
        const auto scan = scan_dataset(root, {"photos/{id}.jpg", "{id}-{width}-{version}.png"});
        REQUIRE(scan.entries.size() == 1);
        CHECK(scan.entries[0].width == 5);
        CHECK(scan.entries[0].version == 2);
        CHECK_THROWS_AS(scan_dataset(root, {"photos/{name}.jpg", "{id}.png"}), InvalidArgument);
        fs::remove_all(root);
    }
}

TEST_SUITE("build_all") {
    TEST_CASE("one entry writes two PNGs and a complete manifest") {
        const auto root = fixtures::temp_dir("build1");
        fixtures::write_tree(root, {.photos = 1});
        auto entries = scan_dataset(root).entries;
        entries.resize(1);
        const auto out = root / "out";
        const auto m = build_all(entries, fast_settings(), {.out_dir = out, .dataset_root = root});
        REQUIRE(m.entries.size() == 1);
        const auto& e = m.entries[0];
        CHECK(e.complete());
        REQUIRE(e.colored_outline);
        REQUIRE(e.colored_sketch);
        CHECK(fs::is_regular_file(*e.colored_outline));
        CHECK(fs::is_regular_file(*e.colored_sketch));
        CHECK(*e.k_used >= 5);
        CHECK(*e.inertia >= 0.0);
        CHECK((*e.k_used - 5) % 5 == 0);
        CHECK(fs::is_regular_file(out / "manifest.json"));
        CHECK(read_manifest(out / "manifest.json") == m);
        std::size_t pngs = 0;
        for (const auto& f : fs::recursive_directory_iterator(out)) pngs += f.path().extension() == ".png";
        CHECK(pngs == 2);
        fs::remove_all(root);
    }

    TEST_CASE("rerun and worker count leave bytes unchanged") {
        const auto root = fixtures::temp_dir("builddet");
        fixtures::write_tree(root, {.photos = 1});
        const auto entries = scan_dataset(root).entries;
        REQUIRE(entries.size() == 15);
        const auto settings = fast_settings();
        build_all(entries, settings, {.out_dir = root / "a", .dataset_root = root, .jobs = 1});
        build_all(entries, settings, {.out_dir = root / "b", .dataset_root = root, .jobs = 4});
        const auto a = snapshot(root / "a");
        CHECK(a.size() == 31);
        CHECK(a == snapshot(root / "b"));
        build_all(entries, settings, {.out_dir = root / "a", .dataset_root = root, .jobs = 3});
        CHECK(a == snapshot(root / "a"));
        fs::remove_all(root);
    }

    TEST_CASE("a broken photo fails only its own entries") {
        const auto root = fixtures::temp_dir("buildbad");
        fixtures::write_tree(root, {.photos = 2});
        std::ofstream(root / "image" / "101.jpg", std::ios::trunc) << "not a jpeg";
        const auto entries = scan_dataset(root).entries;
        REQUIRE(entries.size() == 30);
        const auto m = build_all(entries, fast_settings(), {.out_dir = root / "out", .dataset_root = root, .jobs = 4});
        std::size_t ok = 0, failed = 0;
        for (const auto& e : m.entries) {
            if (e.image_path.filename() == "101.jpg") {
                CHECK(e.error.has_value());
                CHECK_FALSE(e.colored_outline.has_value());
                CHECK_FALSE(e.k_used.has_value());
                ++failed;
            } else {
                CHECK(e.complete());
                ++ok;
            }
        }
        CHECK(ok == 15);
        CHECK(failed == 15);
        fs::remove_all(root);
    }

    TEST_CASE("unwritable output directory") {
        const auto root = fixtures::temp_dir("buildro");
        fixtures::write_tree(root, {.photos = 1});
        const auto entries = scan_dataset(root).entries;
        std::ofstream(root / "blocker") << "a file, not a directory";
        CHECK_THROWS_AS(build_all(entries, fast_settings(), {.out_dir = root / "blocker" / "out"}), IoError);
        fs::remove_all(root);
    }
}

TEST_SUITE("manifest") {
    TEST_CASE("serialize then parse is the identity") {
        Manifest m;
        m.config.outline.search.tau = 55.5;
        m.config.saturation = 1.25;
        const fs::path base = fs::temp_directory_path() / "mf";
        DatasetEntry done;
        done.image_path = base / "image" / "1.jpg";
        done.sketch_path = base / "sketch" / "1_w3_v2.png";
        done.width = 3;
        done.version = 2;
        done.colored_outline = base / "out" / "colored_outline" / "1_w3_v2.png";
        done.colored_sketch = base / "out" / "colored_sketch" / "1_w3_v2.png";
        done.k_used = 35;
        done.inertia = 61.015625;
        done.saturated_k = false;
        DatasetEntry failed;
        failed.image_path = base / "image" / "2.jpg";
        failed.sketch_path = base / "sketch" / "2_w1_v1.png";
        failed.error = "decode failed";
        m.entries = {done, failed};

        const auto text = serialize_manifest(m, base / "out");
        CHECK(parse_manifest(text, base / "out") == m);
        CHECK(text.find("\"../image/1.jpg\"") != std::string::npos);
        CHECK(text.find("\"colored_outline/1_w3_v2.png\"") != std::string::npos);
    }

    TEST_CASE("keys and order") {
        Manifest m;
        DatasetEntry e;
        e.image_path = "/x/a.jpg";
        e.sketch_path = "/x/a_w1_v1.png";
        m.entries = {e};
        const auto text = serialize_manifest(m, "/x");
        const std::vector<std::string> keys = {"schema_version", "config", "entries", "image_path", "sketch_path",
                                               "width", "version", "colored_outline", "colored_sketch", "k_used",
                                               "inertia", "saturated_k", "error"};
        std::size_t pos = 0;
        for (const auto& k : keys) {
            const auto at = text.find("\"" + k + "\"", pos);
            CHECK_MESSAGE(at != std::string::npos, k);
            pos = at == std::string::npos ? pos : at;
        }
        CHECK(text.find("\"schema_version\": \"1.0\"") != std::string::npos);
        CHECK(text.find("\"tau\": 70") != std::string::npos);
        CHECK(text.find("\"saturation\": 1.8") != std::string::npos);
    }

    TEST_CASE("malformed input") {
        CHECK_THROWS_AS(parse_manifest("{", "/"), InvalidArgument);
        CHECK_THROWS_AS(parse_manifest("{\"schema_version\": \"1.0\"}", "/"), InvalidArgument);
    }
}
