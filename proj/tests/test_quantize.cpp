#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sketchtint/quantize.hpp"
#include "support/oracles.hpp"
#include "support/search_fixture.hpp"

using namespace sketchtint;

namespace {

RgbImage from_pixels(const std::vector<Rgb>& px) {
    RgbImage img(static_cast<int>(px.size()), 1);
    for (std::size_t i = 0; i < px.size(); ++i) img.set_pixel(i, px[i]);
    return img;
}

RgbImage random_image(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    RgbImage img(w, h);
    for (auto& s : img.samples()) s = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

double direct_inertia(const RgbImage& img, const QuantizationResult& q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const auto& c = q.palette[q.labels[i]];
        for (int ch = 0; ch < 3; ++ch) acc += (img.pixel(i)[ch] - c[ch]) * (img.pixel(i)[ch] - c[ch]);
    }
    return acc / static_cast<double>(img.pixel_count());
}

}  // namespace

TEST_SUITE("kmeans") {
    TEST_CASE("k below one is rejected") {
        CHECK_THROWS_AS(kmeans(make_uniform(4, 4, {1, 2, 3}), 0), InvalidArgument);
        CHECK_THROWS_AS(kmeans(make_uniform(4, 4, {1, 2, 3}), -3), InvalidArgument);
    }

    TEST_CASE("uniform image, k=1") {
        const auto q = kmeans(make_uniform(7, 5, {12, 200, 99}), 1);
        REQUIRE(q.k == 1);
        REQUIRE(q.palette.size() == 1);
        CHECK(q.palette[0] == Centroid{12, 200, 99});
        CHECK(q.inertia == 0.0);
    }

    TEST_CASE("black and white halves, k=2") {
        RgbImage img(8, 4);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 8; ++x) img.set_pixel(x, y, x < 4 ? Rgb{0, 0, 0} : Rgb{255, 255, 255});
        const auto q = kmeans(img, 2);
        std::set<Centroid> got(q.palette.begin(), q.palette.end());
        CHECK(got == std::set<Centroid>{{0, 0, 0}, {255, 255, 255}});
        CHECK(q.inertia == 0.0);
    }

    TEST_CASE("six pixels, k=2, against exhaustive partitions") {
        for (std::uint32_t seed = 0; seed < 20; ++seed) {
            std::mt19937 rng(seed);
            std::vector<Rgb> px(6);
            for (auto& p : px)
                for (auto& c : p) c = static_cast<std::uint8_t>(rng() & 0xFF);
            const double best = oracle::exhaustive_inertia(px, 2);
            const auto q = kmeans(from_pixels(px), 2);
            CAPTURE(seed);
            CHECK(q.inertia >= best - 1e-9);
            CHECK(q.inertia == doctest::Approx(best).epsilon(1e-9));
        }
    }

    TEST_CASE("separable two-cluster fixtures are solved exactly") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<Rgb> px;
            const int n = 4 + trial % 7;
            for (int i = 0; i < n; ++i) {
                const int base = i % 2 ? 200 : 20;
                px.push_back({static_cast<std::uint8_t>(base + rng() % 30), static_cast<std::uint8_t>(base + rng() % 30),
                              static_cast<std::uint8_t>(base + rng() % 30)});
            }
            const auto q = kmeans(from_pixels(px), 2);
            CHECK(q.inertia == doctest::Approx(oracle::exhaustive_inertia(px, 2)).epsilon(1e-12));
        }
    }

    TEST_CASE("result invariants") {
        const auto img = random_image(23, 17, 5);
        for (int k : {1, 3, 8, 20}) {
            const auto q = kmeans(img, k);
            REQUIRE(q.k == k);
            REQUIRE(q.palette.size() == static_cast<std::size_t>(k));
            REQUIRE(q.labels.size() == img.pixel_count());
            for (auto l : q.labels) CHECK(l < static_cast<std::uint32_t>(k));
            for (const auto& c : q.palette)
                for (double v : c) CHECK((v >= 0.0 && v <= 255.0));
            CHECK(q.inertia >= 0.0);
            CHECK(q.inertia == doctest::Approx(direct_inertia(img, q)).epsilon(1e-9));
            CHECK_FALSE(q.saturated);
        }
    }

    TEST_CASE("k at or above the distinct color count gives zero inertia") {
        const std::vector<Rgb> px = {{1, 2, 3}, {1, 2, 3}, {90, 9, 9}, {250, 250, 0}, {250, 250, 0}, {0, 0, 255}};
        for (int k : {4, 5, 9}) {
            const auto q = kmeans(from_pixels(px), k);
            CHECK(q.inertia == 0.0);
            CHECK(q.palette.size() == static_cast<std::size_t>(k));
        }
    }

    TEST_CASE("assignment steps never raise inertia") {
        for (std::uint32_t seed = 0; seed < 5; ++seed) {
            const auto q = kmeans(random_image(40, 30, seed), 6, {.seed = seed, .restarts = 1});
            REQUIRE_FALSE(q.inertia_trace.empty());
            for (std::size_t i = 1; i < q.inertia_trace.size(); ++i) CHECK(q.inertia_trace[i] <= q.inertia_trace[i - 1]);
        }
    }

    TEST_CASE("same seed, any thread count, identical result") {
        // More distinct colors than one reduction chunk, so threading has work to split.
        const auto img = random_image(96, 80, 11);
        const auto a = kmeans(img, 7, {.seed = 3, .threads = 1});
        for (int t : {2, 3, 8}) {
            const auto b = kmeans(img, 7, {.seed = 3, .threads = t});
            CHECK(a.palette == b.palette);
            CHECK(a.labels == b.labels);
            CHECK(a.inertia == b.inertia);
            CHECK(a.inertia_trace == b.inertia_trace);
        }
        CHECK(kmeans(img, 7, {.seed = 3}).palette == a.palette);
    }
}

TEST_SUITE("select_k") {
    TEST_CASE("uniform image stops at the first scheduled k") {
        const auto q = select_k(make_uniform(16, 16, {40, 80, 120}), {});
        CHECK(q.k == 5);
        CHECK(q.inertia == 0.0);
        CHECK_FALSE(q.saturated);
        REQUIRE(q.search_trace.size() == 1);
    }

    TEST_CASE("grouped fixture: optimal inertia straddles tau between k=5 and k=10") {
        const auto fx = search_fixture::image();
        const double opt5 = search_fixture::optimal_inertia(5);
        const double opt10 = search_fixture::optimal_inertia(10);
        CHECK(opt5 == doctest::Approx(80.0).epsilon(1e-12));
        CHECK(opt10 == doctest::Approx(44.625).epsilon(1e-12));

        KSearchConfig cfg;
        cfg.restarts = 10;
        const auto q = select_k(fx, cfg);
        CHECK(q.k == 10);
        REQUIRE(q.search_trace.size() == 2);
        CHECK(q.search_trace[0].second == doctest::Approx(opt5).epsilon(1e-9));
        // k-means is a heuristic: it can only match or exceed the optimum.
        CHECK(q.inertia >= opt10 - 1e-9);
        CHECK(q.inertia <= cfg.tau);
    }

    TEST_CASE("selected k is the smallest scheduled k under tau") {
        const auto img = random_image(32, 24, 2);
        KSearchConfig cfg;
        cfg.tau = 900;
        cfg.k_max = 60;
        const auto q = select_k(img, cfg);
        REQUIRE_FALSE(q.saturated);
        CHECK(q.inertia <= cfg.tau);
        CHECK((q.k - cfg.k_start) % cfg.stride == 0);
        for (int k = cfg.k_start; k < q.k; k += cfg.stride) {
            CHECK(kmeans(img, k, cfg.kmeans_options()).inertia > cfg.tau);
        }
        // No re-fit: the returned result is the fit made at the selected k.
        const auto again = kmeans(img, q.k, cfg.kmeans_options());
        CHECK(again.inertia == q.inertia);
        CHECK(again.labels == q.labels);
    }

    TEST_CASE("saturation is flagged when no k reaches tau") {
        KSearchConfig cfg;
        cfg.tau = 1e-6;
        cfg.k_max = 17;
        const auto q = select_k(random_image(20, 20, 4), cfg);
        CHECK(q.saturated);
        CHECK(q.k == 15);
        CHECK(q.search_trace.size() == 3);
    }

    TEST_CASE("configuration is validated") {
        const auto img = make_uniform(4, 4, {0, 0, 0});
        KSearchConfig bad;
        bad.tau = 0;
        CHECK_THROWS_AS(select_k(img, bad), InvalidArgument);
        bad = {};
        bad.stride = 0;
        CHECK_THROWS_AS(select_k(img, bad), InvalidArgument);
        bad = {};
        bad.k_max = 4;
        CHECK_THROWS_AS(select_k(img, bad), InvalidArgument);
        bad = {};
        bad.k_start = 0;
        CHECK_THROWS_AS(select_k(img, bad), InvalidArgument);
    }

    TEST_CASE("schedule") {
        CHECK(KSearchConfig{}.schedule().front() == 5);
        CHECK(KSearchConfig{}.schedule().back() == 105);
        CHECK(KSearchConfig{}.schedule().size() == 21);
    }
}

TEST_SUITE("apply_palette") {
    TEST_CASE("output uses at most k colors") {
        const auto img = random_image(30, 20, 9);
        for (int k : {1, 4, 12}) {
            CHECK(distinct_colors(apply_palette(img, kmeans(img, k))) <= static_cast<std::size_t>(k));
        }
    }

    TEST_CASE("two-color image is a fixed point") {
        RgbImage img(5, 3);
        for (std::size_t i = 0; i < img.pixel_count(); ++i) img.set_pixel(i, i % 3 ? Rgb{9, 80, 30} : Rgb{200, 1, 77});
        CHECK(apply_palette(img, kmeans(img, 2)) == img);
    }

    TEST_CASE("random 16 pixels, k=3, against a per-pixel lookup") {
        const auto img = random_image(4, 4, 21);
        const auto q = kmeans(img, 3);
        const auto out = apply_palette(img, q);
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            // Nearest centroid by brute force, rounded half away from zero.
            std::size_t best = 0;
            double best_d = INFINITY;
            for (std::size_t c = 0; c < q.palette.size(); ++c) {
                double d = 0;
                for (int ch = 0; ch < 3; ++ch) d += std::pow(img.pixel(i)[ch] - q.palette[c][ch], 2);
                if (d < best_d) best_d = d, best = c;
            }
            CHECK(q.labels[i] == best);
            for (int ch = 0; ch < 3; ++ch) CHECK(out.pixel(i)[ch] == std::lround(q.palette[best][ch]));
        }
    }

    TEST_CASE("label count mismatch is rejected") {
        const auto q = kmeans(random_image(4, 4, 1), 2);
        CHECK_THROWS_AS(apply_palette(random_image(5, 4, 1), q), InvalidArgument);
    }
}
