#include "sketchtint/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

namespace sketchtint {

namespace {

// Fixed partition of the point set. Partial sums are reduced chunk by chunk in
// index order, so the floating-point result never depends on the worker count.
constexpr std::size_t kChunk = 4096;

struct WeightedPoints {
    std::vector<Centroid> pos;
    std::vector<double> weight;
    double total_weight = 0.0;
};

std::uint32_t pack(Rgb p) {
    return (std::uint32_t{p[0]} << 16) | (std::uint32_t{p[1]} << 8) | p[2];
}

Centroid unpack(std::uint32_t v) {
    return {static_cast<double>((v >> 16) & 0xFF), static_cast<double>((v >> 8) & 0xFF),
            static_cast<double>(v & 0xFF)};
}

/// Collapses duplicate colors into weighted points, sorted by packed color.
WeightedPoints collapse(std::vector<std::uint32_t> packed) {
    std::sort(packed.begin(), packed.end());
    WeightedPoints pts;
    for (std::size_t i = 0; i < packed.size();) {
        std::size_t j = i;
        while (j < packed.size() && packed[j] == packed[i]) ++j;
        pts.pos.push_back(unpack(packed[i]));
        pts.weight.push_back(static_cast<double>(j - i));
        i = j;
    }
    pts.total_weight = static_cast<double>(packed.size());
    return pts;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double dist2(const Centroid& a, const Centroid& b) {
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

/// Index drawn with probability proportional to `mass`; -1 when all mass is zero.
std::ptrdiff_t weighted_draw(const std::vector<double>& mass, std::mt19937_64& rng) {
    double total = 0.0;
    for (double m : mass) total += m;
    if (!(total > 0.0)) return -1;
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    std::ptrdiff_t last_positive = -1;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        if (mass[i] <= 0.0) continue;
        last_positive = static_cast<std::ptrdiff_t>(i);
        acc += mass[i];
        if (acc > target) return last_positive;
    }
    return last_positive;
}

std::vector<Centroid> kmeans_plus_plus(const WeightedPoints& pts, int k, std::mt19937_64& rng) {
    std::vector<Centroid> centers;
    centers.reserve(static_cast<std::size_t>(k));
    centers.push_back(pts.pos[static_cast<std::size_t>(weighted_draw(pts.weight, rng))]);

    std::vector<double> nearest(pts.pos.size());
    for (std::size_t i = 0; i < pts.pos.size(); ++i) nearest[i] = dist2(pts.pos[i], centers[0]);

    std::vector<double> mass(pts.pos.size());
    while (static_cast<int>(centers.size()) < k) {
        for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = pts.weight[i] * nearest[i];
        const auto pick = weighted_draw(mass, rng);
        // Every distinct color is already a center; duplicates become empty
        // clusters that the repair step leaves in place.
        centers.push_back(pick < 0 ? centers.front() : pts.pos[static_cast<std::size_t>(pick)]);
        const Centroid& c = centers.back();
        for (std::size_t i = 0; i < nearest.size(); ++i) nearest[i] = std::min(nearest[i], dist2(pts.pos[i], c));
    }
    return centers;
}

struct ChunkSums {
    std::vector<Centroid> sum;
    std::vector<double> weight;
    double cost = 0.0;
};

struct Assignment {
    std::vector<std::uint32_t> label;
    std::vector<double> d2;
    std::vector<Centroid> sum;
    std::vector<double> weight;
    double inertia = 0.0;
};

void assign_range(const WeightedPoints& pts, const std::vector<Centroid>& centers, std::size_t begin,
                  std::size_t end, Assignment& out, ChunkSums& sums) {
    const std::size_t k = centers.size();
    sums.sum.assign(k, Centroid{0.0, 0.0, 0.0});
    sums.weight.assign(k, 0.0);
    sums.cost = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        const Centroid& p = pts.pos[i];
        std::size_t best = 0;
        double best_d = dist2(p, centers[0]);
        for (std::size_t j = 1; j < k; ++j) {
            const double d = dist2(p, centers[j]);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        out.label[i] = static_cast<std::uint32_t>(best);
        out.d2[i] = best_d;
        const double w = pts.weight[i];
        for (int c = 0; c < 3; ++c) sums.sum[best][c] += w * p[c];
        sums.weight[best] += w;
        sums.cost += w * best_d;
    }
}

Assignment assign(const WeightedPoints& pts, const std::vector<Centroid>& centers, int threads) {
    const std::size_t n = pts.pos.size();
    const std::size_t k = centers.size();
    const std::size_t chunks = (n + kChunk - 1) / kChunk;

    Assignment out;
    out.label.resize(n);
    out.d2.resize(n);
    std::vector<ChunkSums> partial(chunks);

    auto run_chunk = [&](std::size_t c) {
        assign_range(pts, centers, c * kChunk, std::min(n, (c + 1) * kChunk), out, partial[c]);
    };
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
            });
        }
    }

    out.sum.assign(k, Centroid{0.0, 0.0, 0.0});
    out.weight.assign(k, 0.0);
    double cost = 0.0;
    for (const auto& part : partial) {
        for (std::size_t j = 0; j < k; ++j) {
            for (int c = 0; c < 3; ++c) out.sum[j][c] += part.sum[j][c];
            out.weight[j] += part.weight[j];
        }
        cost += part.cost;
    }
    out.inertia = cost / pts.total_weight;
    return out;
}

void update_centers(const WeightedPoints& pts, Assignment& asg, std::vector<Centroid>& centers) {
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (asg.weight[j] > 0.0) {
            for (int c = 0; c < 3; ++c) centers[j][c] = asg.sum[j][c] / asg.weight[j];
        }
    }
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (asg.weight[j] > 0.0) continue;
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < asg.d2.size(); ++i) {
            if (asg.d2[i] > far_d) {
                far_d = asg.d2[i];
                far = i;
            }
        }
        if (far_d <= 0.0) continue;
        centers[j] = pts.pos[far];
        asg.d2[far] = 0.0;
    }
}

struct Clusters {
    std::vector<std::uint32_t> label;
    std::vector<Centroid> mean;
    std::vector<double> weight;
};

/// Single-point transfers (Hartigan): moves a color group whenever that lowers
/// the total squared error once both affected means are updated. Returns the
/// number of moves made in one sweep over the points.
std::size_t hartigan_sweep(const WeightedPoints& pts, Clusters& cl) {
    std::size_t moves = 0;
    const std::size_t k = cl.mean.size();
    for (std::size_t i = 0; i < pts.pos.size(); ++i) {
        const std::size_t from = cl.label[i];
        const double w = pts.weight[i];
        const double wa = cl.weight[from];
        if (wa <= w) continue;  // sole member; moving it would empty the cluster
        const Centroid& x = pts.pos[i];
        const double removal = w * wa / (wa - w) * dist2(x, cl.mean[from]);
        std::size_t best = from;
        double best_cost = removal;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == from) continue;
            const double wb = cl.weight[j];
            const double cost = wb > 0.0 ? w * wb / (wb + w) * dist2(x, cl.mean[j]) : 0.0;
            if (cost < best_cost) {
                best_cost = cost;
                best = j;
            }
        }
        // Relative margin keeps rounding noise from cycling points between clusters.
        if (best == from || !(best_cost < removal * (1.0 - 1e-12))) continue;
        for (int c = 0; c < 3; ++c) {
            cl.mean[from][c] = (cl.mean[from][c] * wa - w * x[c]) / (wa - w);
            const double wb = cl.weight[best];
            cl.mean[best][c] = (cl.mean[best][c] * wb + w * x[c]) / (wb + w);
        }
        cl.weight[from] -= w;
        cl.weight[best] += w;
        cl.label[i] = static_cast<std::uint32_t>(best);
        ++moves;
    }
    return moves;
}

WeightedPoints fit_sample(const RgbImage& img, std::mt19937_64& rng) {
    const std::size_t n = img.pixel_count();
    std::vector<std::uint32_t> packed;
    if (n <= kMaxFitPixels) {
        packed.reserve(n);
        for (std::size_t i = 0; i < n; ++i) packed.push_back(pack(img.pixel(i)));
    } else {
        packed.reserve(kMaxFitPixels);
        for (std::size_t i = 0; i < kMaxFitPixels; ++i) {
            packed.push_back(pack(img.pixel(static_cast<std::size_t>(rng() % n))));
        }
    }
    return collapse(std::move(packed));
}

}  // namespace

std::vector<Rgb> QuantizationResult::palette_rgb() const {
    std::vector<Rgb> out;
    out.reserve(palette.size());
    for (const auto& c : palette) {
        Rgb p{};
        for (int i = 0; i < 3; ++i) p[i] = static_cast<std::uint8_t>(std::clamp(std::lround(c[i]), 0L, 255L));
        out.push_back(p);
    }
    return out;
}

void KSearchConfig::validate() const {
    if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
    if (k_start < 1) throw InvalidArgument("k_start must be >= 1");
    if (stride < 1) throw InvalidArgument("stride must be >= 1");
    if (k_max < k_start) throw InvalidArgument("k_max must be >= k_start");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (!(tol >= 0.0)) throw InvalidArgument("tol must be >= 0");
    if (restarts < 1) throw InvalidArgument("restarts must be >= 1");
}

std::vector<int> KSearchConfig::schedule() const {
    std::vector<int> ks;
    for (int k = k_start; k <= k_max; k += stride) ks.push_back(k);
    return ks;
}

namespace {

struct Fit {
    std::vector<Centroid> centers;
    std::vector<double> trace;
};

// One seeding followed by Lloyd iterations and Hartigan refinement.
Fit fit_once(const WeightedPoints& fit, int k, const KMeansOptions& opts, std::mt19937_64& rng) {
    Fit out;
    out.centers = kmeans_plus_plus(fit, k, rng);

    Assignment asg = assign(fit, out.centers, opts.threads);
    out.trace.push_back(asg.inertia);
    for (int it = 0; it < opts.max_iters; ++it) {
        const double previous = asg.inertia;
        update_centers(fit, asg, out.centers);
        asg = assign(fit, out.centers, opts.threads);
        out.trace.push_back(asg.inertia);
        if (previous <= 0.0 || previous - asg.inertia <= opts.tol * previous) break;
    }
    if (asg.inertia <= 0.0) return out;

    Clusters cl{asg.label, out.centers, asg.weight};
    for (std::size_t j = 0; j < cl.mean.size(); ++j) {
        if (cl.weight[j] > 0.0) {
            for (int c = 0; c < 3; ++c) cl.mean[j][c] = asg.sum[j][c] / cl.weight[j];
        }
    }
    bool moved = false;
    for (int sweep = 0; sweep < opts.max_iters && hartigan_sweep(fit, cl) > 0; ++sweep) moved = true;
    if (!moved) return out;

    // Exact means from the final partition, then one assignment step.
    std::vector<Centroid> sum(cl.mean.size(), Centroid{0.0, 0.0, 0.0});
    std::vector<double> weight(cl.mean.size(), 0.0);
    for (std::size_t i = 0; i < fit.pos.size(); ++i) {
        for (int c = 0; c < 3; ++c) sum[cl.label[i]][c] += fit.weight[i] * fit.pos[i][c];
        weight[cl.label[i]] += fit.weight[i];
    }
    for (std::size_t j = 0; j < cl.mean.size(); ++j) {
        if (weight[j] > 0.0) {
            for (int c = 0; c < 3; ++c) out.centers[j][c] = sum[j][c] / weight[j];
        }
    }
    asg = assign(fit, out.centers, opts.threads);
    out.trace.push_back(asg.inertia);
    return out;
}

}  // namespace

QuantizationResult kmeans(const RgbImage& img, int k, const KMeansOptions& opts) {
    if (k < 1) throw InvalidArgument("k must be >= 1, got " + std::to_string(k));
    if (opts.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (opts.restarts < 1) throw InvalidArgument("restarts must be >= 1");

    std::mt19937_64 rng(opts.seed);
    const WeightedPoints fit = fit_sample(img, rng);

    Fit best;
    for (int r = 0; r < opts.restarts; ++r) {
        Fit candidate = fit_once(fit, k, opts, rng);
        if (r == 0 || candidate.trace.back() < best.trace.back()) best = std::move(candidate);
        if (best.trace.back() <= 0.0) break;
    }
    std::vector<Centroid> centers = std::move(best.centers);

    QuantizationResult result;
    result.k = k;
    result.inertia_trace = std::move(best.trace);

    // Label every pixel against the final centers.
    std::vector<std::uint32_t> packed(img.pixel_count());
    for (std::size_t i = 0; i < packed.size(); ++i) packed[i] = pack(img.pixel(i));
    const WeightedPoints all = collapse(packed);
    std::vector<std::uint32_t> keys;
    keys.reserve(all.pos.size());
    for (const auto& p : all.pos) {
        keys.push_back(pack({static_cast<std::uint8_t>(p[0]), static_cast<std::uint8_t>(p[1]),
                             static_cast<std::uint8_t>(p[2])}));
    }
    const Assignment final_asg = assign(all, centers, opts.threads);

    result.labels.resize(packed.size());
    for (std::size_t i = 0; i < packed.size(); ++i) {
        const auto slot = std::lower_bound(keys.begin(), keys.end(), packed[i]) - keys.begin();
        result.labels[i] = final_asg.label[static_cast<std::size_t>(slot)];
    }
    result.inertia = final_asg.inertia;
    result.palette = std::move(centers);
    return result;
}

QuantizationResult select_k(const RgbImage& img, const KSearchConfig& cfg, int threads) {
    cfg.validate();
    std::vector<std::pair<int, double>> trace;
    QuantizationResult last;
    for (int k : cfg.schedule()) {
        last = kmeans(img, k, cfg.kmeans_options(threads));
        trace.emplace_back(k, last.inertia);
        if (last.inertia <= cfg.tau) {
            last.search_trace = std::move(trace);
            return last;
        }
    }
    last.saturated = true;
    last.search_trace = std::move(trace);
    return last;
}

RgbImage apply_palette(const RgbImage& img, const QuantizationResult& result) {
    if (result.labels.size() != img.pixel_count()) {
        throw InvalidArgument("quantization labels (" + std::to_string(result.labels.size()) +
                              ") do not match image pixel count (" + std::to_string(img.pixel_count()) + ")");
    }
    const auto colors = result.palette_rgb();
    RgbImage out(img.width(), img.height());
    for (std::size_t i = 0; i < result.labels.size(); ++i) {
        const auto label = result.labels[i];
        if (label >= colors.size()) throw InvalidArgument("quantization label out of range");
        out.set_pixel(i, colors[label]);
    }
    return out;
}

}  // namespace sketchtint
