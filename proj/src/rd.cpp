#include "vvar/rd.hpp"
#include "vvar/code.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

namespace vvar {

double psnr(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("psnr: dimension mismatch");
    uint64_t sum = 0;
    for (size_t i = 0; i < a.pixels.size(); ++i) {
        int d = int(a.pixels[i]) - int(b.pixels[i]);
        sum += uint64_t(d) * d;
    }
    if (sum == 0) return std::numeric_limits<double>::infinity();
    double mse = double(sum) / double(a.pixels.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

VTuple Preset::tuple() const {
    std::array<int64_t, 9> values{4, 16, 64, middle[0], middle[1],
                                  middle[2], middle[3], middle[4], 256};
    return VTuple::from_values(values);
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = {
        {"500", {16, 16, 16, 16, 64}, 480},
        {"1000", {256, 32, 16, 16, 64}, 992},
        {"1500", {256, 64, 64, 32, 64}, 1472},
        {"2000", {128, 512, 32, 32, 64}, 1936},
        {"2500", {256, 256, 32, 128, 64}, 2304},
        {"3000", {256, 256, 64, 128, 128}, 2976},
        {"3500", {256, 256, 1024, 16, 64}, 3328},
        {"4000", {256, 1024, 64, 128, 64}, 3936},
        {"4500", {256, 256, 1024, 64, 64}, 4544},
        {"5000", {256, 1024, 128, 128, 128}, 4992},
        {"256", {256, 256, 256, 256, 256}, 5120},
    };
    return table;
}

const Preset* find_preset(const std::string& label) {
    for (const Preset& p : presets())
        if (p.label == label) return &p;
    return nullptr;
}

std::vector<VTuple> sweep_space(const SweepOptions& options) {
    std::vector<VTuple> space;
    const auto& choices = options.middle_choices;
    std::array<int64_t, 9> values{4, 16, 64, 0, 0, 0, 0, 0, 256};
    for (int64_t v4 : choices)
        for (int64_t v5 : choices)
            for (int64_t v6 : choices)
                for (int64_t v7 : choices)
                    for (int64_t v8 : choices) {
                        values[3] = v4;
                        values[4] = v5;
                        values[5] = v6;
                        values[6] = v7;
                        values[7] = v8;
                        std::optional<VTuple> v;
                        try {
                            v = VTuple::from_values(values);
                        } catch (const std::invalid_argument&) {
                            continue;   // combination violates a tuple bound
                        }
                        if (storage_upper_bound(*v) <= Rational(options.budget))
                            space.push_back(std::move(*v));
                    }
    return space;
}

std::vector<RDPoint> sweep(const GrayImage& image, const SweepOptions& options) {
    if (options.seeds.empty())
        throw std::invalid_argument("sweep: empty seed list");
    if (image_depth(image) != 9)
        throw std::invalid_argument("sweep: image must be 512x512 (use to_square first)");

    std::vector<VTuple> space = sweep_space(options);
    std::vector<RDPoint> points;
    points.reserve(space.size() * options.thresholds.size() * options.seeds.size());
    for (const VTuple& v : space)
        for (int threshold : options.thresholds)
            for (uint64_t seed : options.seeds) {
                RDPoint p;
                p.tuple = v;
                p.threshold = static_cast<uint8_t>(threshold);
                p.seed = seed;
                p.model_bytes = storage_upper_bound(v);
                points.push_back(std::move(p));
            }

    auto run_point = [&](RDPoint& p) {
        EncodeSettings s;
        s.tuple = p.tuple;
        s.threshold = p.threshold;
        s.seed = p.seed;
        s.max_iter = options.max_iter;
        VVarCode code = encode(image, s);
        p.file_bytes = serialize(code).size();
        p.psnr_db = psnr(image, decode(code));
    };

    size_t workers = options.threads == 0
                         ? std::max(1u, std::thread::hardware_concurrency())
                         : options.threads;
    workers = std::min(workers, std::max<size_t>(points.size(), 1));
    if (workers <= 1) {
        for (RDPoint& p : points) run_point(p);
    } else {
        std::atomic<size_t> cursor{0};
        std::vector<std::thread> pool;
        for (uint32_t t = 0; t < workers; ++t)
            pool.emplace_back([&]() {
                for (;;) {
                    size_t i = cursor.fetch_add(1);
                    if (i >= points.size()) return;
                    run_point(points[i]);
                }
            });
        for (auto& th : pool) th.join();
    }
    return points;
}

std::vector<RDPoint> frontier(std::span<const RDPoint> points) {
    if (points.empty())
        throw std::invalid_argument("frontier: empty point list");
    std::vector<size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (points[a].model_bytes != points[b].model_bytes)
            return points[a].model_bytes < points[b].model_bytes;
        return points[a].psnr_db > points[b].psnr_db;
    });

    std::vector<RDPoint> out;
    double best_psnr = -1.0;
    Rational best_bytes(-1);
    for (size_t i : order) {
        const RDPoint& p = points[i];
        bool first = out.empty();
        if (first || p.psnr_db > best_psnr) {
            best_psnr = p.psnr_db;
            best_bytes = p.model_bytes;
            out.push_back(p);
        } else if (p.psnr_db == best_psnr && p.model_bytes == best_bytes) {
            out.push_back(p);   // exact duplicates dominate nothing
        }
    }
    return out;
}

std::string to_csv(std::span<const RDPoint> points) {
    std::string csv = "tuple,threshold,seed,model_bytes,file_bytes,psnr\n";
    for (const RDPoint& p : points) {
        for (int k = 1; k <= p.tuple.depth(); ++k) {
            csv += std::to_string(p.tuple.exponent(k));
            csv += k < p.tuple.depth() ? '-' : ',';
        }
        csv += std::to_string(int(p.threshold)) + ',';
        csv += std::to_string(p.seed) + ',';
        csv += p.model_bytes.to_string() + ',';
        csv += std::to_string(p.file_bytes) + ',';
        if (std::isinf(p.psnr_db)) {
            csv += "inf";
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", p.psnr_db);
            csv += buf;
        }
        csv += '\n';
    }
    return csv;
}

} // namespace vvar
