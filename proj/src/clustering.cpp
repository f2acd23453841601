#include "vvar/clustering.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

namespace vvar {

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t j = 0; j < a.size(); ++j) {
        double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

void check(const VectorSet& vs) {
    if (!vs.weights.empty() && vs.weights.size() != vs.vectors.size())
        throw std::invalid_argument("vector set: weight count mismatch");
    for (const auto& v : vs.vectors)
        if (v.size() != vs.dim)
            throw std::invalid_argument("vector set: dimension mismatch");
    for (double w : vs.weights)
        if (!(w > 0.0))
            throw std::invalid_argument("vector set: weights must be positive");
}

struct Deduped {
    std::vector<std::vector<double>> vectors;
    std::vector<double> weights;
    std::vector<size_t> origin;   // input index -> distinct index
};

Deduped dedupe_indexed(const VectorSet& vs) {
    Deduped out;
    std::map<std::vector<double>, size_t> seen;
    out.origin.resize(vs.size());
    for (size_t i = 0; i < vs.size(); ++i) {
        auto [it, inserted] = seen.try_emplace(vs.vectors[i], out.vectors.size());
        if (inserted) {
            out.vectors.push_back(vs.vectors[i]);
            out.weights.push_back(vs.weight(i));
        } else {
            out.weights[it->second] += vs.weight(i);
        }
        out.origin[i] = it->second;
    }
    return out;
}

// [0,1) from the top 53 bits of the generator output.
double uniform01(std::mt19937_64& gen) {
    return double(gen() >> 11) * 0x1.0p-53;
}

// k indices without replacement, probability proportional to weight.
std::vector<size_t> sample_weighted(const std::vector<double>& weights, uint32_t k,
                                    std::mt19937_64& gen) {
    std::vector<size_t> alive(weights.size());
    for (size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    double total = 0.0;
    for (double w : weights) total += w;

    std::vector<size_t> picked;
    picked.reserve(k);
    for (uint32_t round = 0; round < k; ++round) {
        double target = uniform01(gen) * total;
        size_t chosen = alive.size() - 1;
        double acc = 0.0;
        for (size_t a = 0; a < alive.size(); ++a) {
            acc += weights[alive[a]];
            if (target < acc) {
                chosen = a;
                break;
            }
        }
        picked.push_back(alive[chosen]);
        total -= weights[alive[chosen]];
        alive.erase(alive.begin() + chosen);
    }
    return picked;
}

void assign_range(const std::vector<std::vector<double>>& vectors,
                  const std::vector<std::vector<double>>& centroids,
                  std::vector<uint32_t>& assign, std::vector<double>& d2,
                  size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
        uint32_t best = 0;
        double best_d = dist2(vectors[i], centroids[0]);
        for (uint32_t c = 1; c < centroids.size(); ++c) {
            double d = dist2(vectors[i], centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        assign[i] = best;
        d2[i] = best_d;
    }
}

} // namespace

void VectorSet::push(std::vector<double> v, double w) {
    if (vectors.empty() && dim == 0) dim = v.size();
    if (weights.empty() && w != 1.0) weights.assign(vectors.size(), 1.0);
    vectors.push_back(std::move(v));
    if (!weights.empty()) weights.push_back(w);
}

VectorSet dedupe(const VectorSet& vs) {
    check(vs);
    Deduped dd = dedupe_indexed(vs);
    VectorSet out;
    out.dim = vs.dim;
    out.vectors = std::move(dd.vectors);
    out.weights = std::move(dd.weights);
    return out;
}

uint32_t nearest_centroid(std::span<const double> v,
                          const std::vector<std::vector<double>>& centroids) {
    if (centroids.empty())
        throw std::invalid_argument("nearest_centroid: no centroids");
    uint32_t best = 0;
    double best_d = -1.0;
    for (uint32_t c = 0; c < centroids.size(); ++c) {
        if (centroids[c].size() != v.size())
            throw std::invalid_argument("nearest_centroid: dimension mismatch");
        double d = dist2(v, centroids[c]);
        if (best_d < 0.0 || d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

Clustering kmeans(const VectorSet& vs, uint32_t k, uint64_t seed, uint32_t max_iter,
                  uint32_t threads) {
    check(vs);
    if (k < 1) throw std::invalid_argument("kmeans: k must be at least 1");
    if (vs.size() == 0) throw std::invalid_argument("kmeans: empty input");
    if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be at least 1");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    Deduped dd = dedupe_indexed(vs);
    size_t n = dd.vectors.size();

    Clustering result;
    result.k = k;

    if (n <= k) {
        // Exact: every distinct vector is its own centroid.
        result.centroids = dd.vectors;
        result.assignments.resize(vs.size());
        for (size_t i = 0; i < vs.size(); ++i)
            result.assignments[i] = static_cast<uint32_t>(dd.origin[i]);
        result.inertia = 0.0;
        result.inertia_trace = {0.0};
        return result;
    }

    std::mt19937_64 gen(seed);
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    for (size_t idx : sample_weighted(dd.weights, k, gen))
        centroids.push_back(dd.vectors[idx]);

    std::vector<uint32_t> assign(n, 0), prev_assign;
    std::vector<double> d2(n, 0.0);

    auto run_assignment = [&]() {
        size_t workers = std::min<size_t>(threads, n);
        if (workers <= 1) {
            assign_range(dd.vectors, centroids, assign, d2, 0, n);
            return;
        }
        std::vector<std::thread> pool;
        size_t chunk = (n + workers - 1) / workers;
        for (size_t t = 0; t < workers; ++t) {
            size_t begin = t * chunk, end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(assign_range, std::cref(dd.vectors), std::cref(centroids),
                              std::ref(assign), std::ref(d2), begin, end);
        }
        for (auto& th : pool) th.join();
    };

    for (uint32_t iter = 0; iter < max_iter; ++iter) {
        run_assignment();
        ++result.iterations;

        double inertia = 0.0;
        for (size_t i = 0; i < n; ++i) inertia += dd.weights[i] * d2[i];
        result.inertia_trace.push_back(inertia);

        if (!prev_assign.empty() && assign == prev_assign) break;
        prev_assign = assign;
        if (result.iterations == max_iter) break;

        // Weighted means, accumulated in vector-index order.
        std::vector<std::vector<double>> acc(k, std::vector<double>(vs.dim, 0.0));
        std::vector<double> mass(k, 0.0);
        for (size_t i = 0; i < n; ++i) {
            double w = dd.weights[i];
            auto& a = acc[assign[i]];
            const auto& v = dd.vectors[i];
            for (size_t j = 0; j < vs.dim; ++j) a[j] += w * v[j];
            mass[assign[i]] += w;
        }
        for (uint32_t c = 0; c < k; ++c) {
            if (mass[c] <= 0.0) continue;   // refilled below
            for (size_t j = 0; j < vs.dim; ++j) centroids[c][j] = acc[c][j] / mass[c];
        }
        for (uint32_t c = 0; c < k; ++c) {
            if (mass[c] > 0.0) continue;
            // Refill with the vector farthest from its centroid, ties low.
            size_t far = 0;
            double far_d = -1.0;
            for (size_t i = 0; i < n; ++i) {
                double d = dist2(dd.vectors[i], centroids[assign[i]]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            centroids[c] = dd.vectors[far];
            assign[far] = c;
        }
    }

    result.centroids = std::move(centroids);
    result.assignments.resize(vs.size());
    for (size_t i = 0; i < vs.size(); ++i)
        result.assignments[i] = assign[dd.origin[i]];
    result.inertia = result.inertia_trace.back();
    return result;
}

} // namespace vvar
