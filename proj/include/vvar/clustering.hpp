#ifndef VVAR_CLUSTERING_HPP
#define VVAR_CLUSTERING_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace vvar {

/// A set of equal-length real vectors with optional positive multiplicities.
struct VectorSet {
    size_t dim = 0;
    std::vector<std::vector<double>> vectors;
    std::vector<double> weights;   // empty means all ones

    size_t size() const { return vectors.size(); }
    double weight(size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
    void push(std::vector<double> v, double w = 1.0);
};

struct Clustering {
    uint32_t k = 0;
    std::vector<uint32_t> assignments;              // one per input vector
    std::vector<std::vector<double>> centroids;     // at most k
    double inertia = 0.0;                           // weighted sum of squared distances
    std::vector<double> inertia_trace;              // after each assignment step
    uint32_t iterations = 0;
};

/// Distinct vectors with accumulated weights, first-occurrence order.
/// Equality is exact (value) equality.
VectorSet dedupe(const VectorSet& vs);

/// Index of the closest centroid by squared Euclidean distance, ties to the
/// lowest index.
uint32_t nearest_centroid(std::span<const double> v,
                          const std::vector<std::vector<double>>& centroids);

/// Deterministic weighted Lloyd k-means.
///
/// The input is deduplicated internally, so duplicates and explicit weights
/// give bitwise-identical results. Initialization draws k distinct vectors
/// without replacement with probability proportional to weight, using a
/// splitmix64/mt19937_64 stream seeded by `seed`. If the distinct count is at
/// most k the exact clustering (inertia 0) is returned without iterating.
/// Iterations stop when assignments stabilize or `max_iter` is reached; any
/// cluster left empty is refilled with the vector farthest from its centroid
/// (ties to the lowest index). Centroid accumulation is always sequential in
/// vector-index order; `threads` (0 = hardware) parallelizes only the
/// assignment scan, so results do not depend on it.
Clustering kmeans(const VectorSet& vs, uint32_t k, uint64_t seed,
                  uint32_t max_iter = 100, uint32_t threads = 1);

} // namespace vvar

#endif
