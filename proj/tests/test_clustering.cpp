#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "vvar/clustering.hpp"

using namespace vvar;

namespace {

VectorSet make_set(std::initializer_list<std::vector<double>> vectors) {
    VectorSet vs;
    for (const auto& v : vectors) vs.push(v);
    return vs;
}

VectorSet random_set(size_t n, size_t dim, std::mt19937& rng, int hi = 255) {
    VectorSet vs;
    vs.dim = dim;
    std::uniform_int_distribution<int> dist(0, hi);
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> v(dim);
        for (auto& x : v) x = dist(rng);
        vs.push(std::move(v));
    }
    return vs;
}

bool same_clustering(const Clustering& a, const Clustering& b) {
    return a.assignments == b.assignments && a.centroids == b.centroids &&
           a.inertia == b.inertia && a.iterations == b.iterations &&
           a.inertia_trace == b.inertia_trace;
}

// Optimal 2-clustering by exhaustive bipartition.
double brute_force_two_cluster(const VectorSet& vs, std::vector<int>& best_side) {
    size_t n = vs.size();
    double best = -1.0;
    for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        double inertia = 0.0;
        for (int side = 0; side < 2; ++side) {
            std::vector<double> mean(vs.dim, 0.0);
            double mass = 0.0;
            for (size_t i = 0; i < n; ++i) {
                if (int((mask >> i) & 1) != side) continue;
                for (size_t j = 0; j < vs.dim; ++j) mean[j] += vs.vectors[i][j];
                mass += 1.0;
            }
            for (auto& x : mean) x /= mass;
            for (size_t i = 0; i < n; ++i) {
                if (int((mask >> i) & 1) != side) continue;
                for (size_t j = 0; j < vs.dim; ++j) {
                    double d = vs.vectors[i][j] - mean[j];
                    inertia += d * d;
                }
            }
        }
        if (best < 0.0 || inertia < best) {
            best = inertia;
            best_side.assign(n, 0);
            for (size_t i = 0; i < n; ++i) best_side[i] = int((mask >> i) & 1);
        }
    }
    return best;
}

} // namespace

TEST_CASE("dedupe keeps distinct input unchanged") {
    VectorSet vs = make_set({{1, 2}, {3, 4}, {5, 6}});
    VectorSet out = dedupe(vs);
    CHECK(out.vectors == vs.vectors);
    CHECK(out.weights == std::vector<double>{1, 1, 1});
}

TEST_CASE("dedupe accumulates duplicates") {
    VectorSet vs;
    for (int i = 0; i < 5; ++i) vs.push({7.0, 7.0});
    VectorSet out = dedupe(vs);
    REQUIRE(out.size() == 1);
    CHECK(out.weights[0] == 5.0);
}

TEST_CASE("dedupe counts match a brute-force tally") {
    std::mt19937 rng(3);
    VectorSet vs = random_set(60, 2, rng, 3);   // small alphabet forces clashes
    VectorSet out = dedupe(vs);
    for (size_t d = 0; d < out.size(); ++d) {
        double count = 0.0;
        for (size_t i = 0; i < vs.size(); ++i)
            if (vs.vectors[i] == out.vectors[d]) count += 1.0;
        CHECK(out.weights[d] == count);
    }
    // first-occurrence order
    size_t cursor = 0;
    for (size_t i = 0; i < vs.size() && cursor < out.size(); ++i)
        if (vs.vectors[i] == out.vectors[cursor]) ++cursor;
    CHECK(cursor == out.size());
}

TEST_CASE("nearest_centroid with tie toward the lowest index") {
    std::vector<std::vector<double>> cents = {{0, 0}, {2, 0}, {5, 5}, {1, 1}};
    CHECK(nearest_centroid(std::vector<double>{1, 1}, cents) == 3);
    CHECK(nearest_centroid(std::vector<double>{5, 5}, cents) == 2);
    CHECK(nearest_centroid(std::vector<double>{1, 0}, cents) == 0);   // tie 0 vs 1

    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        VectorSet vs = random_set(8, 3, rng);
        std::vector<double> probe = vs.vectors.back();
        uint32_t got = nearest_centroid(probe, vs.vectors);
        double best = -1.0;
        uint32_t expect = 0;
        for (uint32_t c = 0; c < vs.size(); ++c) {
            double d = 0;
            for (size_t j = 0; j < 3; ++j) {
                double x = probe[j] - vs.vectors[c][j];
                d += x * x;
            }
            if (best < 0 || d < best) {
                best = d;
                expect = c;
            }
        }
        CHECK(got == expect);
    }
    CHECK_THROWS_AS(nearest_centroid(std::vector<double>{1}, cents), std::invalid_argument);
}

TEST_CASE("kmeans k=1 returns the weighted mean") {
    VectorSet vs;
    vs.push({0, 10}, 1.0);
    vs.push({4, 2}, 3.0);
    Clustering cl = kmeans(vs, 1, 0);
    REQUIRE(cl.centroids.size() == 1);
    CHECK(cl.centroids[0][0] == doctest::Approx(3.0));   // (0*1+4*3)/4
    CHECK(cl.centroids[0][1] == doctest::Approx(4.0));   // (10*1+2*3)/4
    double expect = 1.0 * (9 + 36) + 3.0 * (1 + 4);
    CHECK(cl.inertia == doctest::Approx(expect));
}

TEST_CASE("kmeans exact when distinct count is at most k") {
    VectorSet vs;
    vs.push({1, 1});
    vs.push({2, 2});
    vs.push({1, 1});
    Clustering cl = kmeans(vs, 5, 123);
    CHECK(cl.inertia == 0.0);
    CHECK(cl.centroids == std::vector<std::vector<double>>{{1, 1}, {2, 2}});
    CHECK(cl.assignments == std::vector<uint32_t>{0, 1, 0});
    CHECK(cl.iterations == 0);
}

TEST_CASE("kmeans recovers two separated clouds for every seed") {
    std::mt19937 rng(7);
    VectorSet vs;
    std::vector<int> truth;
    for (int i = 0; i < 11; ++i) {
        bool high = i % 2 == 0;
        std::vector<double> v(3);
        std::uniform_int_distribution<int> dist(0, 10);
        for (auto& x : v) x = dist(rng) + (high ? 200 : 0);
        vs.push(std::move(v));
        truth.push_back(high ? 1 : 0);
    }
    std::vector<int> best_side;
    brute_force_two_cluster(vs, best_side);
    // the optimal bipartition is the two clouds
    bool flip = best_side[0] != truth[0];
    for (size_t i = 0; i < truth.size(); ++i)
        CHECK((flip ? 1 - best_side[i] : best_side[i]) == truth[i]);

    for (uint64_t seed = 0; seed < 12; ++seed) {
        Clustering cl = kmeans(vs, 2, seed);
        bool swap = cl.assignments[0] != uint32_t(truth[0]);
        for (size_t i = 0; i < truth.size(); ++i)
            CHECK((swap ? 1 - cl.assignments[i] : cl.assignments[i]) == uint32_t(truth[i]));
    }
}

TEST_CASE("kmeans is deterministic and thread-count independent") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        VectorSet vs = random_set(40, 4, rng, 9);
        Clustering a = kmeans(vs, 6, trial, 100, 1);
        Clustering b = kmeans(vs, 6, trial, 100, 1);
        Clustering c = kmeans(vs, 6, trial, 100, 4);
        CHECK(same_clustering(a, b));
        CHECK(same_clustering(a, c));
    }
}

TEST_CASE("duplicates and weights give bitwise-identical results") {
    std::mt19937 rng(13);
    VectorSet raw = random_set(50, 3, rng, 4);
    VectorSet weighted = dedupe(raw);
    Clustering a = kmeans(raw, 4, 99);
    Clustering b = kmeans(weighted, 4, 99);
    CHECK(a.centroids == b.centroids);
    CHECK(a.inertia == b.inertia);
    CHECK(a.inertia_trace == b.inertia_trace);
}

TEST_CASE("inertia never increases across Lloyd iterations") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        VectorSet vs = random_set(60, 3, rng, 20);
        Clustering cl = kmeans(vs, 5, trial);
        REQUIRE(!cl.inertia_trace.empty());
        for (size_t i = 1; i < cl.inertia_trace.size(); ++i)
            CHECK(cl.inertia_trace[i] <= cl.inertia_trace[i - 1]);
        CHECK(cl.inertia == cl.inertia_trace.back());
        for (uint32_t a : cl.assignments) CHECK(a < cl.centroids.size());
    }
}

TEST_CASE("kmeans contract errors") {
    VectorSet vs = make_set({{1, 2}});
    CHECK_THROWS_AS(kmeans(vs, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(VectorSet{}, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(vs, 1, 0, 0), std::invalid_argument);

    VectorSet bad;
    bad.dim = 2;
    bad.vectors = {{1.0}};
    CHECK_THROWS_AS(kmeans(bad, 1, 0), std::invalid_argument);
}
