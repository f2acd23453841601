#ifndef VVAR_RD_HPP
#define VVAR_RD_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vvar/codec.hpp"
#include "vvar/image.hpp"
#include "vvar/rational.hpp"
#include "vvar/vtuple.hpp"

namespace vvar {

/// 10*log10(255^2 / MSE); +infinity for identical images.
double psnr(const GrayImage& a, const GrayImage& b);

/// Rule-of-thumb tuple for one storage budget: V_1=4, V_2=16, V_3=64,
/// V_9=256 fixed, the middle five free.
struct Preset {
    std::string label;
    std::array<int64_t, 5> middle;   // V_4..V_8
    int64_t model_bytes;             // storage_upper_bound of tuple()

    VTuple tuple() const;
};

/// The eleven presets, budgets 500 B through 5000 B plus the flat 256 tuple.
const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& label);

struct RDPoint {
    VTuple tuple;
    uint8_t threshold = 0;
    uint64_t seed = 0;
    Rational model_bytes;
    size_t file_bytes = 0;
    double psnr_db = 0.0;
};

struct SweepOptions {
    int64_t budget = 5000;                       // max model bytes
    std::vector<int> thresholds{0, 15, 30, 45};
    std::vector<uint64_t> seeds{0};
    std::vector<int64_t> middle_choices{16, 32, 64, 128, 256, 1024};
    uint32_t max_iter = 100;
    uint32_t threads = 1;                        // parallel sweep points (0 = hardware)
};

/// All valid tuples in the preset-shaped space (fixed V_1..V_3, V_9, middle
/// five from `middle_choices`) whose model bytes fit the budget, in odometer
/// order with V_4 slowest.
std::vector<VTuple> sweep_space(const SweepOptions& options);

/// Encode/decode every (tuple, threshold, seed) combination on a 512x512
/// image and measure it. Points run independently; the result order is the
/// deterministic enumeration order regardless of thread count.
std::vector<RDPoint> sweep(const GrayImage& image, const SweepOptions& options);

/// Pareto-maximal points: nothing else has <= model bytes and >= PSNR with
/// one strict. Sorted by model bytes ascending.
std::vector<RDPoint> frontier(std::span<const RDPoint> points);

/// CSV with header; tuple column is the exponents j_1..j_m dash-separated,
/// model_bytes exact decimal, psnr fixed 4 decimals or "inf".
std::string to_csv(std::span<const RDPoint> points);

} // namespace vvar

#endif
