#ifndef VVAR_CODEC_HPP
#define VVAR_CODEC_HPP

#include <cstdint>
#include <vector>

#include "vvar/code.hpp"
#include "vvar/image.hpp"
#include "vvar/vtuple.hpp"

namespace vvar {

struct EncodeSettings {
    VTuple tuple;
    int threshold = 0;      // blocks varying by at most this are stored constant
    uint64_t seed = 0;
    uint32_t max_iter = 100;
    bool weighted = false;  // weight each clustering by cumulative piece usage
    uint32_t threads = 1;   // clustering assignment threads (0 = hardware)
};

/// Compress a 2^m square image (m = tuple depth) by top-down level-wise
/// clustering. At every level, blocks varying by at most `threshold` are
/// replaced by their mean and substitute with a single child. Deterministic
/// for a fixed seed. The returned code carries width = height = 2^m; callers
/// that squared a non-square input overwrite them with the original size.
VVarCode encode(const GrayImage& image, const EncodeSettings& settings);

/// Reconstruct the full 2^m square image by iterative substitution.
GrayImage decode(const VVarCode& code);

/// decode() followed by resampling back to the original stored dimensions.
GrayImage decode_original(const VVarCode& code);

/// Random access: follow the type chain of one quadrant address. O(m).
uint8_t decode_pixel(const VVarCode& code, const QuadAddress& addr);

struct VariabilityReport {
    bool pass = false;
    std::vector<int64_t> counts;   // distinct level-n pieces, n = 1..m
    std::vector<int64_t> bounds;   // V_n
};

/// Count distinct pieces (exact pixel equality) at every level and compare
/// with the tuple's bounds.
VariabilityReport verify_v_variability(const GrayImage& image, const VTuple& v);

/// Which level-n pieces, in quadrant order, count as constant at the given
/// threshold. This is the predicate the encoder applies at every step.
std::vector<uint8_t> constant_mask(const GrayImage& image, int level, int threshold);

} // namespace vvar

#endif
