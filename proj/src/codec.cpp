#include "vvar/codec.hpp"
#include "vvar/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace vvar {

namespace {

// Real-valued square block; representatives stay real between levels and are
// rounded only at leaf colour storage.
struct RealBlock {
    uint32_t side = 0;
    std::vector<double> px;
};

double real_variation(const RealBlock& b) {
    auto [mn, mx] = std::minmax_element(b.px.begin(), b.px.end());
    return *mx - *mn;
}

double real_mean(const RealBlock& b) {
    double s = 0.0;
    for (double v : b.px) s += v;
    return s / double(b.px.size());
}

// Flatten to the mean if the block varies by at most the threshold.
// Returns whether it was (or already is) constant.
bool mark_constant(RealBlock& b, int threshold) {
    if (real_variation(b) <= double(threshold)) {
        double mean = real_mean(b);
        std::fill(b.px.begin(), b.px.end(), mean);
        return true;
    }
    return false;
}

RealBlock quadrant(const RealBlock& b, int q) {
    uint32_t half = b.side / 2;
    uint32_t r0 = (uint32_t(q - 1) >> 1) * half;
    uint32_t c0 = (uint32_t(q - 1) & 1) * half;
    RealBlock out;
    out.side = half;
    out.px.resize(size_t(half) * half);
    for (uint32_t r = 0; r < half; ++r)
        for (uint32_t c = 0; c < half; ++c)
            out.px[size_t(r) * half + c] = b.px[size_t(r0 + r) * b.side + c0 + c];
    return out;
}

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t level_seed(uint64_t seed, int level) {
    return splitmix64(seed ^ (uint64_t(level) * 0x9E3779B97F4A7C15ULL));
}

uint8_t round_colour(double v) {
    long r = std::lround(v);
    return static_cast<uint8_t>(std::clamp(r, 0L, 255L));
}

// Real copies of all level-n pieces, quadrant order.
std::vector<RealBlock> real_pieces(const GrayImage& image, int n) {
    std::vector<Block> pieces = extract_pieces(image, n);
    std::vector<RealBlock> out(pieces.size());
    for (size_t i = 0; i < pieces.size(); ++i) {
        out[i].side = pieces[i].side;
        out[i].px.assign(pieces[i].pixels.begin(), pieces[i].pixels.end());
    }
    return out;
}

// Per level 1..m-1: the substitution table, or nullptr for implicit
// child(t,q) = 4t + (q-1).
std::vector<const LevelTable*> table_index(const VVarCode& code) {
    std::vector<const LevelTable*> by_level(code.depth(), nullptr);
    for (const LevelTable& t : code.tables) by_level[t.level - 1] = &t;
    return by_level;
}

} // namespace

VVarCode encode(const GrayImage& image, const EncodeSettings& settings) {
    const VTuple& v = settings.tuple;
    int m = v.depth();
    if (image_depth(image) != m)
        throw std::invalid_argument("encode: image must be square of side 2^" +
                                    std::to_string(m));
    if (settings.threshold < 0 || settings.threshold > 255)
        throw std::invalid_argument("encode: threshold outside [0,255]");

    VVarCode code;
    code.tuple = v;
    code.threshold = static_cast<uint8_t>(settings.threshold);
    code.width = static_cast<uint16_t>(image.width);
    code.height = static_cast<uint16_t>(image.height);

    std::vector<int> active = v.active_levels();

    // Representatives of the deepest unconstrained level are the image's own
    // pieces; every level below it is fully variable.
    int parent_level = active.empty() ? m - 1 : active.front() - 1;
    std::vector<RealBlock> reps = real_pieces(image, parent_level);
    std::vector<double> usage(reps.size(), 1.0);

    for (int j = parent_level + 1; j <= m - 1; ++j) {
        size_t parents = reps.size();
        std::vector<uint8_t> flags(parents);
        for (size_t p = 0; p < parents; ++p)
            flags[p] = mark_constant(reps[p], settings.threshold) ? 1 : 0;

        // Children of every representative, quadrant order; a constant parent
        // splits into four copies of the same block.
        std::vector<RealBlock> children(parents * 4);
        for (size_t p = 0; p < parents; ++p)
            for (int q = 1; q <= 4; ++q) {
                RealBlock c = quadrant(reps[p], q);
                mark_constant(c, settings.threshold);
                children[p * 4 + (q - 1)] = std::move(c);
            }

        if (v.is_active(j)) {
            VectorSet items;
            items.dim = children[0].px.size();
            for (size_t p = 0; p < parents; ++p)
                for (int q = 0; q < 4; ++q)
                    items.push(children[p * 4 + q].px,
                               settings.weighted ? usage[p] : 1.0);

            Clustering cl = kmeans(items, static_cast<uint32_t>(v.value(j)),
                                   level_seed(settings.seed, j), settings.max_iter,
                                   settings.threads);
            size_t produced = cl.centroids.size();

            LevelTable table;
            table.level = j;
            size_t rows = static_cast<size_t>(v.value(j - 1));
            table.constant_flags.resize(rows);
            table.children.resize(rows);
            for (size_t p = 0; p < rows; ++p) {
                size_t src = p < parents ? p : p % parents;   // pad rows copy real ones
                table.constant_flags[p] = flags[src];
                for (int q = 0; q < 4; ++q)
                    table.children[p][q] = cl.assignments[src * 4 + q];
            }
            code.tables.push_back(std::move(table));

            std::vector<double> next_usage(produced, 0.0);
            for (size_t item = 0; item < parents * 4; ++item)
                next_usage[cl.assignments[item]] += usage[item / 4];

            std::vector<RealBlock> next(produced);
            uint32_t side = children[0].side;
            for (size_t t = 0; t < produced; ++t)
                next[t] = RealBlock{side, std::move(cl.centroids[t])};
            reps = std::move(next);
            usage = std::move(next_usage);
        } else {
            std::vector<double> next_usage(parents * 4);
            for (size_t p = 0; p < parents; ++p)
                for (int q = 0; q < 4; ++q) next_usage[p * 4 + q] = usage[p];
            reps = std::move(children);
            usage = std::move(next_usage);
        }
    }

    // Leaf stage: representatives are 2x2 (or the whole image when m = 1);
    // their quadrants are single pixels, stored as colour bytes.
    size_t parents = reps.size();
    std::vector<uint8_t> flags(parents);
    std::vector<std::array<double, 4>> values(parents);
    for (size_t p = 0; p < parents; ++p) {
        flags[p] = mark_constant(reps[p], settings.threshold) ? 1 : 0;
        for (int q = 1; q <= 4; ++q) values[p][q - 1] = quadrant(reps[p], q).px[0];
    }

    if (v.value(m) < 256) {
        // Colour palette: cluster the stored colours down to V_m entries.
        VectorSet colours;
        colours.dim = 1;
        for (size_t p = 0; p < parents; ++p) {
            if (flags[p]) {
                colours.push({values[p][0]});
            } else {
                for (int q = 0; q < 4; ++q) colours.push({values[p][q]});
            }
        }
        Clustering cl = kmeans(colours, static_cast<uint32_t>(v.value(m)),
                               level_seed(settings.seed, m), settings.max_iter,
                               settings.threads);
        size_t item = 0;
        for (size_t p = 0; p < parents; ++p) {
            if (flags[p]) {
                double c = cl.centroids[cl.assignments[item++]][0];
                values[p] = {c, c, c, c};
            } else {
                for (int q = 0; q < 4; ++q)
                    values[p][q] = cl.centroids[cl.assignments[item++]][0];
            }
        }
    }

    size_t rows = static_cast<size_t>(v.value(m - 1));
    code.leaves.constant_flags.resize(rows);
    code.leaves.colours.resize(rows);
    for (size_t p = 0; p < rows; ++p) {
        size_t src = p < parents ? p : p % parents;
        code.leaves.constant_flags[p] = flags[src];
        for (int q = 0; q < 4; ++q)
            code.leaves.colours[p][q] = round_colour(values[src][q]);
    }
    return code;
}

GrayImage decode(const VVarCode& code) {
    validate(code);
    int m = code.depth();
    auto by_level = table_index(code);

    std::vector<uint32_t> types{0};
    for (int k = 1; k <= m - 1; ++k) {
        std::vector<uint32_t> next(types.size() * 4);
        const LevelTable* table = by_level[k - 1];
        for (size_t p = 0; p < types.size(); ++p) {
            uint32_t t = types[p];
            for (int q = 0; q < 4; ++q)
                next[p * 4 + q] = table ? table->children[t][q] : 4 * t + q;
        }
        types = std::move(next);
    }

    uint32_t side = uint32_t(1) << m;
    GrayImage out(side, side);
    for (size_t p = 0; p < types.size(); ++p) {
        auto [pr, pc] = piece_coords(p, m - 1);
        const auto& colours = code.leaves.colours[types[p]];
        for (int q = 0; q < 4; ++q)
            out.at(2 * pr + (q >> 1), 2 * pc + (q & 1)) = colours[q];
    }
    return out;
}

GrayImage decode_original(const VVarCode& code) {
    return from_square(decode(code), code.width, code.height);
}

uint8_t decode_pixel(const VVarCode& code, const QuadAddress& addr) {
    int m = code.depth();
    if (static_cast<int>(addr.digits.size()) != m)
        throw std::invalid_argument("decode_pixel: address length must equal depth");
    auto by_level = table_index(code);

    uint32_t t = 0;
    for (int k = 1; k <= m - 1; ++k) {
        uint8_t d = addr.digits[k - 1];
        if (d < 1 || d > 4)
            throw std::invalid_argument("decode_pixel: digit out of range");
        const LevelTable* table = by_level[k - 1];
        t = table ? table->children[t][d - 1] : 4 * t + (d - 1);
    }
    uint8_t last = addr.digits[m - 1];
    if (last < 1 || last > 4)
        throw std::invalid_argument("decode_pixel: digit out of range");
    return code.leaves.colours[t][last - 1];
}

VariabilityReport verify_v_variability(const GrayImage& image, const VTuple& v) {
    int m = image_depth(image);
    if (m != v.depth())
        throw std::invalid_argument("verify: image depth does not match tuple");

    VariabilityReport report;
    report.pass = true;
    for (int n = 1; n <= m; ++n) {
        std::unordered_set<std::string> distinct;
        for (const Block& b : extract_pieces(image, n))
            distinct.emplace(b.pixels.begin(), b.pixels.end());
        report.counts.push_back(static_cast<int64_t>(distinct.size()));
        report.bounds.push_back(v.value(n));
        if (report.counts.back() > report.bounds.back()) report.pass = false;
    }
    return report;
}

std::vector<uint8_t> constant_mask(const GrayImage& image, int level, int threshold) {
    std::vector<Block> pieces = extract_pieces(image, level);
    std::vector<uint8_t> mask(pieces.size());
    for (size_t i = 0; i < pieces.size(); ++i)
        mask[i] = block_variation(pieces[i]) <= threshold ? 1 : 0;
    return mask;
}

} // namespace vvar
