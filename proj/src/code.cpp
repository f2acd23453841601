#include "vvar/code.hpp"
#include "vvar/errors.hpp"

#include <stdexcept>
#include <string>

namespace vvar {

namespace {

constexpr uint8_t kMagic[4] = {'V', 'V', 'A', 'R'};
constexpr uint8_t kVersion = 1;

class BitWriter {
public:
    explicit BitWriter(std::vector<uint8_t>& out) : out_(out) {}

    void put(uint32_t value, int nbits) {
        for (int b = nbits - 1; b >= 0; --b) put_bit((value >> b) & 1);
    }

    void put_bit(uint32_t bit) {
        acc_ = static_cast<uint8_t>((acc_ << 1) | (bit & 1));
        if (++filled_ == 8) {
            out_.push_back(acc_);
            acc_ = 0;
            filled_ = 0;
        }
    }

    // Zero-pad to the next byte boundary.
    void align() {
        if (filled_ > 0) {
            out_.push_back(static_cast<uint8_t>(acc_ << (8 - filled_)));
            acc_ = 0;
            filled_ = 0;
        }
    }

private:
    std::vector<uint8_t>& out_;
    uint8_t acc_ = 0;
    int filled_ = 0;
};

class BitReader {
public:
    explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    uint32_t get(int nbits) {
        uint32_t value = 0;
        for (int b = 0; b < nbits; ++b) value = (value << 1) | get_bit();
        return value;
    }

    uint32_t get_bit() {
        if (pos_ >= bytes_.size())
            throw CodeError(CodeError::Kind::Truncated, "truncated stream");
        uint32_t bit = (bytes_[pos_] >> (7 - filled_)) & 1;
        if (++filled_ == 8) {
            filled_ = 0;
            ++pos_;
        }
        return bit;
    }

    void align() {
        if (filled_ > 0) {
            filled_ = 0;
            ++pos_;
        }
    }

    uint8_t get_byte() {
        if (filled_ != 0) throw std::logic_error("unaligned byte read");
        if (pos_ >= bytes_.size())
            throw CodeError(CodeError::Kind::Truncated, "truncated stream");
        return bytes_[pos_++];
    }

    size_t pos() const { return pos_; }

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
    int filled_ = 0;
};

size_t parent_count(const VTuple& v, int table_level) {
    return static_cast<size_t>(v.value(table_level - 1));
}

size_t leaf_parent_count(const VTuple& v) {
    return static_cast<size_t>(v.value(v.depth() - 1));
}

} // namespace

void validate(const VVarCode& code) {
    const VTuple& v = code.tuple;
    int m = v.depth();
    uint32_t side = uint32_t(1) << m;
    if (code.width == 0 || code.height == 0 || code.width > side || code.height > side)
        throw std::invalid_argument("code: original dimensions do not fit 2^m");

    auto active = v.active_levels();
    if (code.tables.size() != active.size())
        throw std::invalid_argument("code: table count does not match active levels");
    for (size_t t = 0; t < active.size(); ++t) {
        const LevelTable& table = code.tables[t];
        if (table.level != active[t])
            throw std::invalid_argument("code: table level mismatch");
        size_t parents = parent_count(v, table.level);
        if (table.constant_flags.size() != parents || table.children.size() != parents)
            throw std::invalid_argument("code: table size mismatch");
        uint64_t bound = static_cast<uint64_t>(v.value(table.level));
        for (size_t p = 0; p < parents; ++p) {
            for (uint32_t id : table.children[p])
                if (id >= bound)
                    throw std::invalid_argument("code: child type id out of range");
            if (table.constant_flags[p]) {
                const auto& c = table.children[p];
                if (c[1] != c[0] || c[2] != c[0] || c[3] != c[0])
                    throw std::invalid_argument("code: constant entry with distinct children");
            }
        }
    }

    size_t leaf_parents = leaf_parent_count(v);
    if (code.leaves.constant_flags.size() != leaf_parents ||
        code.leaves.colours.size() != leaf_parents)
        throw std::invalid_argument("code: leaf table size mismatch");
    for (size_t p = 0; p < leaf_parents; ++p) {
        if (code.leaves.constant_flags[p]) {
            const auto& c = code.leaves.colours[p];
            if (c[1] != c[0] || c[2] != c[0] || c[3] != c[0])
                throw std::invalid_argument("code: constant leaf with distinct colours");
        }
    }
}

std::vector<uint8_t> serialize(const VVarCode& code) {
    validate(code);
    const VTuple& v = code.tuple;

    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.push_back(static_cast<uint8_t>(v.depth()));
    out.push_back(code.threshold);
    out.push_back(static_cast<uint8_t>(code.width >> 8));
    out.push_back(static_cast<uint8_t>(code.width & 0xff));
    out.push_back(static_cast<uint8_t>(code.height >> 8));
    out.push_back(static_cast<uint8_t>(code.height & 0xff));
    for (int k = 1; k <= v.depth(); ++k)
        out.push_back(static_cast<uint8_t>(v.exponent(k)));

    BitWriter bw(out);
    for (const LevelTable& table : code.tables) {
        for (uint8_t f : table.constant_flags) bw.put_bit(f ? 1 : 0);
        bw.align();
        int width_bits = v.exponent(table.level);
        for (size_t p = 0; p < table.children.size(); ++p) {
            if (table.constant_flags[p]) {
                bw.put(table.children[p][0], width_bits);
            } else {
                for (uint32_t id : table.children[p]) bw.put(id, width_bits);
            }
        }
        bw.align();
    }

    for (uint8_t f : code.leaves.constant_flags) bw.put_bit(f ? 1 : 0);
    bw.align();
    for (size_t p = 0; p < code.leaves.colours.size(); ++p) {
        if (code.leaves.constant_flags[p]) {
            out.push_back(code.leaves.colours[p][0]);
        } else {
            for (uint8_t c : code.leaves.colours[p]) out.push_back(c);
        }
    }
    return out;
}

VVarCode deserialize(std::span<const uint8_t> bytes) {
    if (bytes.size() < 4 || bytes[0] != kMagic[0] || bytes[1] != kMagic[1] ||
        bytes[2] != kMagic[2] || bytes[3] != kMagic[3])
        throw CodeError(CodeError::Kind::BadMagic, "bad magic");
    if (bytes.size() < 8)
        throw CodeError(CodeError::Kind::Truncated, "truncated header");
    if (bytes[4] != kVersion)
        throw CodeError(CodeError::Kind::BadVersion,
                        "unsupported version " + std::to_string(bytes[4]));
    int m = bytes[5];
    if (m < 1 || m > VTuple::kMaxDepth)
        throw CodeError(CodeError::Kind::BadHeader, "depth out of range");
    if (bytes.size() < size_t(11) + m)
        throw CodeError(CodeError::Kind::Truncated, "truncated header");

    VVarCode code;
    code.threshold = bytes[6];
    code.width = static_cast<uint16_t>((bytes[7] << 8) | bytes[8]);
    code.height = static_cast<uint16_t>((bytes[9] << 8) | bytes[10]);

    std::vector<int> exps(m);
    for (int k = 0; k < m; ++k) exps[k] = bytes[11 + k];
    try {
        code.tuple = VTuple::from_exponents(exps);
    } catch (const std::invalid_argument& e) {
        throw CodeError(CodeError::Kind::BadHeader, e.what());
    }

    uint32_t side = uint32_t(1) << m;
    if (code.width == 0 || code.height == 0 || code.width > side || code.height > side)
        throw CodeError(CodeError::Kind::BadHeader, "original dimensions do not fit 2^m");

    BitReader br(bytes.subspan(size_t(11) + m));
    for (int k : code.tuple.active_levels()) {
        LevelTable table;
        table.level = k;
        size_t parents = parent_count(code.tuple, k);
        table.constant_flags.resize(parents);
        for (size_t p = 0; p < parents; ++p)
            table.constant_flags[p] = static_cast<uint8_t>(br.get_bit());
        br.align();
        int width_bits = code.tuple.exponent(k);
        table.children.resize(parents);
        for (size_t p = 0; p < parents; ++p) {
            if (table.constant_flags[p]) {
                uint32_t id = br.get(width_bits);
                table.children[p] = {id, id, id, id};
            } else {
                for (int q = 0; q < 4; ++q) table.children[p][q] = br.get(width_bits);
            }
        }
        br.align();
        code.tables.push_back(std::move(table));
    }

    size_t leaf_parents = leaf_parent_count(code.tuple);
    code.leaves.constant_flags.resize(leaf_parents);
    for (size_t p = 0; p < leaf_parents; ++p)
        code.leaves.constant_flags[p] = static_cast<uint8_t>(br.get_bit());
    br.align();
    code.leaves.colours.resize(leaf_parents);
    for (size_t p = 0; p < leaf_parents; ++p) {
        if (code.leaves.constant_flags[p]) {
            uint8_t c = br.get_byte();
            code.leaves.colours[p] = {c, c, c, c};
        } else {
            for (int q = 0; q < 4; ++q) code.leaves.colours[p][q] = br.get_byte();
        }
    }

    if (br.pos() != bytes.size() - (size_t(11) + m))
        throw CodeError(CodeError::Kind::TrailingData, "trailing bytes after leaf stage");
    return code;
}

std::map<int, Rational> constant_proportions(const VVarCode& code) {
    std::map<int, Rational> out;
    for (const LevelTable& table : code.tables) {
        int64_t set = 0;
        for (uint8_t f : table.constant_flags) set += f ? 1 : 0;
        out[table.level - 1] = Rational(set, int64_t(table.constant_flags.size()));
    }
    int64_t set = 0;
    for (uint8_t f : code.leaves.constant_flags) set += f ? 1 : 0;
    out[code.depth() - 1] = Rational(set, int64_t(code.leaves.constant_flags.size()));
    return out;
}

StorageReport storage_report(const VVarCode& code) {
    StorageReport report;
    report.model_bytes = storage_upper_bound(code.tuple);
    report.file_bytes = serialize(code).size();
    report.level_bytes = storage_breakdown(code.tuple);
    return report;
}

size_t overhead_bound(const VTuple& v) {
    size_t total = size_t(11) + v.depth();
    for (int k : v.active_levels())
        total += (static_cast<size_t>(v.value(k - 1)) + 7) / 8 + 1;
    total += (static_cast<size_t>(v.value(v.depth() - 1)) + 7) / 8 + 1;
    return total;
}

} // namespace vvar
