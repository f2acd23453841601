#ifndef VVAR_CODE_HPP
#define VVAR_CODE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vvar/rational.hpp"
#include "vvar/vtuple.hpp"

namespace vvar {

/// Substitution table for one active level k: maps every level-(k-1)
/// representative to the types of its four quadrant children. A constant
/// representative has one child repeated in all four slots; only one id is
/// serialized for it.
struct LevelTable {
    int level = 0;
    std::vector<uint8_t> constant_flags;              // one per representative
    std::vector<std::array<uint32_t, 4>> children;    // quadrant order 1,2,3,4

    bool operator==(const LevelTable&) const = default;
};

/// Leaf colour stage: one entry per level-(m-1) representative, four colour
/// bytes in quadrant order (all equal, one serialized, when constant).
struct LeafTable {
    std::vector<uint8_t> constant_flags;
    std::vector<std::array<uint8_t, 4>> colours;

    bool operator==(const LeafTable&) const = default;
};

/// The complete compressed representation. `width`/`height` are the original
/// (pre-squaring) dimensions so non-square images decode to their true size.
struct VVarCode {
    VTuple tuple;
    uint8_t threshold = 0;
    uint16_t width = 0;
    uint16_t height = 0;
    std::vector<LevelTable> tables;   // ascending, exactly tuple.active_levels()
    LeafTable leaves;

    int depth() const { return tuple.depth(); }

    bool operator==(const VVarCode&) const = default;
};

/// Model bytes next to what the serialized stream actually takes. The file
/// may exceed the model only by the documented overhead (header, constant
/// flag bitmasks, per-level bit padding) and undercuts it when constant
/// substitutions shrink the id streams.
struct StorageReport {
    Rational model_bytes;
    size_t file_bytes = 0;
    std::map<int, Rational> level_bytes;   // active level (or depth() for leaf) -> model bytes
};

/// Bit-exact .vvar stream, multi-byte integers big-endian:
///   "VVAR" | version u8=1 | m u8 | threshold u8 | width u16 | height u16 |
///   exponents j_1..j_m | per active level: flag bitmask (MSB-first, one bit
///   per representative) then child ids packed MSB-first at j_k bits each
///   (one id for constant representatives, four otherwise), padded to a byte
///   boundary | leaf stage: flag bitmask then 1 or 4 raw colour bytes per
///   representative.
std::vector<uint8_t> serialize(const VVarCode& code);

/// Parse and validate a .vvar stream. Throws CodeError; any stream this
/// accepts decodes successfully.
VVarCode deserialize(std::span<const uint8_t> bytes);

/// Sanity-check table shapes and id ranges against the tuple; throws
/// std::invalid_argument. serialize() calls this.
void validate(const VVarCode& code);

/// Fraction of constant-flagged representatives per parent level that stores
/// a table (active-level parents and the leaf parents). Levels without stored
/// flags are absent.
std::map<int, Rational> constant_proportions(const VVarCode& code);

StorageReport storage_report(const VVarCode& code);

/// Bytes the serialized stream may exceed ceil(model_bytes) by: header plus
/// ceil(R/8)+1 per stored level (flag bitmask and bit padding).
size_t overhead_bound(const VTuple& v);

} // namespace vvar

#endif
