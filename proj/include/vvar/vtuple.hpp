#ifndef VVAR_VTUPLE_HPP
#define VVAR_VTUPLE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vvar/rational.hpp"

namespace vvar {

/// Per-level variability bounds (V_1,...,V_m), every V_k a power of two with
/// V_k <= min(4^k, 4*V_{k-1}) and V_0 = 1. Stored as exponents j_k, V_k = 2^j_k.
///
/// Level k is "active" when V_k < 4*V_{k-1}: only active levels constrain the
/// image and only their substitution tables consume storage. A level with
/// V_k = 4*V_{k-1} expands implicitly, child(t, q) = 4t + (q-1).
class VTuple {
public:
    static constexpr int kMaxDepth = 15;

    /// Empty tuple (depth 0), a placeholder until assigned from a factory.
    VTuple() = default;

    /// Build from exponents j_1..j_m; throws std::invalid_argument on any
    /// violated bound.
    static VTuple from_exponents(std::span<const int> exponents);

    /// Build from the values V_1..V_m themselves.
    static VTuple from_values(std::span<const int64_t> values);

    int depth() const { return static_cast<int>(exponents_.size()); }

    /// V_k for 0 <= k <= m (V_0 = 1).
    int64_t value(int k) const;

    /// j_k for 1 <= k <= m.
    int exponent(int k) const { return exponents_[k - 1]; }
    const std::vector<uint8_t>& exponents() const { return exponents_; }

    /// max(V_1,...,V_m).
    int64_t max_variability() const;

    /// n0: smallest level with V_n < 4^n, or depth()+1 when every level up to
    /// m is unconstrained.
    int first_constrained_level() const;

    /// True when no level below m is constrained (encoding discards nothing
    /// structurally; only the leaf stage remains).
    bool fully_variable() const;

    /// I = { n0 <= k <= m-1 : V_k < 4*V_{k-1} }, ascending.
    std::vector<int> active_levels() const;
    bool is_active(int k) const;

    bool operator==(const VTuple&) const = default;

private:
    std::vector<uint8_t> exponents_;
};

/// Upper-bound model bytes: sum over active k of 4*V_{k-1}*j_k/8, plus
/// 4*V_{m-1} bytes for the leaf colours.
Rational storage_upper_bound(const VTuple& v);

/// Model bytes when a proportion p of the representatives at each parent
/// level substitutes as constant (one stored child instead of four): each
/// active term and the leaf term scale by (4 - 3p)/4. `proportions` is keyed
/// by parent level (k-1 for active k, m-1 for the leaf); missing levels mean
/// zero. Throws std::invalid_argument for proportions outside [0,1].
Rational storage_with_constants(const VTuple& v,
                                const std::map<int, Rational>& proportions);

/// Per-level model bytes: active level k -> its table bytes, plus depth() ->
/// the leaf-colour bytes.
std::map<int, Rational> storage_breakdown(const VTuple& v);

} // namespace vvar

#endif
