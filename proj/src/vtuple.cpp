#include "vvar/vtuple.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace vvar {

VTuple VTuple::from_exponents(std::span<const int> exponents) {
    if (exponents.empty() || exponents.size() > kMaxDepth)
        throw std::invalid_argument("vtuple: depth must be in [1, 15]");
    VTuple v;
    v.exponents_.reserve(exponents.size());
    int prev = 0;  // j_0, V_0 = 1
    for (size_t k = 1; k <= exponents.size(); ++k) {
        int j = exponents[k - 1];
        int bound = std::min(int(2 * k), prev + 2);
        if (j < 0 || j > bound)
            throw std::invalid_argument("vtuple: V_" + std::to_string(k) +
                                        " exceeds min(4^k, 4*V_{k-1})");
        v.exponents_.push_back(static_cast<uint8_t>(j));
        prev = j;
    }
    return v;
}

VTuple VTuple::from_values(std::span<const int64_t> values) {
    std::vector<int> exps;
    exps.reserve(values.size());
    for (size_t k = 0; k < values.size(); ++k) {
        int64_t val = values[k];
        if (val < 1 || (val & (val - 1)) != 0)
            throw std::invalid_argument("vtuple: V_" + std::to_string(k + 1) +
                                        " must be a positive power of two");
        exps.push_back(std::bit_width(static_cast<uint64_t>(val)) - 1);
    }
    return from_exponents(exps);
}

int64_t VTuple::value(int k) const {
    if (k < 0 || k > depth()) throw std::out_of_range("vtuple: level out of range");
    if (k == 0) return 1;
    return int64_t(1) << exponents_[k - 1];
}

int64_t VTuple::max_variability() const {
    return int64_t(1) << *std::max_element(exponents_.begin(), exponents_.end());
}

int VTuple::first_constrained_level() const {
    for (int n = 1; n <= depth(); ++n)
        if (exponents_[n - 1] < 2 * n) return n;
    return depth() + 1;
}

bool VTuple::fully_variable() const {
    for (int n = 1; n < depth(); ++n)
        if (exponents_[n - 1] < 2 * n) return false;
    return true;
}

std::vector<int> VTuple::active_levels() const {
    std::vector<int> levels;
    for (int k = first_constrained_level(); k <= depth() - 1; ++k)
        if (is_active(k)) levels.push_back(k);
    return levels;
}

bool VTuple::is_active(int k) const {
    if (k < 1 || k > depth()) return false;
    return value(k) < 4 * value(k - 1);
}

Rational storage_upper_bound(const VTuple& v) {
    Rational total(0);
    for (int k : v.active_levels())
        total += Rational(4 * v.value(k - 1) * v.exponent(k), 8);
    total += Rational(4 * v.value(v.depth() - 1));
    return total;
}

Rational storage_with_constants(const VTuple& v,
                                const std::map<int, Rational>& proportions) {
    auto proportion_at = [&](int level) {
        auto it = proportions.find(level);
        if (it == proportions.end()) return Rational(0);
        if (it->second < Rational(0) || it->second > Rational(1))
            throw std::invalid_argument("storage_with_constants: proportion outside [0,1]");
        return it->second;
    };
    Rational total(0);
    for (int k : v.active_levels()) {
        Rational scale = Rational(4) - Rational(3) * proportion_at(k - 1);
        total += Rational(v.value(k - 1) * v.exponent(k), 8) * scale;
    }
    Rational leaf_scale = Rational(4) - Rational(3) * proportion_at(v.depth() - 1);
    total += Rational(v.value(v.depth() - 1)) * leaf_scale;
    return total;
}

std::map<int, Rational> storage_breakdown(const VTuple& v) {
    std::map<int, Rational> out;
    for (int k : v.active_levels())
        out[k] = Rational(4 * v.value(k - 1) * v.exponent(k), 8);
    out[v.depth()] = Rational(4 * v.value(v.depth() - 1));
    return out;
}

} // namespace vvar
