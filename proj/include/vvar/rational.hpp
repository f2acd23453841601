#ifndef VVAR_RATIONAL_HPP
#define VVAR_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vvar {

/// Exact rational over int64, always normalized with a positive denominator.
/// Storage-model quantities are sums of byte fractions, so exact comparison
/// matters more than range; int64 is far beyond what any tuple can produce.
class Rational {
public:
    constexpr Rational() = default;
    Rational(int64_t num, int64_t den = 1) : num_(num), den_(den) { normalize(); }

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
    bool operator<=(const Rational& o) const { return num_ * o.den_ <= o.num_ * den_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    double to_double() const { return double(num_) / double(den_); }

    /// Nearest integer, ties away from zero.
    int64_t round_nearest() const {
        bool neg = num_ < 0;
        int64_t n = neg ? -num_ : num_;
        int64_t q = n / den_;
        if (2 * (n % den_) >= den_) ++q;
        return neg ? -q : q;
    }

    /// Exact decimal string; the fractional expansion of every storage value
    /// terminates (denominators are powers of two).
    std::string to_string() const {
        int64_t n = num_, d = den_;
        std::string out;
        if (n < 0) { out += '-'; n = -n; }
        out += std::to_string(n / d);
        int64_t rem = n % d;
        if (rem != 0) {
            out += '.';
            for (int i = 0; i < 20 && rem != 0; ++i) {
                rem *= 10;
                out += char('0' + rem / d);
                rem %= d;
            }
        }
        return out;
    }

private:
    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    int64_t num_ = 0;
    int64_t den_ = 1;
};

} // namespace vvar

#endif
