#ifndef RCELL_DURATION_HPP
#define RCELL_DURATION_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rcell {

// Wide products for exact rational comparison.
__extension__ typedef __int128 int128;

/// Exact non-negative-or-signed time quantity stored as a reduced fraction.
///
/// Integer cell parameters keep every derived quantity integral; the
/// denominator only grows when a cycle time is a ratio (bounded by the
/// machine count) or the inputs themselves are decimal fractions.
class Duration {
public:
    constexpr Duration() = default;
    constexpr Duration(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
    Duration(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    /// Converts a decimal value such as 1.25 exactly; rejects values that
    /// are not representable with at most six decimal digits.
    static Duration from_double(double value) {
        if (!std::isfinite(value)) throw std::invalid_argument("duration must be finite");
        std::int64_t scale = 1;
        for (int digits = 0; digits <= 6; ++digits, scale *= 10) {
            const double scaled = value * static_cast<double>(scale);
            const double rounded = std::round(scaled);
            if (std::abs(scaled - rounded) <= 1e-9 * static_cast<double>(scale)) {
                if (std::abs(rounded) > 9.0e15) break;
                return Duration(static_cast<std::int64_t>(rounded), scale);
            }
        }
        throw std::invalid_argument("duration " + std::to_string(value) +
                                    " is not a decimal with at most 6 fractional digits");
    }

    [[nodiscard]] constexpr std::int64_t num() const { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const { return den_; }
    [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
    [[nodiscard]] double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    [[nodiscard]] std::string to_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    Duration &operator+=(const Duration &o) { return *this = *this + o; }
    Duration &operator-=(const Duration &o) { return *this = *this - o; }

    friend Duration operator+(const Duration &a, const Duration &b) {
        if (a.den_ == b.den_) return Duration(checked_add(a.num_, b.num_), a.den_);
        const std::int64_t g = std::gcd(a.den_, b.den_);
        const std::int64_t l = checked_mul(a.den_ / g, b.den_);
        return Duration(checked_add(checked_mul(a.num_, l / a.den_), checked_mul(b.num_, l / b.den_)), l);
    }
    friend Duration operator-(const Duration &a) { return Duration(-a.num_, a.den_); }
    friend Duration operator-(const Duration &a, const Duration &b) { return a + (-b); }
    friend Duration operator*(const Duration &a, std::int64_t k) {
        return Duration(checked_mul(a.num_, k), a.den_);
    }
    friend Duration operator*(std::int64_t k, const Duration &a) { return a * k; }
    friend Duration operator/(const Duration &a, std::int64_t k) {
        if (k == 0) throw std::domain_error("duration division by zero");
        return Duration(a.num_, checked_mul(a.den_, k));
    }

    friend bool operator==(const Duration &a, const Duration &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Duration &a, const Duration &b) {
        const int128 lhs = static_cast<int128>(a.num_) * b.den_;
        const int128 rhs = static_cast<int128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream &operator<<(std::ostream &os, const Duration &d) { return os << d.to_string(); }

private:
    static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("duration overflow");
        return r;
    }
    static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("duration overflow");
        return r;
    }
    void normalize() {
        if (den_ == 0) throw std::domain_error("duration with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Duration max(const Duration &a, const Duration &b) { return a < b ? b : a; }
inline Duration min(const Duration &a, const Duration &b) { return b < a ? b : a; }

} // namespace rcell

#endif // RCELL_DURATION_HPP
