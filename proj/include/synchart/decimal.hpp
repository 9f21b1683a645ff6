#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace synchart {

/// Exact base-10 number: value = units / 10^scale.
///
/// Always kept normalized (no trailing zero digits in units when scale > 0),
/// so two equal values have identical representations and identical text.
/// Table cells carry at most six significant digits; arithmetic results used
/// by the QA oracles are exact except where a rounding step is explicit.
class Decimal {
public:
    static constexpr int kMaxScale = 12;
    static constexpr int kMaxSignificantDigits = 6;

    constexpr Decimal() = default;
    explicit Decimal(std::int64_t integer) : units_(integer), scale_(0) {}

    static Decimal from_units(std::int64_t units, int scale);

    /// Accepts `[-]digits[.digits]`; no exponent, sign '+', or whitespace.
    static std::optional<Decimal> parse(std::string_view text);

    std::int64_t units() const noexcept { return units_; }
    int scale() const noexcept { return scale_; }

    /// Canonical text: shortest plain notation, "-" for negatives, "0" for zero.
    std::string str() const;
    double to_double() const;
    int significant_digits() const;
    bool is_zero() const noexcept { return units_ == 0; }
    bool is_negative() const noexcept { return units_ < 0; }

    Decimal operator-() const { return from_units(-units_, scale_); }
    friend Decimal operator+(const Decimal& a, const Decimal& b);
    friend Decimal operator-(const Decimal& a, const Decimal& b);
    Decimal times(std::int64_t factor) const;

    /// num / den rounded half away from zero to `decimals` fractional digits.
    static Decimal divide(const Decimal& num, const Decimal& den, int decimals);

    friend bool operator==(const Decimal& a, const Decimal& b) noexcept
    {
        return a.units_ == b.units_ && a.scale_ == b.scale_;
    }
    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

private:
    std::int64_t units_ = 0;
    int scale_ = 0;
};

}  // namespace synchart
