#include "synchart/decimal.hpp"

#include <array>
#include <cstdlib>
#include <limits>

#include "synchart/error.hpp"

namespace synchart {
namespace {

using Wide = __int128;

constexpr std::array<std::int64_t, 19> kPow10 = {
    1LL,
    10LL,
    100LL,
    1000LL,
    10000LL,
    100000LL,
    1000000LL,
    10000000LL,
    100000000LL,
    1000000000LL,
    10000000000LL,
    100000000000LL,
    1000000000000LL,
    10000000000000LL,
    100000000000000LL,
    1000000000000000LL,
    10000000000000000LL,
    100000000000000000LL,
    1000000000000000000LL,
};

Wide pow10_wide(int exp)
{
    Wide v = 1;
    for (int i = 0; i < exp; ++i) v *= 10;
    return v;
}

std::int64_t narrow(Wide v)
{
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorCode::ParseError, "decimal overflow");
    }
    return static_cast<std::int64_t>(v);
}

// Round-half-away-from-zero quotient of two wide integers (den != 0).
Wide round_div(Wide num, Wide den)
{
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const bool negative = num < 0;
    Wide mag = negative ? -num : num;
    Wide q = mag / den;
    Wide r = mag % den;
    if (2 * r >= den) ++q;
    return negative ? -q : q;
}

}  // namespace

Decimal Decimal::from_units(std::int64_t units, int scale)
{
    if (scale < 0) {
        Wide v = Wide(units) * pow10_wide(-scale);
        units = narrow(v);
        scale = 0;
    }
    while (scale > 0 && units % 10 == 0) {
        units /= 10;
        --scale;
    }
    if (scale > kMaxScale) {
        throw Error(ErrorCode::ParseError, "decimal scale too large");
    }
    Decimal d;
    d.units_ = units;
    d.scale_ = units == 0 ? 0 : scale;
    return d;
}

std::optional<Decimal> Decimal::parse(std::string_view text)
{
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-') {
        negative = true;
        pos = 1;
    }
    Wide units = 0;
    int scale = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_point || !seen_digit) return std::nullopt;
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        seen_digit = true;
        units = units * 10 + (c - '0');
        if (units > Wide(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
        if (seen_point) ++scale;
    }
    if (!seen_digit || text.back() == '.') return std::nullopt;
    if (scale > 18) return std::nullopt;
    // Strip trailing zeros before the scale check so "1.000000000000000" parses.
    while (scale > 0 && units % 10 == 0) {
        units /= 10;
        --scale;
    }
    if (scale > kMaxScale) return std::nullopt;
    return from_units(static_cast<std::int64_t>(negative ? -units : units), scale);
}

std::string Decimal::str() const
{
    if (units_ == 0) return "0";
    const bool negative = units_ < 0;
    // Use unsigned magnitude so INT64_MIN does not overflow.
    std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(units_) : static_cast<std::uint64_t>(units_);
    std::string digits = std::to_string(mag);
    if (scale_ > 0) {
        if (static_cast<int>(digits.size()) <= scale_) {
            digits.insert(0, static_cast<std::size_t>(scale_ - static_cast<int>(digits.size()) + 1), '0');
        }
        digits.insert(digits.size() - static_cast<std::size_t>(scale_), 1, '.');
    }
    return negative ? "-" + digits : digits;
}

double Decimal::to_double() const
{
    return std::strtod(str().c_str(), nullptr);
}

int Decimal::significant_digits() const
{
    if (units_ == 0) return 1;
    std::uint64_t mag = units_ < 0 ? 0 - static_cast<std::uint64_t>(units_) : static_cast<std::uint64_t>(units_);
    while (mag % 10 == 0) mag /= 10;
    int digits = 0;
    while (mag > 0) {
        ++digits;
        mag /= 10;
    }
    return digits;
}

Decimal operator+(const Decimal& a, const Decimal& b)
{
    const int scale = std::max(a.scale_, b.scale_);
    Wide lhs = Wide(a.units_) * kPow10[static_cast<std::size_t>(scale - a.scale_)];
    Wide rhs = Wide(b.units_) * kPow10[static_cast<std::size_t>(scale - b.scale_)];
    return Decimal::from_units(narrow(lhs + rhs), scale);
}

Decimal operator-(const Decimal& a, const Decimal& b)
{
    return a + (-b);
}

Decimal Decimal::times(std::int64_t factor) const
{
    return from_units(narrow(Wide(units_) * factor), scale_);
}

Decimal Decimal::divide(const Decimal& num, const Decimal& den, int decimals)
{
    if (den.units_ == 0) throw Error(ErrorCode::ParseError, "division by zero");
    // num/den = (n / 10^sn) / (d / 10^sd); scaled by 10^decimals.
    const int num_exp = den.scale_ + decimals;
    const int den_exp = num.scale_;
    Wide n = Wide(num.units_) * pow10_wide(num_exp);
    Wide d = Wide(den.units_) * pow10_wide(den_exp);
    return from_units(narrow(round_div(n, d)), decimals);
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b)
{
    const int scale = std::max(a.scale_, b.scale_);
    Wide lhs = Wide(a.units_) * kPow10[static_cast<std::size_t>(scale - a.scale_)];
    Wide rhs = Wide(b.units_) * kPow10[static_cast<std::size_t>(scale - b.scale_)];
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace synchart
