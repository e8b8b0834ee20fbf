#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace pde {

/// Exact rational over 64-bit integers, always normalized (den > 0,
/// gcd(|num|, den) == 1). Arithmetic runs through 128-bit intermediates and
/// throws std::overflow_error if a reduced result does not fit in 64 bits.
class Rational {
public:
    Rational() = default;
    Rational(long long n) : num_(n) {}  // NOLINT: implicit by design
    Rational(long long n, long long d);

    /// Parses "12", "-3.25", "0.05" or "n/d" ("22/7"). Throws
    /// std::invalid_argument on malformed input.
    static Rational parse(const std::string& text);

    /// Decimal string when the denominator is of the form 2^a*5^b and the
    /// expansion fits in 64-bit scaling; "n/d" otherwise. parse() round-trips
    /// both forms exactly.
    std::string str() const;

    long long num() const { return num_; }
    long long den() const { return den_; }
    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// floor(x), ceil(x), floor(x + 1/2) as integers.
    long long floor_int() const;
    long long ceil_int() const;
    long long round_half_up() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    static Rational reduced(__int128 n, __int128 d);

    long long num_ = 0;
    long long den_ = 1;
};

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// round_half_up(a*b) without materializing the (possibly wide) product.
long long round_half_up_product(const Rational& a, const Rational& b);

}  // namespace pde
