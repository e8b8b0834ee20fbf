#include "pde/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace pde {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long long narrow(i128 v) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        throw std::overflow_error("rational overflow");
    return static_cast<long long>(v);
}

}  // namespace

Rational Rational::reduced(i128 n, i128 d) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    if (n == 0) return Rational();
    u128 g = gcd128(uabs(n), static_cast<u128>(d));
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
    Rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
}

Rational::Rational(long long n, long long d) { *this = reduced(n, d); }

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::reduced(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                             static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational::reduced(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                             static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::reduced(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("rational division by zero");
    return Rational::reduced(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<i128>(num_));
    r.den_ = den_;
    return r;
}

long long Rational::floor_int() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

long long Rational::ceil_int() const {
    long long q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

long long Rational::round_half_up() const {
    // floor(x + 1/2) = floor((2n + d) / 2d)
    i128 n2 = static_cast<i128>(num_) * 2 + den_;
    i128 d2 = static_cast<i128>(den_) * 2;
    i128 q = n2 / d2;
    if (n2 % d2 != 0 && n2 < 0) --q;
    return narrow(q);
}

long long round_half_up_product(const Rational& a, const Rational& b) {
    i128 n = static_cast<i128>(a.num()) * b.num();
    i128 d = static_cast<i128>(a.den()) * b.den();
    i128 n2 = 2 * n + d;
    i128 d2 = 2 * d;
    i128 q = n2 / d2;
    if (n2 % d2 != 0 && n2 < 0) --q;
    if (q > std::numeric_limits<long long>::max() || q < std::numeric_limits<long long>::min())
        throw std::overflow_error("rational overflow");
    return static_cast<long long>(q);
}

Rational Rational::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string ns = text.substr(0, slash);
        const std::string ds = text.substr(slash + 1);
        if (ns.empty() || ds.empty()) throw std::invalid_argument("malformed rational: " + text);
        size_t pn = 0, pd = 0;
        long long n = std::stoll(ns, &pn);
        long long d = std::stoll(ds, &pd);
        if (pn != ns.size() || pd != ds.size())
            throw std::invalid_argument("malformed rational: " + text);
        return Rational(n, d);
    }

    size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    i128 mantissa = 0;
    int frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("malformed decimal: " + text);
            seen_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("malformed decimal: " + text);
        seen_digit = true;
        mantissa = mantissa * 10 + (c - '0');
        if (mantissa > static_cast<i128>(std::numeric_limits<long long>::max()))
            throw std::overflow_error("decimal literal out of range: " + text);
        if (seen_dot) ++frac_digits;
    }
    if (!seen_digit) throw std::invalid_argument("malformed decimal: " + text);
    i128 den = 1;
    for (int k = 0; k < frac_digits; ++k) den *= 10;
    return reduced(neg ? -mantissa : mantissa, den);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    // Decimal expansion exists iff den = 2^a * 5^b.
    long long d = den_;
    int a = 0, b = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++a;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++b;
    }
    if (d == 1) {
        int digits = a > b ? a : b;
        i128 scale = 1;
        bool fits = true;
        for (int k = 0; k < digits; ++k) {
            scale *= 10;
            if (scale > std::numeric_limits<long long>::max()) {
                fits = false;
                break;
            }
        }
        if (fits) {
            i128 scaled = static_cast<i128>(num_) * (scale / den_);
            bool neg = scaled < 0;
            u128 mag = neg ? static_cast<u128>(-scaled) : static_cast<u128>(scaled);
            u128 whole = mag / static_cast<u128>(scale);
            u128 frac = mag % static_cast<u128>(scale);
            std::string fs(static_cast<size_t>(digits), '0');
            for (int k = digits - 1; k >= 0; --k) {
                fs[static_cast<size_t>(k)] = static_cast<char>('0' + static_cast<int>(frac % 10));
                frac /= 10;
            }
            while (!fs.empty() && fs.back() == '0') fs.pop_back();
            std::string ws;
            if (whole == 0) {
                ws = "0";
            } else {
                while (whole > 0) {
                    ws.insert(ws.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
                    whole /= 10;
                }
            }
            std::string out = neg ? "-" : "";
            out += ws;
            if (!fs.empty()) out += "." + fs;
            return out;
        }
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace pde
