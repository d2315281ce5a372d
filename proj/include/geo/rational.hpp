#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

namespace geo {

/// Exact rational on int64, always normalized (den > 0, gcd(num,den) == 1).
struct Rat {
    long long num = 0;
    long long den = 1;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend Rat operator/(Rat a, Rat b) { return Rat(a.num * b.den, a.den * b.num); }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        long long l = a.num * b.den, r = b.num * a.den;
        return l <=> r;
    }

    double to_double() const { return double(num) / double(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

/// Parses "p", "p/q" or a plain decimal like "22.5" into an exact rational.
std::optional<Rat> parse_rational(const std::string& tok);

}  // namespace geo
