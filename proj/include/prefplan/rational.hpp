#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace prefplan {

/// Exact rational number. Transition probabilities are kept exact so that
/// validation and canonical file output never depend on floating point.
/// The qualitative algorithms only ever look at supports.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }
    explicit Rational(long long n) : num(n), den(1) {}

    void normalize() {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    bool is_zero() const { return num == 0; }
    bool is_one() const { return num == 1 && den == 1; }
    bool positive() const { return num > 0; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rational operator+(const Rational& o) const {
        __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
        __int128 d = static_cast<__int128>(den) * o.den;
        return from_wide(n, d);
    }
    Rational operator-(const Rational& o) const {
        __int128 n = static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den;
        __int128 d = static_cast<__int128>(den) * o.den;
        return from_wide(n, d);
    }
    Rational operator*(const Rational& o) const {
        __int128 n = static_cast<__int128>(num) * o.num;
        __int128 d = static_cast<__int128>(den) * o.den;
        return from_wide(n, d);
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
    }
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }

    /// Canonical form "p/q" in lowest terms, e.g. "1/2", "1/1".
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    /// Accepts "p/q" or a plain decimal like "0.5", ".25", "1".
    static Rational parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("empty probability string");
        auto slash = s.find('/');
        try {
            if (slash != std::string::npos) {
                long long p = std::stoll(s.substr(0, slash));
                long long q = std::stoll(s.substr(slash + 1));
                return Rational(p, q);
            }
            auto dot = s.find('.');
            if (dot == std::string::npos) return Rational(std::stoll(s));
            std::string whole = s.substr(0, dot);
            std::string frac = s.substr(dot + 1);
            if (frac.size() > 17) frac = frac.substr(0, 17);
            long long w = whole.empty() ? 0 : std::stoll(whole);
            long long f = frac.empty() ? 0 : std::stoll(frac);
            long long d = 1;
            for (size_t i = 0; i < frac.size(); ++i) d *= 10;
            return Rational(w) + Rational(f, d);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("cannot parse probability '" + s + "'");
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("probability out of range '" + s + "'");
        }
    }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num = static_cast<long long>(n);
        r.den = static_cast<long long>(d);
        return r;
    }
};

} // namespace prefplan
