#include "qrlab/rational.hpp"

#include <cctype>
#include <cmath>

#include "qrlab/errors.hpp"

namespace qrlab {

BigInt binomial(std::uint64_t n, std::uint64_t m) {
    if (m > n) return 0;
    if (m > n - m) m = n - m;
    BigInt r = 1;
    // r stays integral at every step: after i iterations it equals C(n, i).
    for (std::uint64_t i = 0; i < m; ++i) {
        r *= BigInt(n - i);
        r /= BigInt(i + 1);
    }
    return r;
}

BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt ipow(const BigInt& base, unsigned exp) {
    BigInt r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

Rational rational_pow(const Rational& base, unsigned exp) {
    Rational r = 1, b = base;
    while (exp) {
        if (exp & 1) r *= b;
        b *= b;
        exp >>= 1;
    }
    return r;
}

std::string rational_str(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Parses [sign] digits [. digits] [e|E [sign] digits] exactly.
Rational parse_decimal(const std::string& text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    std::string int_part, frac_part;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) int_part += text[i++];
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) frac_part += text[i++];
    }
    long exp10 = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            eneg = text[i] == '-';
            ++i;
        }
        std::string digits;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
        if (digits.empty() || digits.size() > 6) throw ValidationError("bad exponent in number: " + text);
        exp10 = std::stol(digits);
        if (eneg) exp10 = -exp10;
    }
    if (i != text.size() || (int_part.empty() && frac_part.empty()))
        throw ValidationError("malformed number: " + text);

    BigInt mantissa = 0;
    for (char c : int_part + frac_part) mantissa = mantissa * 10 + (c - '0');
    exp10 -= static_cast<long>(frac_part.size());

    Rational r(mantissa);
    if (exp10 > 0)
        r *= Rational(ipow(10, static_cast<unsigned>(exp10)));
    else if (exp10 < 0)
        r /= Rational(ipow(10, static_cast<unsigned>(-exp10)));
    return neg ? -r : r;
}

} // namespace

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::string num = text.substr(0, slash), den = text.substr(slash + 1);
        bool neg = false;
        if (!num.empty() && (num[0] == '+' || num[0] == '-')) {
            neg = num[0] == '-';
            num = num.substr(1);
        }
        if (!all_digits(num) || !all_digits(den)) throw ValidationError("malformed rational: " + text);
        BigInt n(num), d(den);
        if (d == 0) throw ValidationError("zero denominator: " + text);
        Rational r(n, d);
        return neg ? -r : r;
    }
    return parse_decimal(text);
}

Rational rational_from_float(long double x) {
    if (!std::isfinite(x)) throw ValidationError("non-finite value");
    if (x == 0.0L) return 0;
    int exp = 0;
    long double m = std::frexp(x, &exp); // |m| in [1/2, 1), x = m * 2^exp
    // long double carries at most 64 mantissa bits, so m * 2^64 is integral.
    const std::int64_t hi = static_cast<std::int64_t>(std::ldexp(m, 63));
    BigInt mant(hi);
    mant <<= 1;
    const long double rest = std::ldexp(m, 64) - std::ldexp(static_cast<long double>(hi), 1);
    mant += static_cast<std::int64_t>(rest);
    Rational r(mant);
    int shift = exp - 64;
    if (shift > 0)
        r *= Rational(BigInt(1) << shift);
    else if (shift < 0)
        r /= Rational(BigInt(1) << -shift);
    return r;
}

long double to_float(const Rational& r) {
    return r.convert_to<long double>();
}

long double to_float(const BigInt& n) {
    return n.convert_to<long double>();
}

} // namespace qrlab
