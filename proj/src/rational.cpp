#include "mancalog/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace mancalog {

Rational rational_pow(const Rational& base, unsigned long exponent) {
    if (exponent == 0)
        return Rational(1);
    BigInt num = boost::multiprecision::pow(numerator(base), static_cast<unsigned>(exponent));
    BigInt den = boost::multiprecision::pow(denominator(base), static_cast<unsigned>(exponent));
    return Rational(num, den);
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

BigInt digits_to_int(std::string_view s) {
    BigInt v = 0;
    for (char c : s)
        v = v * 10 + (c - '0');
    return v;
}

} // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            return std::nullopt;
        BigInt d = digits_to_int(den);
        if (d == 0)
            return std::nullopt;
        return Rational(digits_to_int(num), d);
    }
    auto dot = text.find('.');
    if (dot != std::string_view::npos) {
        std::string_view whole = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac))
            return std::nullopt;
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
        return Rational(digits_to_int(whole) * scale + digits_to_int(frac), scale);
    }
    if (!all_digits(text))
        return std::nullopt;
    return Rational(digits_to_int(text));
}

std::string to_fraction_string(const Rational& r) {
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string to_decimal_string(const Rational& r, int max_digits) {
    if (r < 0)
        return "-" + to_decimal_string(-r, max_digits);
    BigInt num = numerator(r);
    BigInt den = denominator(r);

    // How many decimal digits make the value exact, if any.
    int exact_digits = 0;
    {
        BigInt d = den;
        while (d % 2 == 0) {
            d /= 2;
            ++exact_digits;
        }
        int fives = 0;
        while (d % 5 == 0) {
            d /= 5;
            ++fives;
        }
        if (d != 1)
            exact_digits = -1;
        else if (fives > exact_digits)
            exact_digits = fives;
    }

    int digits = (exact_digits >= 0 && exact_digits <= max_digits) ? exact_digits : max_digits;
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(digits));
    BigInt scaled2 = num * scale * 2;
    BigInt q = scaled2 / den;
    BigInt rounded = (q + 1) / 2; // round half up on the doubled quotient

    std::string s = rounded.str();
    if (digits == 0)
        return s;
    if (static_cast<int>(s.size()) <= digits)
        s.insert(0, static_cast<size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<size_t>(digits), ".");
    while (s.back() == '0')
        s.pop_back();
    if (s.back() == '.')
        s.pop_back();
    return s;
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

} // namespace mancalog
