#include "driftgreen/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace driftgreen {

namespace {

BigInt parse_digits(std::string_view digits)
{
    BigInt value = 0;
    for (char c : digits) {
        value *= 10;
        value += c - '0';
    }
    return value;
}

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

[[noreturn]] void bad(std::string_view text)
{
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        s = s.substr(0, e);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part) || exp_part.size() > 6)
            bad(text);
        exponent = std::stol(std::string(exp_part));
        if (exp_negative)
            exponent = -exponent;
    }

    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty())
        bad(text);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
        bad(text);

    BigInt mantissa = parse_digits(std::string(int_part) + std::string(frac_part));
    exponent -= static_cast<long>(frac_part.size());

    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exponent)));
    Rational q = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
    return negative ? Rational(-q) : q;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty())
        bad(text);

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_decimal(text.substr(0, slash));
        Rational den = parse_decimal(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return parse_decimal(text);
}

Rational rational_from_double(double value)
{
    if (!std::isfinite(value))
        throw std::invalid_argument("cannot convert a non-finite double to a rational");
    if (value == 0.0)
        return Rational(0);
    int exp = 0;
    double frac = std::frexp(value, &exp); // value = frac * 2^exp, 0.5 <= |frac| < 1
    auto mant = static_cast<long long>(std::ldexp(frac, 53));
    exp -= 53;
    BigInt num = mant;
    if (exp >= 0)
        return Rational(num << exp);
    return Rational(num, BigInt(1) << -exp);
}

std::string to_string(const Rational& q)
{
    return q.str();
}

} // namespace driftgreen
