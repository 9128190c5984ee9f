#include "bernpoly/rational.hpp"

#include <cctype>
#include <cmath>

#include "bernpoly/error.hpp"

namespace bernpoly {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

/** Decimal digits without leading zeros; a leading 0 would read as octal. */
BigInt decimal_integer(std::string_view digits)
{
    while (digits.size() > 1 && digits.front() == '0')
        digits.remove_prefix(1);
    return BigInt(std::string(digits));
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

BigInt parse_integer(std::string_view s, std::string_view original)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw InvalidArgument("malformed rational '" + std::string(original) + "'");
    BigInt v = decimal_integer(s);
    return negative ? BigInt(-v) : v;
}

BigInt pow10(long e)
{
    BigInt r = 1;
    for (long i = 0; i < e; ++i)
        r *= 10;
    return r;
}

Rational parse_decimal(std::string_view s, std::string_view original)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    const auto epos = s.find_first_of("eE");
    if (epos != std::string_view::npos) {
        const BigInt e = parse_integer(s.substr(epos + 1), original);
        if (abs(e) > 4096)
            throw InvalidArgument("exponent out of range in '" + std::string(original) + "'");
        exponent = e.convert_to<long>();
        s = s.substr(0, epos);
    }
    std::string digits;
    const auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        digits = std::string(s);
    } else {
        digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
        exponent -= static_cast<long>(s.size() - dot - 1);
    }
    if (!all_digits(digits))
        throw InvalidArgument("malformed rational '" + std::string(original) + "'");
    BigInt mantissa = decimal_integer(digits);
    if (negative)
        mantissa = -mantissa;
    if (exponent >= 0)
        return Rational(mantissa * pow10(exponent));
    return Rational(mantissa, pow10(-exponent));
}

}   // namespace

Rational parse_rational(std::string_view text)
{
    const std::string_view s = trim(text);
    if (s.empty())
        throw InvalidArgument("empty rational");
    const auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        const BigInt num = parse_integer(trim(s.substr(0, slash)), text);
        const BigInt den = parse_integer(trim(s.substr(slash + 1)), text);
        if (den == 0)
            throw InvalidArgument("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    return parse_decimal(s, text);
}

std::string to_string(const Rational& value)
{
    return numerator(value).str() + "/" + denominator(value).str();
}

double to_double(const Rational& value)
{
    return value.convert_to<double>();
}

Rational rationalize(double x, double tol)
{
    if (!std::isfinite(x))
        throw InvalidArgument("cannot rationalize a non-finite value");
    if (x < 0)
        return -rationalize(-x, tol);
    const Rational target(x);
    const Rational eps(tol);
    auto close = [&](const BigInt& h, const BigInt& k) {
        return abs(Rational(h, k) - target) <= eps;
    };

    // Continued-fraction convergents h/k of the exact binary value of x.
    BigInt h_prev2 = 0, h_prev = 1, k_prev2 = 1, k_prev = 0;
    Rational rest = target;
    while (true) {
        const BigInt a = numerator(rest) / denominator(rest);
        const BigInt h = a * h_prev + h_prev2;
        const BigInt k = a * k_prev + k_prev2;
        if (close(h, k)) {
            // The smallest denominator may be a semiconvergent
            // (h_prev2 + m h_prev) / (k_prev2 + m k_prev) with m < a.
            if (a == 0)
                return Rational(h, k);
            BigInt lo = 1, hi = a;
            while (lo < hi) {
                const BigInt mid = (lo + hi) / 2;
                if (close(mid * h_prev + h_prev2, mid * k_prev + k_prev2))
                    hi = mid;
                else
                    lo = mid + 1;
            }
            return Rational(lo * h_prev + h_prev2, lo * k_prev + k_prev2);
        }
        const Rational frac = rest - Rational(a);
        if (frac == 0)
            return Rational(h, k);
        rest = 1 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }
}

}   // namespace bernpoly
