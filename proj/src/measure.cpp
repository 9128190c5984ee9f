#include "bernpoly/measure.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bernpoly {

namespace {

double lfactorial(std::uint64_t n)
{
    return std::lgamma(static_cast<double>(n) + 1.0);
}

void check_same_dimension(const SumPmf& p, const SumPmf& q)
{
    if (p.dimension() != q.dimension())
        throw DimensionMismatch("pmfs on {0,...,d} with different d");
}

/** log(p^n / n!) with 0^0 = 1; nullopt encodes zero. */
std::optional<double> log_power_over_factorial(double p, std::uint64_t n)
{
    if (n == 0)
        return 0.0;
    if (p <= 0.0)
        return std::nullopt;
    return static_cast<double>(n) * std::log(p) - lfactorial(n);
}

}   // namespace

LogMeasure LogMeasure::from_value(double value)
{
    if (!(value >= 0.0))
        throw InvalidArgument("LogMeasure: negative or NaN value");
    if (value == 0.0)
        return zero();
    return from_log(std::log(value));
}

double LogMeasure::log_value() const
{
    return is_zero_ ? -std::numeric_limits<double>::infinity() : log_value_;
}

double LogMeasure::value() const
{
    return is_zero_ ? 0.0 : std::exp(log_value_);
}

LogMeasure LogMeasure::operator*(const LogMeasure& other) const
{
    if (is_zero_ || other.is_zero_)
        return zero();
    return from_log(log_value_ + other.log_value_);
}

LogMeasure LogMeasure::operator/(const LogMeasure& other) const
{
    if (other.is_zero_)
        throw InvalidArgument("LogMeasure: division by zero");
    if (is_zero_)
        return zero();
    return from_log(log_value_ - other.log_value_);
}

LogMeasure simplex_hausdorff(std::uint64_t n, double p)
{
    if (!(p >= 0.0))
        throw InvalidArgument("simplex_hausdorff: side parameter must be >= 0");
    if (n == 0)
        return LogMeasure::one();
    const auto base = log_power_over_factorial(p, n);
    if (!base)
        return LogMeasure::zero();
    return LogMeasure::from_log(*base + 0.5 * std::log(static_cast<double>(n) + 1.0));
}

PolytopeMeasure polytope_measure(const SumPmf& p)
{
    const int d = p.dimension();
    PolytopeMeasure m{LogMeasure::one(), LogMeasure::one()};
    for (int k = 0; k <= d; ++k) {
        const LogMeasure block = simplex_hausdorff(binomial_u64(d, k) - 1, p[k]);
        m.ambient *= block;
        if (p.supports(k))
            m.intrinsic *= block;
    }
    return m;
}

LogMeasure density_l(const SumPmf& p)
{
    const int d = p.dimension();
    double total = 0.0;
    for (int k = 0; k <= d; ++k) {
        const auto term = log_power_over_factorial(p[k], binomial_u64(d, k) - 1);
        if (!term)
            return LogMeasure::zero();
        total += *term;
    }
    return LogMeasure::from_log(total);
}

LogMeasure normalizing_constant(int d)
{
    check_sparse_dimension(d);
    const double two_d = std::ldexp(1.0, d);
    return LogMeasure::from_log(0.5 * d * std::log(2.0) - std::lgamma(two_d));
}

LogMeasure log_dirichlet_pdf(const SumPmf& p)
{
    const int d = p.dimension();
    double total = std::lgamma(std::ldexp(1.0, d));
    for (int k = 0; k <= d; ++k) {
        const std::uint64_t alpha = binomial_u64(d, k);
        total -= lfactorial(alpha - 1);
        if (alpha == 1)
            continue;
        if (p[k] <= 0.0)
            return LogMeasure::zero();
        total += static_cast<double>(alpha - 1) * std::log(p[k]);
    }
    return LogMeasure::from_log(total);
}

double dirichlet_pdf(const SumPmf& p)
{
    return log_dirichlet_pdf(p).value();
}

SumPmf maximal_pmf(int d)
{
    if (d < 2)
        throw Unsupported("maximal pmf is undefined for d < 2: every P(p) is a single point");
    check_sparse_dimension(d);
    const double denom = std::ldexp(1.0, d) - d - 1.0;
    std::vector<double> p;
    for (int k = 0; k <= d; ++k)
        p.push_back(static_cast<double>(binomial_u64(d, k) - 1) / denom);
    return SumPmf(std::move(p));
}

ExactSumPmf exact_maximal_pmf(int d)
{
    if (d < 2)
        throw Unsupported("maximal pmf is undefined for d < 2: every P(p) is a single point");
    check_sparse_dimension(d);
    const BigInt denom = (BigInt(1) << d) - d - 1;
    std::vector<Rational> p;
    for (int k = 0; k <= d; ++k)
        p.emplace_back(binomial_coefficient(d, k) - 1, denom);
    return ExactSumPmf(std::move(p));
}

double dist_tv(const SumPmf& p, const SumPmf& q)
{
    check_same_dimension(p, q);
    double total = 0.0;
    for (int k = 0; k <= p.dimension(); ++k)
        total += std::abs(p[k] - q[k]);
    return 0.5 * total;
}

double dist_sup(const SumPmf& p, const SumPmf& q)
{
    check_same_dimension(p, q);
    double gap = 0.0;
    for (int k = 0; k <= p.dimension(); ++k)
        gap = std::max(gap, std::abs(p[k] - q[k]));
    return gap;
}

}   // namespace bernpoly
