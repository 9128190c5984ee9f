#include "bernpoly/binomial.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bernpoly {

namespace {

void check_theta(double theta)
{
    if (!(theta >= 0.0 && theta <= 1.0))
        throw OutOfRange("theta must lie in [0, 1]");
}

void check_curve_dimension(int d)
{
    if (d < 2)
        throw Unsupported("the measure along the binomial curve is constant for d < 2");
    check_sparse_dimension(d);
}

/** Neumaier-compensated accumulator. */
struct CompensatedSum
{
    double sum = 0.0;
    double carry = 0.0;

    void add(double v)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

}   // namespace

SumPmf binomial_pmf(double theta, int d)
{
    check_theta(theta);
    check_sparse_dimension(d);
    std::vector<double> p(static_cast<std::size_t>(d) + 1, 0.0);
    if (theta == 0.0) {
        p.front() = 1.0;
    } else if (theta == 1.0) {
        p.back() = 1.0;
    } else {
        const double lt = std::log(theta);
        const double lu = std::log1p(-theta);
        for (int k = 0; k <= d; ++k)
            p[static_cast<std::size_t>(k)] = std::exp(log_binomial(d, k) + k * lt + (d - k) * lu);
    }
    return SumPmf(std::move(p));
}

ExactSumPmf binomial_pmf(const Rational& theta, int d)
{
    if (theta < 0 || theta > 1)
        throw OutOfRange("theta must lie in [0, 1]");
    check_sparse_dimension(d);
    std::vector<Rational> p;
    for (int k = 0; k <= d; ++k) {
        Rational v = Rational(binomial_coefficient(d, k));
        for (int i = 0; i < k; ++i)
            v *= theta;
        for (int i = k; i < d; ++i)
            v *= 1 - theta;
        p.push_back(v);
    }
    return ExactSumPmf(std::move(p));
}

BinomialCurvePoint curve_point(double theta, int d)
{
    SumPmf p = binomial_pmf(theta, d);
    LogMeasure l = density_l(p);
    return {theta, std::move(p), l};
}

SumPmf poisson_binomial_pmf(std::span<const double> theta)
{
    if (theta.empty())
        throw InvalidArgument("Poisson-binomial needs at least one theta");
    for (double t : theta)
        check_theta(t);
    std::vector<double> p{1.0};
    for (double t : theta) {
        std::vector<double> next(p.size() + 1, 0.0);
        for (std::size_t k = 0; k < next.size(); ++k) {
            CompensatedSum acc;
            if (k < p.size())
                acc.add(p[k] * (1.0 - t));
            if (k > 0)
                acc.add(p[k - 1] * t);
            next[k] = acc.value();
        }
        p = std::move(next);
    }
    CompensatedSum total;
    for (double v : p)
        total.add(v);
    for (auto& v : p)
        v /= total.value();
    return SumPmf(std::move(p));
}

ExactSumPmf poisson_binomial_pmf(std::span<const Rational> theta)
{
    if (theta.empty())
        throw InvalidArgument("Poisson-binomial needs at least one theta");
    std::vector<Rational> p{Rational(1)};
    for (const auto& t : theta) {
        if (t < 0 || t > 1)
            throw OutOfRange("theta must lie in [0, 1]");
        std::vector<Rational> next(p.size() + 1, Rational(0));
        for (std::size_t k = 0; k < p.size(); ++k) {
            next[k] += p[k] * (1 - t);
            next[k + 1] += p[k] * t;
        }
        p = std::move(next);
    }
    return ExactSumPmf(std::move(p));
}

LogMeasure curve_log_measure(double theta, int d)
{
    check_theta(theta);
    check_sparse_dimension(d);
    const bool interior = theta > 0.0 && theta < 1.0;
    const double lt = interior ? std::log(theta) : 0.0;
    const double lu = interior ? std::log1p(-theta) : 0.0;
    double total = 0.0;
    for (int k = 0; k <= d; ++k) {
        const std::uint64_t n = binomial_u64(d, k) - 1;
        if (n == 0)
            continue;
        if (!interior)
            return LogMeasure::zero();
        const double nk = static_cast<double>(n);
        total += nk * (log_binomial(d, k) + k * lt + (d - k) * lu)
            + 0.5 * std::log(nk + 1.0) - std::lgamma(nk + 1.0);
    }
    return LogMeasure::from_log(total);
}

double curve_argmax(int d, int grid)
{
    check_curve_dimension(d);
    if (grid < 3)
        throw InvalidArgument("curve_argmax needs a grid of at least 3 points");
    // log measure(t) - log measure(1/2), written with log1p so that values
    // near the optimum keep full relative precision; the maximizer is the
    // same as for curve_log_measure itself.
    auto f = [d](double t) {
        if (t <= 0.0 || t >= 1.0)
            return -std::numeric_limits<double>::infinity();
        const double up = std::log1p(2.0 * t - 1.0);
        const double down = std::log1p(1.0 - 2.0 * t);
        double total = 0.0;
        for (int k = 0; k <= d; ++k) {
            const auto n = static_cast<double>(binomial_u64(d, k) - 1);
            total += n * (k * up + (d - k) * down);
        }
        return total;
    };

    int best = 1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid - 1; ++i) {
        const double v = f(static_cast<double>(i) / (grid - 1));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double a = static_cast<double>(best - 1) / (grid - 1);
    double b = static_cast<double>(best + 1) / (grid - 1);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double e = a + inv_phi * (b - a);
    double fc = f(c), fe = f(e);
    while (b - a > 1e-10) {
        if (fc >= fe) {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = f(e);
        }
    }
    return 0.5 * (a + b);
}

BinVsMode bin_vs_mode(int d)
{
    check_curve_dimension(d);
    const SumPmf b = binomial_pmf(0.5, d);
    const SumPmf mode = maximal_pmf(d);
    BinVsMode out;
    out.d_sup = dist_sup(b, mode);
    // The gap is sum_k n_k log(p^M_k / b_k); the factorials cancel.  Each
    // ratio is 1 + ((d+1) C(d,k) - 2^d) / (C(d,k) (2^d - d - 1)), evaluated
    // with an exact integer numerator and log1p.
    const auto two_d = static_cast<__int128>(1) << d;
    const double big_n = static_cast<double>(two_d - d - 1);
    double gap = 0.0;
    for (int k = 0; k <= d; ++k) {
        const std::uint64_t c = binomial_u64(d, k);
        if (c == 1)
            continue;
        const auto num = static_cast<__int128>(d + 1) * c - two_d;
        gap += static_cast<double>(c - 1)
            * std::log1p(static_cast<double>(num) / (static_cast<double>(c) * big_n));
    }
    out.log_measure_gap = gap;
    return out;
}

}   // namespace bernpoly
