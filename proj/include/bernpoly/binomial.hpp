#pragma once

#include <span>
#include <vector>

#include "bernpoly/core.hpp"
#include "bernpoly/measure.hpp"

/** The binomial curve theta -> b(theta) in D_d and the measure profile along it. */
namespace bernpoly {

struct BinomialCurvePoint
{
    double theta;
    SumPmf p;
    LogMeasure log_density;
};

/** b(theta)_k = C(d,k) theta^k (1 - theta)^(d - k). */
SumPmf binomial_pmf(double theta, int d);
ExactSumPmf binomial_pmf(const Rational& theta, int d);

BinomialCurvePoint curve_point(double theta, int d);

/** Law of a sum of independent Bernoulli(theta_i), by sequential convolution. */
SumPmf poisson_binomial_pmf(std::span<const double> theta);
ExactSumPmf poisson_binomial_pmf(std::span<const Rational> theta);

/** Ambient measure of P(b(theta)); zero at theta in {0, 1} once d >= 2. */
LogMeasure curve_log_measure(double theta, int d);

/**
 * Maximizer of curve_log_measure over [0, 1]: scan `grid` equally spaced
 * points, then golden-section search on the bracketing cell.
 */
double curve_argmax(int d, int grid = 1001);

struct BinVsMode
{
    /** d_S(b(1/2), p^M). */
    double d_sup = 0.0;
    /** log l(p^M) - log l(b(1/2)); nonnegative since p^M maximizes l. */
    double log_measure_gap = 0.0;
};

BinVsMode bin_vs_mode(int d);

}   // namespace bernpoly
