#pragma once

#include <cstdint>

#include "bernpoly/core.hpp"

/**
 * Hausdorff measures of scaled simplices and of P(p), the density l(p) of
 * the measure that the sum map induces on D_d, its Dirichlet normalization,
 * the maximal pmf p^M and the two distances on D_d.
 *
 * Measures are carried in log space: (2^d - 1)! leaves double range at d = 8.
 *
 * Normalization convention: the measure of a set A of sum pmfs is
 * sqrt(2^d) times the Lebesgue integral of l over the coordinates
 * (p_0, ..., p_{d-1}) of A.  With it the whole simplex has measure
 * sqrt(2^d) / (2^d - 1)!, the Hausdorff measure of F_d.
 */
namespace bernpoly {

/** A nonnegative real stored as its natural log, with an explicit zero. */
class LogMeasure
{
    public:
        LogMeasure() = default;

        static LogMeasure zero() { return LogMeasure(0.0, true); }
        static LogMeasure one() { return LogMeasure(0.0, false); }
        static LogMeasure from_log(double log_value) { return LogMeasure(log_value, false); }
        /** Requires value >= 0. */
        static LogMeasure from_value(double value);

        bool is_zero() const { return is_zero_; }
        /** -infinity for zero. */
        double log_value() const;
        /** exp(log_value); may underflow or overflow. */
        double value() const;

        LogMeasure operator*(const LogMeasure& other) const;
        LogMeasure operator/(const LogMeasure& other) const;
        LogMeasure& operator*=(const LogMeasure& other) { return *this = *this * other; }

    private:
        LogMeasure(double log_value, bool is_zero) : log_value_(log_value), is_zero_(is_zero) {}

        double log_value_ = 0.0;
        bool is_zero_ = true;
};

/**
 * H^n of the n-simplex {x in R^{n+1} : x >= 0, sum x = p}: p^n sqrt(n+1) / n!.
 * n = 0 gives 1 for every p (a point), including p = 0.
 */
LogMeasure simplex_hausdorff(std::uint64_t n, double p);

struct PolytopeMeasure
{
    /** Product over every level: zero as soon as an unsupported block has n_k > 0. */
    LogMeasure ambient;
    /** Product over supported levels only. */
    LogMeasure intrinsic;
};

PolytopeMeasure polytope_measure(const SumPmf& p);

/** l(p) = prod_k p_k^{n_k} / n_k!, with 0^0 = 1. */
LogMeasure density_l(const SumPmf& p);

/** sqrt(2^d) / (2^d - 1)!: the integral of l over D_d. */
LogMeasure normalizing_constant(int d);

/** Dirichlet(C(d,0), ..., C(d,d)) density at p w.r.t. Lebesgue on (p_0..p_{d-1}). */
double dirichlet_pdf(const SumPmf& p);
LogMeasure log_dirichlet_pdf(const SumPmf& p);

/**
 * p^M_k = (C(d,k) - 1) / (2^d - d - 1), the mode of that Dirichlet law and
 * the maximizer of the measure of P(p).  Undefined for d < 2.
 */
SumPmf maximal_pmf(int d);
ExactSumPmf exact_maximal_pmf(int d);

/** Half the L1 distance. */
double dist_tv(const SumPmf& p, const SumPmf& q);
/** Max coordinate gap. */
double dist_sup(const SumPmf& p, const SumPmf& q);

}   // namespace bernpoly
