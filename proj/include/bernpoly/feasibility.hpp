#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bernpoly/core.hpp"

/**
 * P(p, theta): members of P(p) whose coordinate means equal theta.  All
 * decisions here are made in exact rational arithmetic.
 */
namespace bernpoly {

/** feasible_point works on a dense variable vector of size 2^d. */
inline constexpr int kMaxFeasibleDimension = 12;
/** Vertex enumeration walks the basis graph; combinatorial beyond d = 5. */
inline constexpr int kMaxVertexDimension = 5;

/** Coordinate means (theta_1, ..., theta_d), each in [0, 1]. */
class MeanVector
{
    public:
        explicit MeanVector(std::vector<Rational> theta);

        /** Rationalizes each entry (0.25 -> 1/4). */
        static MeanVector from_doubles(std::span<const double> theta, double tol = 1e-12);

        int dimension() const { return static_cast<int>(theta_.size()); }
        std::span<const Rational> values() const { return theta_; }
        const Rational& operator[](int i) const { return theta_[static_cast<std::size_t>(i)]; }
        Rational sum() const;

    private:
        std::vector<Rational> theta_;
};

struct NecessaryConditions
{
    bool mean_ok = false;   ///< sum theta_i == mean(p)
    /**
     * p_d <= theta_i <= 1 - p_0 for every i: the order-1 moment bounds.
     * For symmetric p this is p_d <= theta_i <= 1 - p_d.
     */
    bool box_ok = false;
};

NecessaryConditions necessary_conditions(const ExactSumPmf& p, const MeanVector& theta);
NecessaryConditions necessary_conditions(const SumPmf& p, std::span<const double> theta,
                                         double tol = 1e-12);

/**
 * Equality system over the 2^d variables f(x), f >= 0:
 *   rows 0..d       sum_{x in chi_k} f(x) = p_k
 *   rows d+1..2d    sum_{x : x_i = 1} f(x) = theta_i
 */
struct ConstraintSystem
{
    int dimension = 0;
    std::vector<std::vector<Rational>> matrix;
    std::vector<Rational> rhs;

    static ConstraintSystem build(const ExactSumPmf& p, const MeanVector& theta);

    /**
     * The homogeneous normalized form: for each level k,
     * (1 - p_k) sum_{chi_k} f - p_k sum_{not chi_k} f = 0, for each i,
     * (1 - theta_i) sum_{x_i=1} f - theta_i sum_{x_i=0} f = 0, plus sum f = 1.
     */
    static ConstraintSystem homogeneous(const ExactSumPmf& p, const MeanVector& theta);

    bool satisfied_by(const ExactJointPmf& f) const;
};

/**
 * Some member of P(p, theta), or nullopt when the class is empty.  Uses the
 * exchangeable pmf when it qualifies, otherwise an exact phase-1 simplex
 * (Bland's rule).  Requires d <= 12.
 */
std::optional<ExactJointPmf> feasible_point(const ExactSumPmf& p, const MeanVector& theta);

/**
 * Every vertex of P(p, theta), deduplicated, sorted lexicographically by the
 * value vector.  Empty when infeasible.  Requires d <= 5.
 */
std::vector<ExactJointPmf> constrained_vertices(const ExactSumPmf& p, const MeanVector& theta);

/**
 * (min, max) of E[prod_{j in J} X_j] over P(p, theta).  Moments are linear
 * in f, so the extremes are attained at vertices.  Throws Infeasible when
 * P(p, theta) is empty.
 */
std::pair<Rational, Rational> constrained_moment_bounds(const ExactSumPmf& p, const MeanVector& theta,
                                                        std::span<const int> subset);

}   // namespace bernpoly
