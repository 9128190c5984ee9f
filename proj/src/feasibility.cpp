#include "bernpoly/feasibility.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <string>

#include "bernpoly/polytope.hpp"

namespace bernpoly {

namespace {

void check_dimensions(const ExactSumPmf& p, const MeanVector& theta)
{
    if (p.dimension() != theta.dimension())
        throw DimensionMismatch("theta has " + std::to_string(theta.dimension())
                                + " entries but p has dimension " + std::to_string(p.dimension()));
}

using Row = std::vector<Rational>;

/** Dense simplex tableau for A x = b, x >= 0 with an explicit basis. */
struct Tableau
{
    std::vector<Row> a;
    std::vector<Rational> b;
    std::vector<std::size_t> basis;
    Row cost;                  // reduced costs (phase 1 only)
    Rational objective = 0;    // current objective value, negated

    std::size_t rows() const { return a.size(); }
    std::size_t cols() const { return a.empty() ? 0 : a.front().size(); }

    void pivot(std::size_t r, std::size_t c)
    {
        const Rational piv = a[r][c];
        for (auto& v : a[r])
            v /= piv;
        b[r] /= piv;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            const Rational factor = a[i][c];
            for (std::size_t j = 0; j < cols(); ++j)
                if (a[r][j] != 0)
                    a[i][j] -= factor * a[r][j];
            b[i] -= factor * b[r];
        }
        if (!cost.empty() && cost[c] != 0) {
            const Rational factor = cost[c];
            for (std::size_t j = 0; j < cols(); ++j)
                if (a[r][j] != 0)
                    cost[j] -= factor * a[r][j];
            objective -= factor * b[r];
        }
        basis[r] = c;
    }

    /** Leaving row for entering column c by the ratio test, Bland tie-break. */
    std::optional<std::size_t> ratio_row(std::size_t c) const
    {
        std::optional<std::size_t> best;
        Rational best_ratio;
        for (std::size_t i = 0; i < rows(); ++i) {
            if (a[i][c] <= 0)
                continue;
            const Rational ratio = b[i] / a[i][c];
            if (!best || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[*best])) {
                best = i;
                best_ratio = ratio;
            }
        }
        return best;
    }
};

/**
 * The constraint system restricted to variables that are not forced to zero:
 * levels with p_k = 0, and coordinates pinned by theta_i in {0, 1}.
 */
struct ReducedSystem
{
    std::vector<Index> columns;   // original index of each kept variable
    std::vector<Row> a;
    std::vector<Rational> b;
    Index full_size = 0;
};

ReducedSystem reduce(const ExactSumPmf& p, const MeanVector& theta)
{
    const ConstraintSystem sys = ConstraintSystem::build(p, theta);
    const int d = p.dimension();
    ReducedSystem red;
    red.full_size = Index{1} << d;
    for (Index x = 0; x < red.full_size; ++x) {
        bool alive = p.supports(popcount(x));
        for (int i = 0; i < d && alive; ++i) {
            const bool bit = (x >> i) & 1U;
            if ((bit && theta[i] == 0) || (!bit && theta[i] == 1))
                alive = false;
        }
        if (alive)
            red.columns.push_back(x);
    }
    for (std::size_t r = 0; r < sys.matrix.size(); ++r) {
        Row row;
        row.reserve(red.columns.size());
        for (Index x : red.columns)
            row.push_back(sys.matrix[r][x]);
        red.a.push_back(std::move(row));
        red.b.push_back(sys.rhs[r]);
    }
    return red;
}

/**
 * Phase 1 with one artificial per row.  On success returns a tableau over
 * the original columns only, with redundant rows removed.
 */
std::optional<Tableau> phase_one(const ReducedSystem& sys)
{
    const std::size_t m = sys.a.size();
    const std::size_t n = sys.columns.size();
    Tableau t;
    t.a.assign(m, Row(n + m, Rational(0)));
    t.b = sys.b;
    t.basis.resize(m);
    t.cost.assign(n + m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            t.a[i][j] = sys.a[i][j];
        t.a[i][n + i] = 1;
        t.basis[i] = n + i;
        // rhs is nonnegative (probabilities and means)
        for (std::size_t j = 0; j < n; ++j)
            t.cost[j] -= t.a[i][j];
        t.objective -= t.b[i];
    }

    while (true) {
        std::optional<std::size_t> entering;
        for (std::size_t j = 0; j < n + m; ++j)
            if (t.cost[j] < 0) {
                entering = j;
                break;
            }
        if (!entering)
            break;
        const auto leaving = t.ratio_row(*entering);
        if (!leaving)
            throw Error("phase one: unbounded direction in a bounded problem");
        t.pivot(*leaving, *entering);
    }
    if (t.objective != 0)
        return std::nullopt;

    // Drive remaining artificials out of the basis; rows where that is
    // impossible are linear combinations of the others.
    std::vector<bool> keep(m, true);
    for (std::size_t i = 0; i < m; ++i) {
        if (t.basis[i] < n)
            continue;
        std::optional<std::size_t> col;
        for (std::size_t j = 0; j < n; ++j)
            if (t.a[i][j] != 0) {
                col = j;
                break;
            }
        if (col)
            t.pivot(i, *col);
        else
            keep[i] = false;
    }
    Tableau out;
    for (std::size_t i = 0; i < m; ++i) {
        if (!keep[i])
            continue;
        out.a.emplace_back(t.a[i].begin(), t.a[i].begin() + static_cast<std::ptrdiff_t>(n));
        out.b.push_back(t.b[i]);
        out.basis.push_back(t.basis[i]);
    }
    return out;
}

std::vector<Rational> basic_solution(const Tableau& t, const ReducedSystem& sys)
{
    std::vector<Rational> x(sys.full_size, Rational(0));
    for (std::size_t i = 0; i < t.rows(); ++i)
        x[sys.columns[t.basis[i]]] = t.b[i];
    return x;
}

std::vector<std::size_t> basis_key(const Tableau& t)
{
    std::vector<std::size_t> key = t.basis;
    std::sort(key.begin(), key.end());
    return key;
}

constexpr std::size_t kMaxBasisVisits = 2'000'000;

}   // namespace

MeanVector::MeanVector(std::vector<Rational> theta) : theta_(std::move(theta))
{
    if (theta_.empty())
        throw InvalidArgument("theta must have at least one entry");
    for (const auto& t : theta_)
        if (t < 0 || t > 1)
            throw OutOfRange("every theta_i must lie in [0, 1]");
}

MeanVector MeanVector::from_doubles(std::span<const double> theta, double tol)
{
    std::vector<Rational> v;
    for (double t : theta)
        v.push_back(rationalize(t, tol));
    return MeanVector(std::move(v));
}

Rational MeanVector::sum() const
{
    Rational s = 0;
    for (const auto& t : theta_)
        s += t;
    return s;
}

NecessaryConditions necessary_conditions(const ExactSumPmf& p, const MeanVector& theta)
{
    check_dimensions(p, theta);
    NecessaryConditions out;
    out.mean_ok = theta.sum() == p.mean();
    const Rational& top = p[p.dimension()];
    const Rational& bottom = p[0];
    out.box_ok = std::all_of(theta.values().begin(), theta.values().end(),
                             [&](const Rational& t) { return top <= t && t <= 1 - bottom; });
    return out;
}

NecessaryConditions necessary_conditions(const SumPmf& p, std::span<const double> theta, double tol)
{
    if (static_cast<int>(theta.size()) != p.dimension())
        throw DimensionMismatch("theta length differs from d");
    NecessaryConditions out;
    double sum = 0.0;
    for (double t : theta)
        sum += t;
    out.mean_ok = std::abs(sum - p.mean()) <= tol;
    const double top = p[p.dimension()];
    const double bottom = p[0];
    out.box_ok = std::all_of(theta.begin(), theta.end(),
                             [&](double t) { return top - tol <= t && t <= 1.0 - bottom + tol; });
    return out;
}

ConstraintSystem ConstraintSystem::build(const ExactSumPmf& p, const MeanVector& theta)
{
    check_dimensions(p, theta);
    const int d = p.dimension();
    check_dense_dimension(d);
    const Index n = Index{1} << d;
    ConstraintSystem sys;
    sys.dimension = d;
    sys.matrix.assign(static_cast<std::size_t>(2 * d + 1), Row(n, Rational(0)));
    for (int k = 0; k <= d; ++k)
        sys.rhs.push_back(p[k]);
    for (int i = 0; i < d; ++i)
        sys.rhs.push_back(theta[i]);
    for (Index x = 0; x < n; ++x) {
        sys.matrix[static_cast<std::size_t>(popcount(x))][x] = 1;
        for (int i = 0; i < d; ++i)
            if ((x >> i) & 1U)
                sys.matrix[static_cast<std::size_t>(d + 1 + i)][x] = 1;
    }
    return sys;
}

ConstraintSystem ConstraintSystem::homogeneous(const ExactSumPmf& p, const MeanVector& theta)
{
    check_dimensions(p, theta);
    const int d = p.dimension();
    check_dense_dimension(d);
    const Index n = Index{1} << d;
    ConstraintSystem sys;
    sys.dimension = d;
    sys.matrix.assign(static_cast<std::size_t>(2 * d + 2), Row(n, Rational(0)));
    sys.rhs.assign(static_cast<std::size_t>(2 * d + 2), Rational(0));
    for (Index x = 0; x < n; ++x) {
        const int level = popcount(x);
        for (int k = 0; k <= d; ++k)
            sys.matrix[static_cast<std::size_t>(k)][x] = level == k ? Rational(1 - p[k]) : Rational(-p[k]);
        for (int i = 0; i < d; ++i) {
            const bool bit = (x >> i) & 1U;
            sys.matrix[static_cast<std::size_t>(d + 1 + i)][x] = bit ? Rational(1 - theta[i]) : Rational(-theta[i]);
        }
        sys.matrix.back()[x] = 1;
    }
    sys.rhs.back() = 1;
    return sys;
}

bool ConstraintSystem::satisfied_by(const ExactJointPmf& f) const
{
    if (f.dimension() != dimension)
        throw DimensionMismatch("pmf dimension differs from the constraint system");
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        Rational lhs = 0;
        for (Index x = 0; x < f.size(); ++x)
            if (f[x] != 0)
                lhs += matrix[r][x] * f[x];
        if (lhs != rhs[r])
            return false;
    }
    return true;
}

std::optional<ExactJointPmf> feasible_point(const ExactSumPmf& p, const MeanVector& theta)
{
    check_dimensions(p, theta);
    const int d = p.dimension();
    if (d > kMaxFeasibleDimension)
        throw GuardExceeded("feasible_point is limited to d <= " + std::to_string(kMaxFeasibleDimension));

    const Rational common = p.mean() / d;
    if (std::all_of(theta.values().begin(), theta.values().end(),
                    [&](const Rational& t) { return t == common; }))
        return exchangeable_pmf(p);

    const ReducedSystem sys = reduce(p, theta);
    const auto tableau = phase_one(sys);
    if (!tableau)
        return std::nullopt;
    return ExactJointPmf(d, basic_solution(*tableau, sys));
}

std::vector<ExactJointPmf> constrained_vertices(const ExactSumPmf& p, const MeanVector& theta)
{
    check_dimensions(p, theta);
    const int d = p.dimension();
    if (d > kMaxVertexDimension)
        throw GuardExceeded("constrained_vertices is limited to d <= " + std::to_string(kMaxVertexDimension));

    const ReducedSystem sys = reduce(p, theta);
    auto start = phase_one(sys);
    if (!start)
        return {};

    // Breadth-first walk over feasible bases; all pivots, including
    // degenerate ones, so the basis graph is connected.
    std::set<std::vector<std::size_t>> seen;
    std::set<std::vector<Rational>> vertices;
    std::deque<Tableau> queue;
    seen.insert(basis_key(*start));
    queue.push_back(std::move(*start));
    while (!queue.empty()) {
        Tableau t = std::move(queue.front());
        queue.pop_front();
        vertices.insert(basic_solution(t, sys));

        std::vector<bool> is_basic(t.cols(), false);
        for (auto c : t.basis)
            is_basic[c] = true;
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (is_basic[j])
                continue;
            std::optional<Rational> min_ratio;
            for (std::size_t i = 0; i < t.rows(); ++i) {
                if (t.a[i][j] <= 0)
                    continue;
                const Rational ratio = t.b[i] / t.a[i][j];
                if (!min_ratio || ratio < *min_ratio)
                    min_ratio = ratio;
            }
            if (!min_ratio)
                continue;
            for (std::size_t i = 0; i < t.rows(); ++i) {
                if (t.a[i][j] <= 0 || t.b[i] / t.a[i][j] != *min_ratio)
                    continue;
                std::vector<std::size_t> key = t.basis;
                key[i] = j;
                std::sort(key.begin(), key.end());
                if (!seen.insert(std::move(key)).second)
                    continue;
                if (seen.size() > kMaxBasisVisits)
                    throw GuardExceeded("constrained_vertices: basis graph too large");
                Tableau next = t;
                next.pivot(i, j);
                queue.push_back(std::move(next));
            }
        }
    }

    std::vector<ExactJointPmf> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices)
        out.emplace_back(d, v);
    return out;
}

std::pair<Rational, Rational> constrained_moment_bounds(const ExactSumPmf& p, const MeanVector& theta,
                                                        std::span<const int> subset)
{
    coordinate_mask(subset, p.dimension());
    const auto vertices = constrained_vertices(p, theta);
    if (vertices.empty())
        throw Infeasible("P(p, theta) is empty: no moment bounds exist");
    Rational lo = cross_moment(vertices.front(), subset);
    Rational hi = lo;
    for (const auto& v : vertices) {
        const Rational m = cross_moment(v, subset);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    return {lo, hi};
}

}   // namespace bernpoly
