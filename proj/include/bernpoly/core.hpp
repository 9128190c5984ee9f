#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bernpoly/error.hpp"
#include "bernpoly/rational.hpp"

/**
 * Vocabulary shared by every module: binary-vector indexing over {0,1}^d,
 * pmfs on {0,...,d} (sum laws) and on {0,1}^d (joint laws), the sum map,
 * cross moments and Shannon entropy.
 *
 * Binary vectors are ordered reverse-lexicographically: index i encodes the
 * vector x with x_j equal to bit (j - 1) of i, so that for d = 3 the order
 * is 000, 100, 010, 110, 001, 101, 011, 111.
 */
namespace bernpoly {

/** Dense joint pmfs (2^d entries) are refused above this dimension. */
inline constexpr int kMaxDenseDimension = 20;
/** Sparse objects address {0,1}^d with 64-bit indices. */
inline constexpr int kMaxSparseDimension = 62;
/** Tolerance on the total mass of floating-point pmfs. */
inline constexpr double kProbabilityTolerance = 1e-12;

using Index = std::uint64_t;
using BinaryVector = std::vector<std::uint8_t>;

// ---------------------------------------------------------------------------
// Indexing
// ---------------------------------------------------------------------------

void check_dense_dimension(int d);
void check_sparse_dimension(int d);

/** Binary vector (x_1, ..., x_d) encoded by index i. */
BinaryVector index_to_vector(Index i, int d);

/** Inverse of index_to_vector. Entries must be 0 or 1. */
Index vector_to_index(std::span<const std::uint8_t> x);

/**
 * Indices of chi_k = {x : sum x = k} in increasing order.  The first entry
 * is (1,...,1,0,...,0) with k leading ones.  Requires d <= 20.
 */
std::vector<Index> level_indices(int d, int k);

inline int popcount(Index i) { return __builtin_popcountll(i); }

/** Next larger index with the same popcount (Gosper's hack). */
inline Index next_same_popcount(Index v)
{
    const Index c = v & (~v + 1);
    const Index r = v + c;
    return (((r ^ v) >> 2) / c) | r;
}

/** The j-th element (0-based) of chi_k in increasing index order. */
Index level_element(int d, int k, std::uint64_t j);

/** Exact C(n, k). */
BigInt binomial_coefficient(int n, int k);
/** C(n, k) as a 64-bit integer; requires n <= 62. */
std::uint64_t binomial_u64(int n, int k);
/** log C(n, k) via lgamma. */
double log_binomial(int n, int k);

/** Bijection between indices and binary vectors for a fixed d. */
class BinaryIndexer
{
    public:
        explicit BinaryIndexer(int d);

        int dimension() const { return d_; }
        Index size() const { return Index{1} << d_; }
        BinaryVector to_vector(Index i) const { return index_to_vector(i, d_); }
        Index to_index(std::span<const std::uint8_t> x) const;
        std::vector<Index> level(int k) const { return level_indices(d_, k); }

    private:
        int d_;
};

// ---------------------------------------------------------------------------
// Scalar helpers shared by the double and exact-rational pmf variants
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

template <class T>
bool is_negative(const T& v) { return v < 0; }

template <class T>
bool is_positive(const T& v) { return v > 0; }

inline double as_double(double v) { return v; }
inline double as_double(const Rational& v) { return to_double(v); }

/** Exact types must sum to exactly one; doubles within tolerance. */
template <class T>
void check_unit_mass(const T& total, const char* what)
{
    if constexpr (is_exact_v<T>) {
        if (total != 1)
            throw InvalidArgument(std::string(what) + ": masses must sum to exactly 1 (got "
                                  + to_string(total) + ")");
    } else {
        if (!(std::abs(total - 1.0) <= kProbabilityTolerance))
            throw InvalidArgument(std::string(what) + ": masses must sum to 1 within 1e-12 (got "
                                  + std::to_string(total) + ")");
    }
}

template <class T>
void check_mass(const T& v, const char* what)
{
    if constexpr (!is_exact_v<T>) {
        if (!std::isfinite(v))
            throw InvalidArgument(std::string(what) + ": non-finite mass");
    }
    if (is_negative(v))
        throw InvalidArgument(std::string(what) + ": negative mass");
}

}   // namespace detail

// ---------------------------------------------------------------------------
// SumPmf: a pmf p = (p_0, ..., p_d) on {0, ..., d}
// ---------------------------------------------------------------------------

template <class T>
class BasicSumPmf
{
    public:
        using value_type = T;

        explicit BasicSumPmf(std::vector<T> values) : values_(std::move(values))
        {
            if (values_.size() < 2)
                throw InvalidArgument("SumPmf: need at least two entries (d >= 1)");
            if (static_cast<int>(values_.size()) - 1 > kMaxSparseDimension)
                throw GuardExceeded("SumPmf: dimension exceeds 62");
            T total = 0;
            for (std::size_t k = 0; k < values_.size(); ++k) {
                detail::check_mass(values_[k], "SumPmf");
                total += values_[k];
                if (detail::is_positive(values_[k]))
                    support_.push_back(static_cast<int>(k));
            }
            detail::check_unit_mass(total, "SumPmf");
        }

        int dimension() const { return static_cast<int>(values_.size()) - 1; }
        std::span<const T> values() const { return values_; }
        const T& operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }

        /** Levels k with p_k > 0, increasing. */
        std::span<const int> support() const { return support_; }
        bool supports(int k) const { return detail::is_positive(values_[static_cast<std::size_t>(k)]); }

        T mean() const
        {
            T m = 0;
            for (std::size_t k = 0; k < values_.size(); ++k)
                m += T(static_cast<long>(k)) * values_[k];
            return m;
        }

        bool operator==(const BasicSumPmf& other) const { return values_ == other.values_; }

    private:
        std::vector<T> values_;
        std::vector<int> support_;
};

using SumPmf = BasicSumPmf<double>;
using ExactSumPmf = BasicSumPmf<Rational>;

SumPmf to_double(const ExactSumPmf& p);

/** Routes a floating-point pmf onto the exact path (see rationalize()). */
ExactSumPmf to_exact(const SumPmf& p, double tol = 1e-12);

// ---------------------------------------------------------------------------
// JointPmf: dense pmf f over {0,1}^d in reverse-lexicographic order
// ---------------------------------------------------------------------------

template <class T>
class BasicJointPmf
{
    public:
        using value_type = T;

        BasicJointPmf(int d, std::vector<T> values) : d_(d), values_(std::move(values))
        {
            check_dense_dimension(d_);
            if (values_.size() != (std::size_t{1} << d_))
                throw InvalidArgument("JointPmf: expected 2^d values");
            T total = 0;
            for (const auto& v : values_) {
                detail::check_mass(v, "JointPmf");
                total += v;
            }
            detail::check_unit_mass(total, "JointPmf");
        }

        int dimension() const { return d_; }
        Index size() const { return values_.size(); }
        std::span<const T> values() const { return values_; }
        const T& operator[](Index i) const { return values_[i]; }

        bool operator==(const BasicJointPmf& other) const
        {
            return d_ == other.d_ && values_ == other.values_;
        }

    private:
        int d_;
        std::vector<T> values_;
};

using JointPmf = BasicJointPmf<double>;
using ExactJointPmf = BasicJointPmf<Rational>;

JointPmf to_double(const ExactJointPmf& f);

// ---------------------------------------------------------------------------
// SparseJointPmf: support-indexed pmf (extremal pmfs have <= d + 1 atoms)
// ---------------------------------------------------------------------------

template <class T>
struct BasicAtom
{
    Index index;
    T mass;

    bool operator==(const BasicAtom&) const = default;
};

template <class T>
class BasicSparseJointPmf
{
    public:
        using value_type = T;
        using Atom = BasicAtom<T>;

        /** Atoms are stored sorted by index; masses must be strictly positive. */
        BasicSparseJointPmf(int d, std::vector<Atom> atoms) : d_(d), atoms_(std::move(atoms))
        {
            check_sparse_dimension(d_);
            std::sort(atoms_.begin(), atoms_.end(),
                      [](const Atom& a, const Atom& b) { return a.index < b.index; });
            T total = 0;
            for (std::size_t i = 0; i < atoms_.size(); ++i) {
                if (atoms_[i].index >> d_)
                    throw OutOfRange("SparseJointPmf: atom index outside {0,1}^d");
                if (i > 0 && atoms_[i].index == atoms_[i - 1].index)
                    throw InvalidArgument("SparseJointPmf: duplicate atom index");
                detail::check_mass(atoms_[i].mass, "SparseJointPmf");
                if (!detail::is_positive(atoms_[i].mass))
                    throw InvalidArgument("SparseJointPmf: atom masses must be positive");
                total += atoms_[i].mass;
            }
            detail::check_unit_mass(total, "SparseJointPmf");
        }

        int dimension() const { return d_; }
        std::span<const Atom> atoms() const { return atoms_; }

        /** Mass at index i (zero off the support). */
        T mass(Index i) const
        {
            auto it = std::lower_bound(atoms_.begin(), atoms_.end(), i,
                                       [](const Atom& a, Index v) { return a.index < v; });
            if (it != atoms_.end() && it->index == i)
                return it->mass;
            return T(0);
        }

        bool operator==(const BasicSparseJointPmf& other) const
        {
            return d_ == other.d_ && atoms_ == other.atoms_;
        }

    private:
        int d_;
        std::vector<Atom> atoms_;
};

using SparseJointPmf = BasicSparseJointPmf<double>;
using ExactSparseJointPmf = BasicSparseJointPmf<Rational>;

SparseJointPmf to_double(const ExactSparseJointPmf& f);

template <class T>
BasicJointPmf<T> to_dense(const BasicSparseJointPmf<T>& f)
{
    check_dense_dimension(f.dimension());
    std::vector<T> values(std::size_t{1} << f.dimension(), T(0));
    for (const auto& atom : f.atoms())
        values[atom.index] = atom.mass;
    return BasicJointPmf<T>(f.dimension(), std::move(values));
}

template <class T>
BasicSparseJointPmf<T> to_sparse(const BasicJointPmf<T>& f)
{
    std::vector<BasicAtom<T>> atoms;
    for (Index i = 0; i < f.size(); ++i)
        if (detail::is_positive(f[i]))
            atoms.push_back({i, f[i]});
    return BasicSparseJointPmf<T>(f.dimension(), std::move(atoms));
}

// ---------------------------------------------------------------------------
// Sum map, cross moments, entropy
// ---------------------------------------------------------------------------

/** p_k = sum of f over chi_k. */
template <class T>
BasicSumPmf<T> sum_map(const BasicJointPmf<T>& f)
{
    std::vector<T> p(static_cast<std::size_t>(f.dimension()) + 1, T(0));
    for (Index i = 0; i < f.size(); ++i)
        p[static_cast<std::size_t>(popcount(i))] += f[i];
    return BasicSumPmf<T>(std::move(p));
}

template <class T>
BasicSumPmf<T> sum_map(const BasicSparseJointPmf<T>& f)
{
    std::vector<T> p(static_cast<std::size_t>(f.dimension()) + 1, T(0));
    for (const auto& atom : f.atoms())
        p[static_cast<std::size_t>(popcount(atom.index))] += atom.mass;
    return BasicSumPmf<T>(std::move(p));
}

/** Bit mask of a 1-based coordinate subset J; validates J. */
Index coordinate_mask(std::span<const int> subset, int d);

/** E[X_{j1} ... X_{jk}]: mass of all x with x_j = 1 for every j in J. */
template <class T>
T cross_moment(const BasicJointPmf<T>& f, std::span<const int> subset)
{
    const Index mask = coordinate_mask(subset, f.dimension());
    T total = 0;
    for (Index i = 0; i < f.size(); ++i)
        if ((i & mask) == mask)
            total += f[i];
    return total;
}

template <class T>
T cross_moment(const BasicSparseJointPmf<T>& f, std::span<const int> subset)
{
    const Index mask = coordinate_mask(subset, f.dimension());
    T total = 0;
    for (const auto& atom : f.atoms())
        if ((atom.index & mask) == mask)
            total += atom.mass;
    return total;
}

/** Shannon entropy in nats of an arbitrary list of masses; 0 log 0 = 0. */
double entropy(std::span<const double> masses);

template <class T>
double entropy(const BasicSumPmf<T>& p)
{
    if constexpr (detail::is_exact_v<T>)
        return entropy(to_double(p));
    else
        return entropy(p.values());
}

template <class T>
double entropy(const BasicJointPmf<T>& f)
{
    if constexpr (detail::is_exact_v<T>)
        return entropy(to_double(f));
    else
        return entropy(f.values());
}

template <class T>
double entropy(const BasicSparseJointPmf<T>& f)
{
    double h = 0.0;
    for (const auto& atom : f.atoms()) {
        const double m = detail::as_double(atom.mass);
        if (m > 0.0)
            h -= m * std::log(m);
    }
    return h;
}

}   // namespace bernpoly
