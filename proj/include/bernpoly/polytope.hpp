#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bernpoly/core.hpp"

/**
 * The convex polytope P(p) of joint Bernoulli pmfs whose coordinate sum has
 * law p.  P(p) is the product over levels k of scaled simplices on chi_k,
 * so its vertices place the whole mass p_k on a single x in chi_k for each
 * supported level.  A vertex is addressed by sigma = (sigma_0, ..., sigma_d)
 * with sigma_k in {1, ..., C(d,k)} selecting the sigma_k-th element of chi_k
 * in index order.
 */
namespace bernpoly {

struct PolytopeDescriptor
{
    int dimension = 0;
    /** n_k = C(d,k) - 1 for every level k. */
    std::vector<std::uint64_t> block_dims;
    /** Levels with p_k > 0. */
    std::vector<int> support;
    /** Sum of n_k over the support; 2^d - d - 1 for full support. */
    std::uint64_t intrinsic_dim = 0;
    /** Product of C(d,k) over the support. */
    BigInt vertex_count;
};

/** 1-based vertex address.  Unsupported levels must carry sigma_k = 1. */
struct ExtremalIndex
{
    std::vector<std::uint64_t> sigma;
};

namespace detail {

/**
 * Odometer over digits with the given radices, first digit fastest.
 * Drives the colexicographic vertex order.
 */
class MixedRadixCounter
{
    public:
        explicit MixedRadixCounter(std::vector<std::uint64_t> radices);

        const BigInt& total() const { return total_; }
        std::span<const std::uint64_t> digits() const { return digits_; }
        bool exhausted() const { return exhausted_; }

        /** Advances one step; returns the lowest digit position that changed. */
        std::size_t increment();
        /** Jumps to the absolute position `offset` (0-based). */
        void seek(const BigInt& offset);

    private:
        std::vector<std::uint64_t> radices_;
        std::vector<std::uint64_t> digits_;
        BigInt total_;
        bool exhausted_ = false;
};

void check_extremal_index(const ExtremalIndex& sigma, int d, std::span<const int> support);

}   // namespace detail

template <class T>
PolytopeDescriptor describe(const BasicSumPmf<T>& p)
{
    PolytopeDescriptor desc;
    const int d = p.dimension();
    desc.dimension = d;
    desc.vertex_count = 1;
    for (int k = 0; k <= d; ++k)
        desc.block_dims.push_back(binomial_u64(d, k) - 1);
    for (int k : p.support()) {
        desc.support.push_back(k);
        desc.intrinsic_dim += desc.block_dims[static_cast<std::size_t>(k)];
        desc.vertex_count *= binomial_u64(d, k);
    }
    return desc;
}

/** The vertex f^sigma: mass p_k on the sigma_k-th element of chi_k. */
template <class T>
BasicSparseJointPmf<T> extremal_by_index(const BasicSumPmf<T>& p, const ExtremalIndex& sigma)
{
    const int d = p.dimension();
    detail::check_extremal_index(sigma, d, p.support());
    std::vector<BasicAtom<T>> atoms;
    for (int k : p.support())
        atoms.push_back({level_element(d, k, sigma.sigma[static_cast<std::size_t>(k)] - 1), p[k]});
    return BasicSparseJointPmf<T>(d, std::move(atoms));
}

/**
 * Lazily yields every vertex of P(p) exactly once, sigma in colexicographic
 * order (lowest supported level fastest).  Holds O(d) state.
 */
template <class T>
class BasicExtremalEnumerator
{
    public:
        explicit BasicExtremalEnumerator(BasicSumPmf<T> p)
            : p_(std::move(p)), counter_(radices(p_))
        {
            check_sparse_dimension(p_.dimension());
            levels_.assign(p_.support().begin(), p_.support().end());
            reset_elements();
        }

        const BigInt& count() const { return counter_.total(); }
        const BasicSumPmf<T>& pmf() const { return p_; }
        bool exhausted() const { return counter_.exhausted(); }

        /** Skips the next `n` vertices. */
        void skip(const BigInt& n)
        {
            if (n <= 0)
                return;
            counter_.seek(position_ + n);
            position_ += n;
            reset_elements();
        }

        /** Address of the vertex that next() will return. */
        ExtremalIndex current_index() const
        {
            ExtremalIndex idx;
            idx.sigma.assign(static_cast<std::size_t>(p_.dimension()) + 1, 1);
            for (std::size_t i = 0; i < levels_.size(); ++i)
                idx.sigma[static_cast<std::size_t>(levels_[i])] = counter_.digits()[i] + 1;
            return idx;
        }

        std::optional<BasicSparseJointPmf<T>> next()
        {
            if (counter_.exhausted())
                return std::nullopt;
            std::vector<BasicAtom<T>> atoms;
            atoms.reserve(levels_.size());
            for (std::size_t i = 0; i < levels_.size(); ++i)
                atoms.push_back({elements_[i], p_[levels_[i]]});
            BasicSparseJointPmf<T> out(p_.dimension(), std::move(atoms));

            const std::size_t changed = counter_.increment();
            position_ += 1;
            if (!counter_.exhausted()) {
                // Digits below `changed` wrapped to their first element.
                for (std::size_t i = 0; i < changed; ++i)
                    elements_[i] = first_element(levels_[i]);
                elements_[changed] = levels_[changed] == 0 ? 0 : next_same_popcount(elements_[changed]);
            }
            return out;
        }

    private:
        static std::vector<std::uint64_t> radices(const BasicSumPmf<T>& p)
        {
            std::vector<std::uint64_t> r;
            for (int k : p.support())
                r.push_back(binomial_u64(p.dimension(), k));
            return r;
        }

        static Index first_element(int k) { return k == 0 ? 0 : (Index{1} << k) - 1; }

        void reset_elements()
        {
            elements_.clear();
            if (counter_.exhausted())
                return;
            for (std::size_t i = 0; i < levels_.size(); ++i)
                elements_.push_back(level_element(p_.dimension(), levels_[i], counter_.digits()[i]));
        }

        BasicSumPmf<T> p_;
        detail::MixedRadixCounter counter_;
        std::vector<int> levels_;
        std::vector<Index> elements_;
        BigInt position_ = 0;
};

using ExtremalEnumerator = BasicExtremalEnumerator<double>;
using ExactExtremalEnumerator = BasicExtremalEnumerator<Rational>;

template <class T>
BasicExtremalEnumerator<T> extremal_enumerate(const BasicSumPmf<T>& p)
{
    return BasicExtremalEnumerator<T>(p);
}

/** True iff d_S(s(f), p) <= tol. */
bool membership(const JointPmf& f, const SumPmf& p, double tol);
/** Exact membership: s(f) == p. */
bool membership(const ExactJointPmf& f, const ExactSumPmf& p);

/**
 * Per-level convex weights w_k(j) = f(x_k^j) / p_k.  The vertex weights
 * lambda_sigma = prod_k w_k(sigma_k) satisfy sum_sigma lambda_sigma f^sigma = f.
 * Unsupported levels carry an empty weight vector.
 */
struct BlockWeights
{
    std::vector<std::vector<double>> weights;
};

/** Throws InvalidArgument unless membership(f, p, tol) holds. */
BlockWeights decompose(const JointPmf& f, const SumPmf& p, double tol = 1e-10);

/** Flat lambda in enumeration order; only for vertex_count <= 10^4. */
std::vector<double> flat_weights(const BlockWeights& w, const SumPmf& p);

inline constexpr std::uint64_t kMaxFlatWeights = 10000;

/** f_M(x) = p_k / C(d,k) on chi_k: the exchangeable member of P(p). */
template <class T>
BasicJointPmf<T> exchangeable_pmf(const BasicSumPmf<T>& p)
{
    const int d = p.dimension();
    check_dense_dimension(d);
    std::vector<T> per_level;
    for (int k = 0; k <= d; ++k) {
        if constexpr (detail::is_exact_v<T>)
            per_level.push_back(p[k] / Rational(binomial_coefficient(d, k)));
        else
            per_level.push_back(p[k] / static_cast<double>(binomial_u64(d, k)));
    }
    std::vector<T> values(std::size_t{1} << d);
    for (Index i = 0; i < values.size(); ++i)
        values[i] = per_level[static_cast<std::size_t>(popcount(i))];
    return BasicJointPmf<T>(d, std::move(values));
}

/**
 * Sharp bounds on E[X_{j1} ... X_{jk}] over P(p) for any k coordinates:
 * lower = p_d, upper = p_k + ... + p_d.
 */
template <class T>
std::pair<T, T> moment_bounds(const BasicSumPmf<T>& p, int k)
{
    const int d = p.dimension();
    if (k < 1 || k > d)
        throw OutOfRange("moment order k must lie in {1,...,d}");
    T upper = 0;
    for (int h = k; h <= d; ++h)
        upper += p[h];
    return {p[d], upper};
}

struct EntropyBounds
{
    double min = 0.0;   ///< attained at every vertex
    double max = 0.0;   ///< attained at the exchangeable pmf
};

EntropyBounds entropy_bounds(const SumPmf& p);

/** A surjective labelling h: {0,1}^d -> {0,...,d}. */
class LabelMap
{
    public:
        /** labels.size() must be 2^d; throws InvalidArgument if not surjective. */
        explicit LabelMap(std::vector<int> labels);

        /** h(x) = sum of x. */
        static LabelMap popcount_map(int d);

        int dimension() const { return d_; }
        std::span<const int> labels() const { return labels_; }
        /** Elements of h^{-1}(y) in increasing index order. */
        const std::vector<Index>& preimage(int y) const { return preimages_[static_cast<std::size_t>(y)]; }

    private:
        int d_;
        std::vector<int> labels_;
        std::vector<std::vector<Index>> preimages_;
};

/** Vertices of P^h(p): mass p_y on the sigma_y-th element of h^{-1}(y). */
template <class T>
class BasicGeneralizedExtremalEnumerator
{
    public:
        BasicGeneralizedExtremalEnumerator(LabelMap h, BasicSumPmf<T> p)
            : h_(std::move(h)), p_(std::move(p)), counter_(radices(h_, p_))
        {
            if (h_.dimension() != p_.dimension())
                throw DimensionMismatch("label map and pmf dimensions differ");
        }

        const BigInt& count() const { return counter_.total(); }

        std::optional<BasicSparseJointPmf<T>> next()
        {
            if (counter_.exhausted())
                return std::nullopt;
            std::vector<BasicAtom<T>> atoms;
            const auto support = p_.support();
            for (std::size_t i = 0; i < support.size(); ++i)
                atoms.push_back({h_.preimage(support[i])[counter_.digits()[i]], p_[support[i]]});
            counter_.increment();
            return BasicSparseJointPmf<T>(p_.dimension(), std::move(atoms));
        }

    private:
        static std::vector<std::uint64_t> radices(const LabelMap& h, const BasicSumPmf<T>& p)
        {
            std::vector<std::uint64_t> r;
            for (int y : p.support())
                r.push_back(h.preimage(y).size());
            return r;
        }

        LabelMap h_;
        BasicSumPmf<T> p_;
        detail::MixedRadixCounter counter_;
};

using GeneralizedExtremalEnumerator = BasicGeneralizedExtremalEnumerator<double>;

template <class T>
BasicGeneralizedExtremalEnumerator<T> generalized_extremals(const LabelMap& h, const BasicSumPmf<T>& p)
{
    return BasicGeneralizedExtremalEnumerator<T>(h, p);
}

/**
 * Convex-order-minimal pmf with mean mu: mass j_m - mu at j_M = floor(mu)
 * and mu - j_M at j_m = j_M + 1.  Integral mu gives a point mass.
 */
SumPmf convex_min_pmf(int d, double mu);
ExactSumPmf convex_min_pmf(int d, const Rational& mu);

}   // namespace bernpoly
