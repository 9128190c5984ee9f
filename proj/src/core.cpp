#include "bernpoly/core.hpp"

#include <string>

namespace bernpoly {

void check_dense_dimension(int d)
{
    if (d < 1)
        throw InvalidArgument("dimension d must be >= 1");
    if (d > kMaxDenseDimension)
        throw GuardExceeded("dense joint pmfs are limited to d <= "
                            + std::to_string(kMaxDenseDimension) + " (got " + std::to_string(d) + ")");
}

void check_sparse_dimension(int d)
{
    if (d < 1)
        throw InvalidArgument("dimension d must be >= 1");
    if (d > kMaxSparseDimension)
        throw GuardExceeded("sparse joint pmfs are limited to d <= "
                            + std::to_string(kMaxSparseDimension) + " (got " + std::to_string(d) + ")");
}

BinaryVector index_to_vector(Index i, int d)
{
    check_sparse_dimension(d);
    if (i >> d)
        throw OutOfRange("index " + std::to_string(i) + " outside {0,...,2^" + std::to_string(d) + " - 1}");
    BinaryVector x(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        x[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((i >> j) & 1U);
    return x;
}

Index vector_to_index(std::span<const std::uint8_t> x)
{
    check_sparse_dimension(static_cast<int>(x.size()));
    Index i = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] > 1)
            throw InvalidArgument("binary vector entries must be 0 or 1");
        i |= static_cast<Index>(x[j]) << j;
    }
    return i;
}

std::vector<Index> level_indices(int d, int k)
{
    check_dense_dimension(d);
    if (k < 0 || k > d)
        throw OutOfRange("level k=" + std::to_string(k) + " outside {0,...," + std::to_string(d) + "}");
    std::vector<Index> out;
    out.reserve(binomial_u64(d, k));
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    const Index end = Index{1} << d;
    for (Index v = (Index{1} << k) - 1; v < end; v = next_same_popcount(v))
        out.push_back(v);
    return out;
}

Index level_element(int d, int k, std::uint64_t j)
{
    check_sparse_dimension(d);
    if (k < 0 || k > d)
        throw OutOfRange("level k out of range");
    if (j >= binomial_u64(d, k))
        throw OutOfRange("element rank exceeds C(d,k)");
    // Combinatorial number system: in increasing index order the rank of a
    // k-subset {c_1 < ... < c_k} is sum_i C(c_i, i).
    Index v = 0;
    int remaining = k;
    for (int pos = d - 1; pos >= 0 && remaining > 0; --pos) {
        const std::uint64_t c = binomial_u64(pos, remaining);
        if (c <= j) {
            v |= Index{1} << pos;
            j -= c;
            --remaining;
        }
    }
    return v;
}

BigInt binomial_coefficient(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    BigInt r = 1;
    k = std::min(k, n - k);
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

std::uint64_t binomial_u64(int n, int k)
{
    if (n > kMaxSparseDimension)
        throw GuardExceeded("binomial_u64 requires n <= 62");
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    return static_cast<std::uint64_t>(r);
}

double log_binomial(int n, int k)
{
    if (k < 0 || k > n)
        throw OutOfRange("log_binomial: k outside {0,...,n}");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

BinaryIndexer::BinaryIndexer(int d) : d_(d)
{
    check_sparse_dimension(d);
}

Index BinaryIndexer::to_index(std::span<const std::uint8_t> x) const
{
    if (static_cast<int>(x.size()) != d_)
        throw DimensionMismatch("binary vector length differs from d");
    return vector_to_index(x);
}

SumPmf to_double(const ExactSumPmf& p)
{
    std::vector<double> v;
    v.reserve(p.values().size());
    for (const auto& x : p.values())
        v.push_back(to_double(x));
    // Rounding each entry may shift the total by a few ulps; that stays far
    // inside the 1e-12 tolerance.
    return SumPmf(std::move(v));
}

ExactSumPmf to_exact(const SumPmf& p, double tol)
{
    std::vector<Rational> v;
    v.reserve(p.values().size());
    Rational total = 0;
    for (double x : p.values()) {
        v.push_back(rationalize(x, tol));
        total += v.back();
    }
    if (total != 1) {
        // The largest entry absorbs the (tiny) rounding residual.
        auto largest = std::max_element(v.begin(), v.end());
        *largest += Rational(1) - total;
        if (*largest < 0)
            throw InvalidArgument("to_exact: cannot repair total mass");
    }
    return ExactSumPmf(std::move(v));
}

JointPmf to_double(const ExactJointPmf& f)
{
    std::vector<double> v;
    v.reserve(f.size());
    for (const auto& x : f.values())
        v.push_back(to_double(x));
    return JointPmf(f.dimension(), std::move(v));
}

SparseJointPmf to_double(const ExactSparseJointPmf& f)
{
    std::vector<SparseJointPmf::Atom> atoms;
    atoms.reserve(f.atoms().size());
    for (const auto& a : f.atoms())
        atoms.push_back({a.index, to_double(a.mass)});
    return SparseJointPmf(f.dimension(), std::move(atoms));
}

Index coordinate_mask(std::span<const int> subset, int d)
{
    if (subset.empty())
        throw InvalidArgument("coordinate subset J must be nonempty");
    Index mask = 0;
    for (int j : subset) {
        if (j < 1 || j > d)
            throw OutOfRange("coordinate " + std::to_string(j) + " outside {1,...," + std::to_string(d) + "}");
        mask |= Index{1} << (j - 1);
    }
    return mask;
}

double entropy(std::span<const double> masses)
{
    double h = 0.0;
    for (double m : masses)
        if (m > 0.0)
            h -= m * std::log(m);
    return h;
}

}   // namespace bernpoly
