#include "bernpoly/polytope.hpp"

#include <cmath>
#include <string>

namespace bernpoly {

namespace detail {

MixedRadixCounter::MixedRadixCounter(std::vector<std::uint64_t> radices)
    : radices_(std::move(radices)), digits_(radices_.size(), 0), total_(1)
{
    for (auto r : radices_) {
        if (r == 0)
            throw InvalidArgument("empty digit range");
        total_ *= r;
    }
}

std::size_t MixedRadixCounter::increment()
{
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (++digits_[i] < radices_[i])
            return i;
        digits_[i] = 0;
    }
    exhausted_ = true;
    return digits_.size();
}

void MixedRadixCounter::seek(const BigInt& offset)
{
    if (offset >= total_) {
        exhausted_ = true;
        return;
    }
    BigInt rest = offset;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        digits_[i] = static_cast<std::uint64_t>(rest % radices_[i]);
        rest /= radices_[i];
    }
    exhausted_ = false;
}

void check_extremal_index(const ExtremalIndex& sigma, int d, std::span<const int> support)
{
    if (sigma.sigma.size() != static_cast<std::size_t>(d) + 1)
        throw DimensionMismatch("sigma must have d + 1 entries");
    std::size_t s = 0;
    for (int k = 0; k <= d; ++k) {
        const auto v = sigma.sigma[static_cast<std::size_t>(k)];
        const bool supported = s < support.size() && support[s] == k;
        if (supported) {
            ++s;
            if (v < 1 || v > binomial_u64(d, k))
                throw OutOfRange("sigma_" + std::to_string(k) + " outside {1,...,C(d,k)}");
        } else if (v != 1) {
            throw OutOfRange("sigma_" + std::to_string(k) + " must be 1 for an unsupported level");
        }
    }
}

}   // namespace detail

bool membership(const JointPmf& f, const SumPmf& p, double tol)
{
    if (f.dimension() != p.dimension())
        throw DimensionMismatch("membership: joint pmf and sum pmf dimensions differ");
    const SumPmf q = sum_map(f);
    double gap = 0.0;
    for (int k = 0; k <= p.dimension(); ++k)
        gap = std::max(gap, std::abs(q[k] - p[k]));
    return gap <= tol;
}

bool membership(const ExactJointPmf& f, const ExactSumPmf& p)
{
    if (f.dimension() != p.dimension())
        throw DimensionMismatch("membership: joint pmf and sum pmf dimensions differ");
    return sum_map(f) == p;
}

BlockWeights decompose(const JointPmf& f, const SumPmf& p, double tol)
{
    if (!membership(f, p, tol))
        throw InvalidArgument("decompose: f is not a member of P(p)");
    const int d = p.dimension();
    BlockWeights out;
    out.weights.resize(static_cast<std::size_t>(d) + 1);
    for (int k : p.support()) {
        auto& w = out.weights[static_cast<std::size_t>(k)];
        for (Index x : level_indices(d, k))
            w.push_back(f[x] / p[k]);
    }
    return out;
}

std::vector<double> flat_weights(const BlockWeights& w, const SumPmf& p)
{
    const auto desc = describe(p);
    if (desc.vertex_count > kMaxFlatWeights)
        throw GuardExceeded("flat vertex weights are limited to 10^4 vertices");
    std::vector<std::uint64_t> radices;
    for (int k : p.support())
        radices.push_back(w.weights[static_cast<std::size_t>(k)].size());
    detail::MixedRadixCounter counter(radices);
    std::vector<double> lambda;
    lambda.reserve(desc.vertex_count.convert_to<std::size_t>());
    while (!counter.exhausted()) {
        double prod = 1.0;
        const auto support = p.support();
        for (std::size_t i = 0; i < support.size(); ++i)
            prod *= w.weights[static_cast<std::size_t>(support[i])][counter.digits()[i]];
        lambda.push_back(prod);
        counter.increment();
    }
    return lambda;
}

EntropyBounds entropy_bounds(const SumPmf& p)
{
    EntropyBounds b;
    b.min = entropy(p);
    b.max = b.min;
    for (int k : p.support())
        b.max += p[k] * log_binomial(p.dimension(), k);
    return b;
}

LabelMap::LabelMap(std::vector<int> labels) : labels_(std::move(labels))
{
    const std::size_t n = labels_.size();
    if (n < 2 || (n & (n - 1)) != 0)
        throw InvalidArgument("label map must have 2^d entries");
    d_ = std::countr_zero(n);
    check_dense_dimension(d_);
    preimages_.resize(static_cast<std::size_t>(d_) + 1);
    for (Index x = 0; x < n; ++x) {
        const int y = labels_[x];
        if (y < 0 || y > d_)
            throw OutOfRange("label outside {0,...,d}");
        preimages_[static_cast<std::size_t>(y)].push_back(x);
    }
    for (int y = 0; y <= d_; ++y)
        if (preimages_[static_cast<std::size_t>(y)].empty())
            throw InvalidArgument("label map is not surjective: no x with h(x) = " + std::to_string(y));
}

LabelMap LabelMap::popcount_map(int d)
{
    check_dense_dimension(d);
    std::vector<int> labels(std::size_t{1} << d);
    for (Index x = 0; x < labels.size(); ++x)
        labels[x] = popcount(x);
    return LabelMap(std::move(labels));
}

SumPmf convex_min_pmf(int d, double mu)
{
    if (d < 1)
        throw InvalidArgument("dimension d must be >= 1");
    if (!(mu >= 0.0 && mu <= static_cast<double>(d)))
        throw OutOfRange("mean mu must lie in [0, d]");
    std::vector<double> p(static_cast<std::size_t>(d) + 1, 0.0);
    const double lower = std::floor(mu);
    const auto j = static_cast<std::size_t>(lower);
    if (lower == mu) {
        p[j] = 1.0;
    } else {
        p[j] = (lower + 1.0) - mu;
        p[j + 1] = mu - lower;
    }
    return SumPmf(std::move(p));
}

ExactSumPmf convex_min_pmf(int d, const Rational& mu)
{
    if (d < 1)
        throw InvalidArgument("dimension d must be >= 1");
    if (mu < 0 || mu > d)
        throw OutOfRange("mean mu must lie in [0, d]");
    std::vector<Rational> p(static_cast<std::size_t>(d) + 1, Rational(0));
    const BigInt lower = numerator(mu) / denominator(mu);   // mu >= 0, truncation is floor
    const auto j = lower.convert_to<std::size_t>();
    if (Rational(lower) == mu) {
        p[j] = 1;
    } else {
        p[j] = Rational(lower + 1) - mu;
        p[j + 1] = mu - Rational(lower);
    }
    return ExactSumPmf(std::move(p));
}

}   // namespace bernpoly
