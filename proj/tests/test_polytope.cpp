#include <doctest.h>

#include <set>

#include "bernpoly/polytope.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace bernpoly;
using test_support::random_sum_pmf;

namespace {

template <class T>
std::vector<BasicSparseJointPmf<T>> all_vertices(const BasicSumPmf<T>& p)
{
    std::vector<BasicSparseJointPmf<T>> out;
    auto it = extremal_enumerate(p);
    while (auto v = it.next())
        out.push_back(std::move(*v));
    return out;
}

std::vector<std::vector<int>> subsets_of_size(int d, int k)
{
    std::vector<std::vector<int>> out;
    for (Index mask = 0; mask < (Index{1} << d); ++mask) {
        if (popcount(mask) != k)
            continue;
        std::vector<int> s;
        for (int j = 0; j < d; ++j)
            if ((mask >> j) & 1U)
                s.push_back(j + 1);
        out.push_back(s);
    }
    return out;
}

}   // namespace

TEST_CASE("describe")
{
    const auto d3 = describe(SumPmf({0.125, 0.375, 0.375, 0.125}));
    CHECK(d3.vertex_count == 9);
    CHECK(d3.intrinsic_dim == 4);
    CHECK(d3.block_dims == std::vector<std::uint64_t>{0, 2, 2, 0});

    CHECK(describe(SumPmf({1.0, 0.0, 0.0})).vertex_count == 1);
    CHECK(describe(SumPmf({0.0, 0.0, 1.0, 0.0, 0.0})).vertex_count == 6);
    CHECK(describe(SumPmf({0.2, 0.2, 0.2, 0.2, 0.2})).vertex_count == 96);
    const auto big = describe(ExactSumPmf(std::vector<Rational>(41, Rational(1, 41))));
    CHECK(big.vertex_count > BigInt(1) << 64);
}

TEST_CASE("extremal_by_index")
{
    const SumPmf p({0.125, 0.375, 0.375, 0.125});
    const auto r1 = extremal_by_index(p, ExtremalIndex{{1, 1, 1, 1}});
    CHECK(r1 == SparseJointPmf(3, {{0, 0.125}, {1, 0.375}, {3, 0.375}, {7, 0.125}}));

    const ExactSumPmf cx({Rational(0), Rational(4, 5), Rational(1, 5), Rational(0)});
    const auto t2 = extremal_by_index(cx, ExtremalIndex{{1, 1, 1, 1}});
    CHECK(t2 == ExactSparseJointPmf(3, {{1, Rational(4, 5)}, {3, Rational(1, 5)}}));

    CHECK_THROWS_AS(extremal_by_index(p, ExtremalIndex{{1, 4, 1, 1}}), OutOfRange);
    CHECK_THROWS_AS(extremal_by_index(p, ExtremalIndex{{1, 1, 1}}), DimensionMismatch);
    CHECK_THROWS_AS(extremal_by_index(cx, ExtremalIndex{{2, 1, 1, 1}}), OutOfRange);
}

TEST_CASE("enumeration order is colexicographic in sigma")
{
    const SumPmf p({0.125, 0.375, 0.375, 0.125});
    auto it = extremal_enumerate(p);
    std::vector<std::vector<std::uint64_t>> sigmas;
    while (true) {
        const auto idx = it.current_index();
        const auto v = it.next();
        if (!v)
            break;
        CHECK(*v == extremal_by_index(p, idx));
        sigmas.push_back(idx.sigma);
    }
    REQUIRE(sigmas.size() == 9);
    CHECK(sigmas[0] == std::vector<std::uint64_t>{1, 1, 1, 1});
    CHECK(sigmas[1] == std::vector<std::uint64_t>{1, 2, 1, 1});
    CHECK(sigmas[3] == std::vector<std::uint64_t>{1, 1, 2, 1});
    CHECK(sigmas[8] == std::vector<std::uint64_t>{1, 3, 3, 1});
}

TEST_CASE("skip pages through the stream")
{
    std::mt19937_64 gen(7);
    const SumPmf p = random_sum_pmf(5, gen);
    const auto all = all_vertices(p);
    for (int offset : {0, 1, 7, 100, 2499, 2500}) {
        auto it = extremal_enumerate(p);
        it.skip(offset);
        const auto v = it.next();
        if (offset < static_cast<int>(all.size())) {
            REQUIRE(v);
            CHECK(*v == all[static_cast<std::size_t>(offset)]);
        } else {
            CHECK_FALSE(v);
        }
    }
}

TEST_CASE("stream length and sum map for every vertex")
{
    std::mt19937_64 gen(11);
    for (int d = 1; d <= 6; ++d) {
        for (int trial = 0; trial < 5; ++trial) {
            const ExactSumPmf p = test_support::random_exact_sum_pmf(d, gen);
            std::uint64_t count = 0;
            auto it = extremal_enumerate(p);
            std::set<std::vector<Index>> supports;
            while (auto v = it.next()) {
                ++count;
                CHECK(sum_map(*v) == p);
                CHECK(v->atoms().size() <= p.support().size());
                std::vector<Index> s;
                for (const auto& a : v->atoms())
                    s.push_back(a.index);
                supports.insert(s);
            }
            CHECK(BigInt(count) == describe(p).vertex_count);
            CHECK(supports.size() == count);
        }
    }
    CHECK(all_vertices(SumPmf({0.0, 0.0, 0.0, 1.0})).size() == 1);
}

TEST_CASE("vertex counts match the basis-enumeration oracle")
{
    const auto b3 = test_support::b_half_3();
    const auto brute3 = oracle::brute_vertices(b3);
    CHECK(brute3.size() == 9);
    std::set<std::vector<Rational>> fast;
    for (const auto& v : all_vertices(b3)) {
        const auto dense = to_dense(v);
        fast.insert(std::vector<Rational>(dense.values().begin(), dense.values().end()));
    }
    std::set<std::vector<Rational>> slow;
    for (const auto& v : brute3)
        slow.insert(std::vector<Rational>(v.values().begin(), v.values().end()));
    CHECK(fast == slow);

    const ExactSumPmf u4(std::vector<Rational>(5, Rational(1, 5)));
    CHECK(oracle::brute_vertices(u4).size() == 96);
    CHECK(all_vertices(u4).size() == 96);

    const ExactSumPmf point({Rational(0), Rational(0), Rational(1), Rational(0), Rational(0)});
    CHECK(oracle::brute_vertices(point).size() == 6);
}

TEST_CASE("membership")
{
    const SumPmf b({0.125, 0.375, 0.375, 0.125});
    CHECK(membership(JointPmf(3, std::vector<double>(8, 0.125)), b, 1e-12));
    std::vector<double> point(8, 0.0);
    point[0] = 1.0;
    CHECK_FALSE(membership(JointPmf(3, point), b, 1e-12));
    const JointPmf r2(3, {0.125, 0.0, 0.125, 0.0, 0.25, 0.125, 0.25, 0.125});
    CHECK(membership(r2, b, 0.0));
    CHECK_THROWS_AS(membership(JointPmf(2, {0.25, 0.25, 0.25, 0.25}), b, 1e-12), DimensionMismatch);
}

TEST_CASE("decompose")
{
    const SumPmf b({0.125, 0.375, 0.375, 0.125});
    const auto w = decompose(JointPmf(3, std::vector<double>(8, 0.125)), b);
    for (int k : {1, 2})
        for (double x : w.weights[static_cast<std::size_t>(k)])
            CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-15));

    const SumPmf cx({0.0, 0.8, 0.2, 0.0});
    const auto v = extremal_by_index(cx, ExtremalIndex{{1, 2, 3, 1}});
    const auto wv = decompose(to_dense(v), cx);
    CHECK(wv.weights[0].empty());
    CHECK(wv.weights[1] == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(wv.weights[2] == std::vector<double>{0.0, 0.0, 1.0});

    std::vector<double> bad(8, 0.0);
    bad[0] = 1.0;
    CHECK_THROWS_AS(decompose(JointPmf(3, bad), b), InvalidArgument);
}

TEST_CASE("decompose reconstructs random members (d <= 5)")
{
    std::mt19937_64 gen(12345);
    for (int d = 1; d <= 5; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            const SumPmf p = random_sum_pmf(d, gen);
            const auto verts = all_vertices(p);
            // Random convex combination of a few random vertices.
            std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
            const auto lambda = test_support::random_masses(4, gen);
            std::vector<double> f(std::size_t{1} << d, 0.0);
            for (double l : lambda)
                for (const auto& a : verts[pick(gen)].atoms())
                    f[a.index] += l * a.mass;
            const JointPmf fj(d, f);
            REQUIRE(membership(fj, p, 1e-12));
            const auto flat = flat_weights(decompose(fj, p), p);
            REQUIRE(flat.size() == verts.size());
            std::vector<double> rebuilt(f.size(), 0.0);
            double total = 0.0;
            for (std::size_t s = 0; s < verts.size(); ++s) {
                total += flat[s];
                for (const auto& a : verts[s].atoms())
                    rebuilt[a.index] += flat[s] * a.mass;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            double gap = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i)
                gap = std::max(gap, std::abs(rebuilt[i] - f[i]));
            CHECK(gap <= 1e-12);
        }
    }
}

TEST_CASE("flat weights are guarded")
{
    const SumPmf p(std::vector<double>(8, 0.125));
    const JointPmf f = exchangeable_pmf(p);
    CHECK_THROWS_AS(flat_weights(decompose(f, p), p), GuardExceeded);
}

TEST_CASE("exchangeable pmf")
{
    const ExactSumPmf u3(std::vector<Rational>(4, Rational(1, 4)));
    const auto fm = exchangeable_pmf(u3);
    CHECK(fm[1] == Rational(1, 12));
    CHECK(fm[0] == Rational(1, 4));
    CHECK(sum_map(fm) == u3);

    const auto uniform = exchangeable_pmf(test_support::b_half_3());
    for (Index i = 0; i < 8; ++i)
        CHECK(uniform[i] == Rational(1, 8));

    const auto top = exchangeable_pmf(SumPmf({0.0, 0.0, 0.0, 1.0}));
    CHECK(top[7] == 1.0);
}

TEST_CASE("moment bounds")
{
    const SumPmf b({0.125, 0.375, 0.375, 0.125});
    CHECK(moment_bounds(b, 1) == std::pair{0.125, 0.875});
    CHECK(moment_bounds(b, 2) == std::pair{0.125, 0.5});
    CHECK(moment_bounds(b, 3) == std::pair{0.125, 0.125});
    CHECK_THROWS_AS(moment_bounds(b, 0), OutOfRange);
    CHECK_THROWS_AS(moment_bounds(b, 4), OutOfRange);
}

TEST_CASE("moment bounds are attained by vertices (d <= 4)")
{
    std::mt19937_64 gen(99);
    for (int d = 1; d <= 4; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            const SumPmf p = random_sum_pmf(d, gen);
            const auto verts = all_vertices(p);
            for (int k = 1; k <= d; ++k) {
                const auto [lo, hi] = moment_bounds(p, k);
                for (const auto& subset : subsets_of_size(d, k)) {
                    double mn = 2.0, mx = -1.0;
                    for (const auto& v : verts) {
                        const double m = cross_moment(v, std::span<const int>(subset));
                        mn = std::min(mn, m);
                        mx = std::max(mx, m);
                    }
                    CHECK(std::abs(mn - lo) <= 1e-12);
                    CHECK(std::abs(mx - hi) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("entropy bounds")
{
    const SumPmf b({0.125, 0.375, 0.375, 0.125});
    const auto eb = entropy_bounds(b);
    CHECK(eb.max == doctest::Approx(3 * std::log(2.0)).epsilon(1e-14));
    CHECK(eb.min == doctest::Approx(entropy(b)).epsilon(1e-15));
    for (const auto& v : all_vertices(b))
        CHECK(std::abs(entropy(v) - eb.min) <= 1e-12);
    const auto point = entropy_bounds(SumPmf({0.0, 0.0, 1.0}));
    CHECK(point.min == 0.0);
    const auto bottom = entropy_bounds(SumPmf({1.0, 0.0, 0.0}));
    CHECK(bottom.max == 0.0);
}

TEST_CASE("entropy is constant on vertices and bracketed inside P(p)")
{
    std::mt19937_64 gen(2718);
    for (int d = 1; d <= 4; ++d) {
        for (int trial = 0; trial < 50; ++trial) {
            const SumPmf p = random_sum_pmf(d, gen);
            const double hp = entropy(p);
            for (const auto& v : all_vertices(p))
                CHECK(std::abs(entropy(v) - hp) <= 1e-12);
        }
    }
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 2 + trial % 4;
        const SumPmf p = random_sum_pmf(d, gen);
        std::vector<double> f(std::size_t{1} << d, 0.0);
        for (int k = 0; k <= d; ++k) {
            const auto level = level_indices(d, k);
            const auto w = test_support::random_masses(level.size(), gen);
            for (std::size_t j = 0; j < level.size(); ++j)
                f[level[j]] = p[k] * w[j];
        }
        double total = 0.0;
        for (double x : f)
            total += x;
        f[0] += 1.0 - total;
        if (f[0] < 0.0)
            continue;
        const JointPmf fj(d, f);
        const auto eb = entropy_bounds(p);
        CHECK(entropy(fj) >= eb.min - 1e-12);
        CHECK(entropy(fj) <= entropy(exchangeable_pmf(p)) + 1e-12);
        CHECK(std::abs(eb.max - entropy(exchangeable_pmf(p))) <= 1e-12);
    }
}

TEST_CASE("generalized extremals")
{
    std::mt19937_64 gen(5);
    for (int d = 1; d <= 5; ++d) {
        const SumPmf p = random_sum_pmf(d, gen);
        auto a = extremal_enumerate(p);
        auto b = generalized_extremals(LabelMap::popcount_map(d), p);
        CHECK(a.count() == b.count());
        while (true) {
            auto va = a.next();
            auto vb = b.next();
            REQUIRE(va.has_value() == vb.has_value());
            if (!va)
                break;
            CHECK(*va == *vb);
        }
    }

    const LabelMap h({0, 1, 2, 1});
    const SumPmf p({0.2, 0.5, 0.3});
    auto it = generalized_extremals(h, p);
    CHECK(it.count() == 2);
    CHECK(*it.next() == SparseJointPmf(2, {{0, 0.2}, {1, 0.5}, {2, 0.3}}));
    CHECK(*it.next() == SparseJointPmf(2, {{0, 0.2}, {3, 0.5}, {2, 0.3}}));
    CHECK_FALSE(it.next());

    CHECK_THROWS_AS(LabelMap({0, 1, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(LabelMap({0, 1, 2}), InvalidArgument);
}

TEST_CASE("convex-order-minimal pmf")
{
    const ExactSumPmf cx = convex_min_pmf(3, Rational(6, 5));
    CHECK(cx == ExactSumPmf({Rational(0), Rational(4, 5), Rational(1, 5), Rational(0)}));
    CHECK(convex_min_pmf(3, 2.0) == SumPmf({0.0, 0.0, 1.0, 0.0}));
    const SumPmf c5 = convex_min_pmf(5, 3.25);
    CHECK(c5[3] == 0.75);
    CHECK(c5[4] == 0.25);
    CHECK(c5.mean() == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(convex_min_pmf(3, 3.0)[3] == 1.0);
    CHECK_THROWS_AS(convex_min_pmf(3, 3.5), OutOfRange);
    CHECK_THROWS_AS(convex_min_pmf(3, -0.1), OutOfRange);
}
