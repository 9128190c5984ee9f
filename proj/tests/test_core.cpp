#include <doctest.h>

#include <random>

#include "bernpoly/core.hpp"
#include "oracle.hpp"

using namespace bernpoly;

namespace {

JointPmf random_joint(int d, std::mt19937_64& gen)
{
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(std::size_t{1} << d);
    double total = 0.0;
    for (auto& x : v) {
        x = e(gen);
        total += x;
    }
    for (auto& x : v)
        x /= total;
    // Land the total within a few ulps of one.
    double s = 0.0;
    for (double x : v)
        s += x;
    v[0] += 1.0 - s;
    return JointPmf(d, v);
}

}   // namespace

TEST_CASE("index order is reverse lexicographic")
{
    CHECK(index_to_vector(3, 3) == BinaryVector{1, 1, 0});
    CHECK(index_to_vector(4, 3) == BinaryVector{0, 0, 1});
    const BinaryVector x{0, 1, 1};
    CHECK(vector_to_index(x) == 6);
    for (Index i = 0; i < 32; ++i)
        CHECK(vector_to_index(index_to_vector(i, 5)) == i);
    const BinaryVector bad{0, 2};
    CHECK_THROWS_AS(vector_to_index(bad), InvalidArgument);
}

TEST_CASE("level sets")
{
    CHECK(level_indices(3, 1) == std::vector<Index>{1, 2, 4});
    CHECK(level_indices(3, 2) == std::vector<Index>{3, 5, 6});
    CHECK(level_indices(3, 0) == std::vector<Index>{0});
    CHECK(level_indices(3, 3) == std::vector<Index>{7});
    for (int d = 1; d <= 8; ++d) {
        for (int k = 0; k <= d; ++k) {
            const auto level = level_indices(d, k);
            CHECK(level.size() == binomial_u64(d, k));
            for (std::size_t j = 0; j < level.size(); ++j) {
                CHECK(popcount(level[j]) == k);
                CHECK(level_element(d, k, j) == level[j]);
            }
        }
    }
    CHECK_THROWS_AS(level_element(3, 2, 3), OutOfRange);
}

TEST_CASE("binomial coefficients")
{
    CHECK(binomial_u64(4, 2) == 6);
    CHECK(binomial_u64(62, 31) == 465428353255261088ULL);
    CHECK(binomial_coefficient(100, 50) == BigInt("100891344545564193334812497256"));
    CHECK(log_binomial(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-14));
}

TEST_CASE("SumPmf validation")
{
    CHECK_NOTHROW(SumPmf({0.125, 0.375, 0.375, 0.125}));
    CHECK_THROWS_AS(SumPmf({0.5, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(SumPmf({1.5, -0.5}), InvalidArgument);
    CHECK_THROWS_AS(SumPmf({1.0}), InvalidArgument);
    CHECK_NOTHROW(ExactSumPmf({Rational(1, 3), Rational(2, 3)}));
    CHECK_THROWS_AS(ExactSumPmf({Rational(1, 3), Rational(1, 3)}), InvalidArgument);

    const SumPmf p({0.125, 0.375, 0.375, 0.125});
    CHECK(p.mean() == doctest::Approx(1.5));
    CHECK(p.support().size() == 4);
    const SumPmf q({0.0, 0.8, 0.2, 0.0});
    CHECK(std::vector<int>(q.support().begin(), q.support().end()) == std::vector<int>{1, 2});
}

TEST_CASE("to_exact rationalizes and keeps unit mass")
{
    const ExactSumPmf e = to_exact(SumPmf({0.0, 0.8, 0.2, 0.0}));
    CHECK(e[1] == Rational(4, 5));
    CHECK(e[2] == Rational(1, 5));
    const ExactSumPmf thirds = to_exact(SumPmf({1.0 / 3, 1.0 / 3, 1.0 / 3}));
    CHECK(thirds[0] == Rational(1, 3));
}

TEST_CASE("sum map of a joint pmf")
{
    // Uniform on {0,1}^3 maps to b(1/2).
    const JointPmf f(3, std::vector<double>(8, 0.125));
    const SumPmf p = sum_map(f);
    CHECK(p[0] == 0.125);
    CHECK(p[1] == 0.375);
    CHECK(p[2] == 0.375);
    CHECK(p[3] == 0.125);

    const ExactSparseJointPmf s(3, {{3, Rational(1, 2)}, {0, Rational(1, 2)}});
    const auto ps = sum_map(s);
    CHECK(ps[0] == Rational(1, 2));
    CHECK(ps[2] == Rational(1, 2));
}

TEST_CASE("sparse pmf invariants")
{
    CHECK_THROWS_AS(SparseJointPmf(3, {{1, 0.5}, {1, 0.5}}), InvalidArgument);
    CHECK_THROWS_AS(SparseJointPmf(3, {{8, 1.0}}), OutOfRange);
    CHECK_THROWS_AS(SparseJointPmf(3, {{1, 0.0}, {2, 1.0}}), InvalidArgument);
    const SparseJointPmf f(3, {{6, 0.25}, {1, 0.75}});
    CHECK(f.atoms()[0].index == 1);
    CHECK(f.mass(6) == 0.25);
    CHECK(f.mass(5) == 0.0);
    CHECK(to_sparse(to_dense(f)) == f);
}

TEST_CASE("cross moments")
{
    const JointPmf f(2, {0.1, 0.2, 0.3, 0.4});
    const std::vector<int> one{1}, both{1, 2};
    CHECK(cross_moment(f, std::span<const int>(one)) == doctest::Approx(0.6));
    CHECK(cross_moment(f, std::span<const int>(both)) == doctest::Approx(0.4));
    const std::vector<int> bad{3};
    CHECK_THROWS_AS(cross_moment(f, std::span<const int>(bad)), OutOfRange);
    const std::vector<int> empty;
    CHECK_THROWS_AS(cross_moment(f, std::span<const int>(empty)), InvalidArgument);

    // Point mass at 111 has every cross moment equal to one.
    const SparseJointPmf point(3, {{7, 1.0}});
    const std::vector<int> all{1, 2, 3};
    CHECK(cross_moment(point, std::span<const int>(all)) == 1.0);
}

TEST_CASE("entropy")
{
    const std::vector<double> point{0.0, 1.0, 0.0};
    CHECK(entropy(std::span<const double>(point)) == 0.0);
    const std::vector<double> uniform(8, 0.125);
    CHECK(entropy(std::span<const double>(uniform)) == doctest::Approx(std::log(8.0)).epsilon(1e-15));
}

TEST_CASE("cross moment and entropy agree with definitional oracles")
{
    std::mt19937_64 gen(20240611);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 1 + trial % 6;
        const JointPmf f = random_joint(d, gen);
        std::vector<int> subset;
        for (int j = 1; j <= d; ++j)
            if (gen() & 1U)
                subset.push_back(j);
        if (subset.empty())
            subset.push_back(d);
        const double main = cross_moment(f, std::span<const int>(subset));
        CHECK(std::abs(main - oracle::naive_cross_moment(f, subset)) <= 1e-12);
        CHECK(std::abs(entropy(f) - oracle::naive_entropy(f.values())) <= 1e-12);
    }
}

TEST_CASE("round trip and level partition up to d = 12")
{
    for (int d = 1; d <= 12; ++d) {
        std::vector<int> seen(std::size_t{1} << d, 0);
        for (int k = 0; k <= d; ++k)
            for (Index i : level_indices(d, k))
                ++seen[i];
        for (Index i = 0; i < seen.size(); ++i) {
            CHECK(seen[i] == 1);
            CHECK(vector_to_index(index_to_vector(i, d)) == i);
        }
    }
    CHECK(level_indices(4, 2).front() == 3);
}

TEST_CASE("entropy of b(1/2) for d = 2")
{
    const SumPmf p({0.25, 0.5, 0.25});
    CHECK(entropy(p) == doctest::Approx(1.0397207708399179).epsilon(1e-15));
}

TEST_CASE("rational parsing and rationalization")
{
    CHECK(parse_rational("3/8") == Rational(3, 8));
    CHECK(parse_rational(" -6/8 ") == Rational(-3, 4));
    CHECK(parse_rational("0.8") == Rational(4, 5));
    CHECK(parse_rational("1.25e-1") == Rational(1, 8));
    CHECK(parse_rational("42") == Rational(42));
    CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
    CHECK_THROWS_AS(parse_rational("abc"), InvalidArgument);
    CHECK_THROWS_AS(parse_rational(""), InvalidArgument);
    CHECK(to_string(Rational(0)) == "0/1");
    CHECK(to_string(Rational(6, 8)) == "3/4");

    CHECK(rationalize(0.0) == 0);
    CHECK(rationalize(1.0) == 1);
    CHECK(rationalize(0.8) == Rational(4, 5));
    CHECK(rationalize(-0.375) == Rational(-3, 8));
    CHECK(rationalize(1.0 / 3) == Rational(1, 3));
    CHECK(rationalize(0.1 + 0.2) == Rational(3, 10));
    CHECK(rationalize(3.14159, 2e-3) == Rational(22, 7));
    CHECK_THROWS_AS(rationalize(std::nan("")), InvalidArgument);
}
