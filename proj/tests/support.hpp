#pragma once

#include <random>
#include <vector>

#include "bernpoly/core.hpp"

namespace test_support {

/** Normalized exponential weights; the first entry absorbs rounding. */
inline std::vector<double> random_masses(std::size_t n, std::mt19937_64& gen)
{
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(n);
    double total = 0.0;
    for (auto& x : v) {
        x = e(gen);
        total += x;
    }
    double s = 0.0;
    for (auto& x : v) {
        x /= total;
        s += x;
    }
    v[0] += 1.0 - s;
    return v;
}

inline bernpoly::SumPmf random_sum_pmf(int d, std::mt19937_64& gen)
{
    return bernpoly::SumPmf(random_masses(static_cast<std::size_t>(d) + 1, gen));
}

/** Random exact pmf with denominators up to 1000. */
inline bernpoly::ExactSumPmf random_exact_sum_pmf(int d, std::mt19937_64& gen)
{
    std::uniform_int_distribution<int> u(1, 1000);
    std::vector<bernpoly::Rational> v;
    bernpoly::Rational total = 0;
    for (int k = 0; k <= d; ++k) {
        v.emplace_back(u(gen));
        total += v.back();
    }
    for (auto& x : v)
        x /= total;
    return bernpoly::ExactSumPmf(std::move(v));
}

inline bernpoly::ExactSumPmf b_half_3()
{
    using bernpoly::Rational;
    return bernpoly::ExactSumPmf({Rational(1, 8), Rational(3, 8), Rational(3, 8), Rational(1, 8)});
}

}   // namespace test_support
