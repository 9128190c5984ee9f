/**
 * Acceptance run: one PASS/FAIL line per criterion, each with its own time
 * limit.  Exit status is nonzero when any criterion fails.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bernpoly/binomial.hpp"
#include "bernpoly/feasibility.hpp"
#include "bernpoly/measure.hpp"
#include "bernpoly/polytope.hpp"
#include "bernpoly/sampling.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace bernpoly;

namespace {

struct Verdict
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            if (pass)
                detail << "failed: ";
            else
                detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

std::string label(Index i, int d)
{
    std::string s(static_cast<std::size_t>(d), '0');
    for (int j = 0; j < d; ++j)
        if ((i >> j) & 1U)
            s[static_cast<std::size_t>(j)] = '1';
    return s;
}

template <class T>
std::vector<BasicSparseJointPmf<T>> all_vertices(const BasicSumPmf<T>& p)
{
    std::vector<BasicSparseJointPmf<T>> out;
    auto it = extremal_enumerate(p);
    while (auto v = it.next())
        out.push_back(*v);
    return out;
}

// ---------------------------------------------------------------------------

/** Table 1 columns r_1..r_9 as (level-1 atom, level-2 atom); x_1 x_2 x_3. */
const std::vector<std::pair<std::string, std::string>> kTable1 = {
    {"100", "110"}, {"100", "101"}, {"100", "011"}, {"010", "110"}, {"010", "101"},
    {"010", "011"}, {"001", "101"}, {"001", "011"}, {"001", "110"}};

void criterion_1(Verdict& v)
{
    std::mt19937_64 gen(1);
    int pmfs = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const ExactSumPmf p = trial == 0 ? test_support::b_half_3() : test_support::random_exact_sum_pmf(3, gen);
        const auto verts = all_vertices(p);
        v.require(verts.size() == 9, "vertex count != 9");
        std::set<std::pair<std::string, std::string>> found;
        for (const auto& f : verts) {
            std::map<int, std::string> by_level;
            bool masses_ok = f.atoms().size() == 4;
            for (const auto& a : f.atoms()) {
                const int k = popcount(a.index);
                by_level[k] = label(a.index, 3);
                masses_ok = masses_ok && a.mass == p[k];
            }
            v.require(masses_ok, "atom masses differ from p_k");
            found.insert({by_level[1], by_level[2]});
        }
        v.require(found == std::set(kTable1.begin(), kTable1.end()), "atom patterns differ from Table 1");
        ++pmfs;
    }

    // Table 2: p = p_cx^{1.2} = (0, 4/5, 1/5, 0), exact masses 0.8 / 0.2.
    const ExactSumPmf cx = convex_min_pmf(3, Rational(6, 5));
    v.require(cx == ExactSumPmf({Rational(0), Rational(4, 5), Rational(1, 5), Rational(0)}), "p_cx^1.2 != (0, 4/5, 1/5, 0)");
    const auto verts = all_vertices(cx);
    v.require(verts.size() == 9, "Table 2 vertex count != 9");
    std::set<std::pair<std::string, std::string>> found;
    for (const auto& f : verts) {
        v.require(f.atoms().size() == 2, "Table 2 vertex without two atoms");
        std::map<int, std::string> by_level;
        for (const auto& a : f.atoms()) {
            const int k = popcount(a.index);
            by_level[k] = label(a.index, 3);
            v.require((k == 1 && a.mass == Rational(4, 5)) || (k == 2 && a.mass == Rational(1, 5)),
                      "Table 2 mass not exactly 0.8 / 0.2");
        }
        found.insert({by_level[1], by_level[2]});
    }
    v.require(found == std::set(kTable1.begin(), kTable1.end()), "Table 2 patterns differ");
    v.detail << pmfs << " full-support pmfs x 9 vertices match Table 1 as a set; Table 2 exact";
}

// ---------------------------------------------------------------------------

ExactJointPmf joint(std::initializer_list<std::pair<const char*, Rational>> atoms)
{
    std::vector<Rational> values(8, Rational(0));
    for (const auto& [x, m] : atoms) {
        Index i = 0;
        for (int j = 0; j < 3; ++j)
            if (x[j] == '1')
                i |= Index{1} << j;
        values[i] = m;
    }
    return ExactJointPmf(3, values);
}

void criterion_2(Verdict& v)
{
    const ExactSumPmf b = test_support::b_half_3();
    const MeanVector theta({Rational(1, 4), Rational(2, 4), Rational(3, 4)});
    const auto verts = constrained_vertices(b, theta);
    const std::vector<ExactJointPmf> table3 = {
        joint({{"000", Rational(1, 8)}, {"110", Rational(1, 8)}, {"001", Rational(3, 8)}, {"011", Rational(2, 8)},
               {"111", Rational(1, 8)}}),
        joint({{"000", Rational(1, 8)}, {"010", Rational(1, 8)}, {"001", Rational(2, 8)}, {"101", Rational(1, 8)},
               {"011", Rational(2, 8)}, {"111", Rational(1, 8)}}),
        joint({{"000", Rational(1, 8)}, {"100", Rational(1, 8)}, {"001", Rational(2, 8)}, {"011", Rational(3, 8)},
               {"111", Rational(1, 8)}})};
    v.require(verts.size() == 3, "constrained vertex count != 3");
    v.require(verts == table3, "vertices differ from Table 3");

    struct Row
    {
        std::vector<int> subset;
        Rational lower, upper;
    };
    const std::vector<Row> table4 = {{{1}, Rational(1, 4), Rational(1, 4)},
                                     {{2}, Rational(1, 2), Rational(1, 2)},
                                     {{3}, Rational(3, 4), Rational(3, 4)},
                                     {{1, 2}, Rational(1, 8), Rational(1, 4)},
                                     {{1, 3}, Rational(1, 8), Rational(1, 4)},
                                     {{2, 3}, Rational(3, 8), Rational(1, 2)},
                                     {{1, 2, 3}, Rational(1, 8), Rational(1, 8)}};
    for (const auto& row : table4) {
        const auto [lo, hi] = constrained_moment_bounds(b, theta, std::span<const int>(row.subset));
        v.require(lo == row.lower && hi == row.upper, "Table 4 row mismatch");
    }
    v.detail << "3 exact vertices equal Table 3; 7 Table 4 rows exact";
}

// ---------------------------------------------------------------------------

void criterion_3(Verdict& v)
{
    const ExactSumPmf p3 = test_support::b_half_3();
    const ExactSumPmf p4({Rational(1, 16), Rational(4, 16), Rational(6, 16), Rational(4, 16), Rational(1, 16)});
    for (const auto& p : {p3, p4}) {
        std::set<std::vector<Rational>> lib, brute;
        for (const auto& f : all_vertices(p)) {
            const auto dense = to_dense(f);
            lib.insert(std::vector<Rational>(dense.values().begin(), dense.values().end()));
        }
        for (const auto& f : oracle::brute_vertices(p))
            brute.insert(std::vector<Rational>(f.values().begin(), f.values().end()));
        v.require(lib == brute, "vertex set differs from the basis oracle at d = " + std::to_string(p.dimension()));
        v.detail << "d=" << p.dimension() << ": " << lib.size() << " (oracle " << brute.size() << ") ";
        const std::size_t expected = p.dimension() == 3 ? 9 : 96;
        v.require(lib.size() == expected, "vertex count mismatch");
        v.require(describe(p).vertex_count == expected, "describe() count mismatch");
    }
}

// ---------------------------------------------------------------------------

double density(std::span<const double> p)
{
    std::vector<double> v(p.begin(), p.end());
    for (auto& x : v)
        x = std::max(x, 0.0);
    double s = 0.0;
    for (double x : v)
        s += x;
    for (auto& x : v)
        x /= s;
    return density_l(SumPmf(v)).value();
}

void criterion_4(Verdict& v)
{
    const double nc2 = normalizing_constant(2).value();
    v.require(std::abs(nc2 - 1.0 / 3) <= 4e-16, "normalizing_constant(2) != 1/3");
    oracle::QuadratureSpec spec;
    spec.dimension = 2;
    spec.nodes = 10;
    const double q2 = 2.0 * oracle::quad_integral(density, spec).value;
    v.require(std::abs(q2 - nc2) <= 1e-9, "d = 2 quadrature off by more than 1e-9");

    spec.dimension = 3;
    spec.nodes = 12;
    const double nc3 = normalizing_constant(3).value();
    const double q3 = std::sqrt(8.0) * oracle::quad_integral(density, spec).value;
    v.require(std::abs(q3 - nc3) <= 1e-6 * nc3, "d = 3 quadrature off by more than 1e-6 (relative)");

    const double block = std::log(0.375 * 0.375 * std::sqrt(3.0) / 2);
    const double closed = 2 * block;
    const double ambient = polytope_measure(SumPmf({0.125, 0.375, 0.375, 0.125})).ambient.log_value();
    v.require(std::abs(ambient - closed) <= 1e-12 * std::abs(closed), "ambient measure differs from closed form");
    v.detail << "|nc2-quad|=" << std::abs(q2 - nc2) << " rel|nc3-quad|=" << std::abs(q3 - nc3) / nc3
             << " log-rel ambient gap=" << std::abs(ambient - closed) / std::abs(closed);
}

// ---------------------------------------------------------------------------

void criterion_5(Verdict& v)
{
    const int n = 100000;
    RngStream rng(20240501, 0);
    std::vector<std::array<double, 4>> s(n);
    for (int t = 0; t < n; ++t) {
        const SumPmf q = sum_map(sample_fd_uniform(3, rng));
        s[static_cast<std::size_t>(t)] = {q[0], q[1], q[2], q[3]};
    }
    const double alpha[] = {1, 3, 3, 1};
    const double a0 = 8;
    double mean[4] = {};
    for (const auto& x : s)
        for (int i = 0; i < 4; ++i)
            mean[i] += x[static_cast<std::size_t>(i)] / n;
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        double var = 0.0;
        for (const auto& x : s)
            var += std::pow(x[static_cast<std::size_t>(i)] - mean[i], 2) / (n - 1);
        const double z = std::abs(mean[i] - alpha[i] / a0) / std::sqrt(var / n);
        worst = std::max(worst, z);
        v.require(z <= 4.0, "mean " + std::to_string(i) + " beyond 4 SE");
    }
    double worst_cov = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const double expected = ((i == j ? alpha[i] * a0 : 0.0) - alpha[i] * alpha[j]) / (a0 * a0 * (a0 + 1));
            double c = 0.0;
            for (const auto& x : s)
                c += (x[static_cast<std::size_t>(i)] - mean[i]) * (x[static_cast<std::size_t>(j)] - mean[j]);
            c /= n - 1;
            double var_prod = 0.0;
            for (const auto& x : s) {
                const double prod =
                    (x[static_cast<std::size_t>(i)] - mean[i]) * (x[static_cast<std::size_t>(j)] - mean[j]);
                var_prod += (prod - c) * (prod - c);
            }
            var_prod /= n - 1;
            const double z = std::abs(c - expected) / std::sqrt(var_prod / n);
            worst_cov = std::max(worst_cov, z);
            v.require(z <= 4.0, "covariance (" + std::to_string(i) + "," + std::to_string(j) + ") beyond 4 SE");
        }
    v.detail << "n=1e5, max |z| means " << worst << ", covariances " << worst_cov;
}

// ---------------------------------------------------------------------------

void criterion_6(Verdict& v)
{
    v.require(exact_maximal_pmf(3) == ExactSumPmf({Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)}),
              "maximal_pmf(3) != (0, 1/2, 1/2, 0)");
    v.require(maximal_pmf(3) == SumPmf({0.0, 0.5, 0.5, 0.0}), "double maximal_pmf(3) differs");
    double worst = 0.0;
    for (int d = 2; d <= 12; ++d)
        worst = std::max(worst, std::abs(curve_argmax(d) - 0.5));
    v.require(worst <= 1e-8, "curve_argmax off 1/2 by more than 1e-8");
    double prev = bin_vs_mode(3).d_sup;
    for (int d = 4; d <= 20; ++d) {
        const double cur = bin_vs_mode(d).d_sup;
        v.require(cur < prev, "d_sup not strictly decreasing at d = " + std::to_string(d));
        prev = cur;
    }
    v.require(prev < 0.01, "d_sup at d = 20 not below 0.01");
    v.detail << "max |argmax-1/2|=" << worst << ", d_sup(20)=" << prev;
}

// ---------------------------------------------------------------------------

void criterion_7(Verdict& v)
{
    const SumPmf c({0.25, 0.5, 0.25});
    EstimatorOptions opt;
    opt.seed = 7;
    opt.threads = 0;
    for (double eps : {0.05, 0.1}) {
        const auto r = estimate_neighborhood_measure(NeighborhoodSpec(c, eps), 100000, opt);
        oracle::QuadratureSpec spec;
        spec.dimension = 2;
        spec.nodes = 8;
        spec.region = oracle::sup_region(c.values(), eps);
        const auto q = oracle::quad_integral([](std::span<const double> p) { return p[1]; }, spec);
        // mu = sqrt(2^2) * integral of l = 2 * integral of p_1 over the region.
        const double truth = 2.0 * q.value;
        const double combined = std::hypot(r.std_error, 2.0 * q.error);
        const double z = std::abs(r.point_estimate.value() - truth) / combined;
        v.require(z <= 4.0, "estimate beyond 4 combined SE at eps = " + std::to_string(eps));
        const auto tv = estimate_tv_neighborhood_bound(NeighborhoodSpec(c, eps, Metric::tv), 100000, opt);
        v.require(tv.point_estimate.value() <= r.point_estimate.value(), "TV estimate above sup estimate");
        v.detail << "eps=" << eps << ": MC " << r.point_estimate.value() << " +- " << r.std_error << " vs quad "
                 << truth << " (z=" << z << "), TV " << tv.point_estimate.value() << "; ";
    }
}

// ---------------------------------------------------------------------------

bool bit_identical(const EstimateReport& a, const EstimateReport& b)
{
    const double x[] = {a.point_estimate.log_value(), a.std_error, a.acceptance_rate};
    const double y[] = {b.point_estimate.log_value(), b.std_error, b.acceptance_rate};
    return std::memcmp(x, y, sizeof x) == 0;
}

void criterion_8(Verdict& v)
{
    std::mt19937_64 gen(8);

    // Extremal entropy equals H(p).
    double worst_h = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 4;
        const SumPmf p = test_support::random_sum_pmf(d, gen);
        const double hp = oracle::naive_entropy(p.values());
        for (const auto& f : all_vertices(p)) {
            std::vector<double> masses;
            for (const auto& a : f.atoms())
                masses.push_back(a.mass);
            worst_h = std::max(worst_h, std::abs(oracle::naive_entropy(masses) - hp));
        }
    }
    v.require(worst_h <= 1e-12, "extremal entropy differs from H(p)");

    // Moment bounds are attained at vertices.
    bool sharp = true;
    for (int d = 1; d <= 4; ++d)
        for (int trial = 0; trial < 10; ++trial) {
            const SumPmf p = test_support::random_sum_pmf(d, gen);
            const auto verts = all_vertices(p);
            for (int k = 1; k <= d; ++k) {
                std::vector<int> subset;
                for (int j = 1; j <= k; ++j)
                    subset.push_back(j);
                double lo = 2.0, hi = -1.0;
                for (const auto& f : verts) {
                    const double m = oracle::naive_cross_moment(to_dense(f), subset);
                    lo = std::min(lo, m);
                    hi = std::max(hi, m);
                }
                const auto [blo, bhi] = moment_bounds(p, k);
                sharp = sharp && std::abs(lo - blo) <= 1e-12 && std::abs(hi - bhi) <= 1e-12;
            }
        }
    v.require(sharp, "moment bounds not attained by the vertex scan");

    // Decompose and reconstruct.
    double worst_rt = 0.0;
    for (int d = 1; d <= 5; ++d)
        for (int trial = 0; trial < 5; ++trial) {
            const SumPmf p = test_support::random_sum_pmf(d, gen);
            RngStream rng(99, static_cast<std::uint64_t>(10 * d + trial));
            const JointPmf f = sample_polytope_uniform(p, rng);
            const auto flat = flat_weights(decompose(f, p), p);
            const auto verts = all_vertices(p);
            std::vector<double> rebuilt(f.size(), 0.0);
            for (std::size_t s = 0; s < verts.size(); ++s)
                for (const auto& a : verts[s].atoms())
                    rebuilt[a.index] += flat[s] * a.mass;
            for (Index i = 0; i < f.size(); ++i)
                worst_rt = std::max(worst_rt, std::abs(rebuilt[i] - f[i]));
        }
    v.require(worst_rt <= 1e-12, "decompose round trip above 1e-12");

    // Bit-identical reruns for any thread count.
    bool same = true;
    const SumPmf c({0.1, 0.3, 0.4, 0.2});
    for (Sampler s : {Sampler::rejection, Sampler::hit_and_run}) {
        EstimatorOptions opt;
        opt.seed = 2024;
        opt.sampler = s;
        opt.threads = 1;
        const auto base = estimate_neighborhood_measure(NeighborhoodSpec(c, 0.1), 20000, opt);
        const auto base_tv = estimate_tv_neighborhood_bound(NeighborhoodSpec(c, 0.1, Metric::tv), 20000, opt);
        for (unsigned t : {1U, 2U, 4U, 8U, 0U}) {
            opt.threads = t;
            same = same && bit_identical(base, estimate_neighborhood_measure(NeighborhoodSpec(c, 0.1), 20000, opt));
            same = same
                && bit_identical(base_tv,
                                 estimate_tv_neighborhood_bound(NeighborhoodSpec(c, 0.1, Metric::tv), 20000, opt));
        }
    }
    RngStream a(5, 1), b(5, 1);
    same = same && sample_polytope_uniform(c, a) == sample_polytope_uniform(c, b);
    v.require(same, "reruns not bit-identical");
    v.detail << "entropy gap " << worst_h << ", round trip " << worst_rt << ", sharp bounds, bit-identical reruns";
}

}   // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        double limit_seconds;
        std::function<void(Verdict&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "Table 1 / Table 2 reproduction", 1.0, criterion_1},
        {2, "Tables 3-4 reproduction", 1.0, criterion_2},
        {3, "vertex counts vs exhaustive oracle", 60.0, criterion_3},
        {4, "measure identities", 10.0, criterion_4},
        {5, "Dirichlet pushforward", 30.0, criterion_5},
        {6, "mode and binomial curve", 30.0, criterion_6},
        {7, "neighborhood estimator", 60.0, criterion_7},
        {8, "property suites", 120.0, criterion_8},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(v);
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_seconds) {
            std::ostringstream msg;
            msg << "runtime " << secs << " s over the " << c.limit_seconds << " s limit";
            v.require(false, msg.str());
        }
        std::printf("%s criterion %d (%s) [%.3f s / %.0f s]: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.limit_seconds, v.detail.str().c_str());
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
