#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bernpoly/core.hpp"
#include "bernpoly/measure.hpp"

/**
 * Seeded random generation and Monte Carlo estimation of neighborhood
 * measures.  Every stochastic routine is a pure function of
 * (seed, stream_id, parameters): work is cut into fixed blocks, block b
 * draws from its own stream, and reductions run in block order, so the
 * thread count never changes a result.
 */
namespace bernpoly {

/** Independent, reproducible random stream identified by (seed, stream_id). */
class RngStream
{
    public:
        RngStream(std::uint64_t seed, std::uint64_t stream_id);

        std::uint64_t seed() const { return seed_; }
        std::uint64_t stream_id() const { return stream_id_; }

        std::uint64_t next_u64() { return engine_(); }
        /** Uniform on the open interval (0, 1). */
        double uniform();
        double exponential() { return -std::log(uniform()); }
        double normal();
        /** Gamma(shape, 1): Marsaglia–Tsang squeeze for shape >= 1, power boost below. */
        double gamma(double shape);

    private:
        std::uint64_t seed_;
        std::uint64_t stream_id_;
        std::mt19937_64 engine_;
};

/** Uniform point of the standard n-simplex (n + 1 coordinates). */
std::vector<double> sample_uniform_simplex(std::size_t n, RngStream& rng);

std::vector<double> sample_dirichlet(std::span<const double> alpha, RngStream& rng);

/**
 * Uniform draw from P(p): for each supported level an independent uniform
 * point of the C(d,k) - 1 simplex scaled by p_k.  Requires d <= 20.
 */
JointPmf sample_polytope_uniform(const SumPmf& p, RngStream& rng);

/** Uniform draw from F_d, the (2^d - 1)-simplex. */
JointPmf sample_fd_uniform(int d, RngStream& rng);

enum class Metric { sup, tv };

/**
 * The neighborhood {q in D_d : dist(q, p) <= epsilon}.  Sampling works on
 * the free coordinates (q_0, ..., q_{d-1}) with q_d = 1 - sum.
 *
 * By default the last coordinate is held to |q_d - p_d| <= epsilon as well.
 * `paper_sigma_s` drops that bound and keeps only q_d >= 0, reproducing
 * the looser region used by the original estimator.
 */
struct NeighborhoodSpec
{
    NeighborhoodSpec(SumPmf center, double epsilon, Metric metric = Metric::sup, bool paper_sigma_s = false);

    SumPmf center;
    double epsilon;
    Metric metric;
    bool paper_sigma_s;

    int dimension() const { return center.dimension(); }

    /** Bounds lo_k <= q_k <= hi_k for k = 0..d (k = d applies to 1 - sum). */
    std::vector<double> lower;
    std::vector<double> upper;

    /** Membership of q in the sup-metric region (the sampled box slice). */
    bool contains(std::span<const double> q, double tol = 1e-12) const;
};

struct HitAndRunOptions
{
    std::uint64_t burn_in = 1000;
    std::uint64_t thin = 10;
};

/**
 * Hit-and-run chain with uniform stationary law on the sup-metric region of
 * `spec`.  Starts at an interior point between the center and the
 * barycenter of D_d.
 */
class HitAndRun
{
    public:
        HitAndRun(NeighborhoodSpec spec, HitAndRunOptions options, RngStream rng);

        /** Next emitted point, after the burn-in on the first call. */
        SumPmf next();
        /** Free coordinates of the current state. */
        std::span<const double> state() const { return x_; }

    private:
        void step();
        SumPmf emit() const;

        NeighborhoodSpec spec_;
        HitAndRunOptions options_;
        RngStream rng_;
        std::vector<double> x_;
        std::vector<double> direction_;
        bool burned_in_ = false;
};

enum class Sampler { rejection, hit_and_run };

struct EstimatorOptions
{
    std::uint64_t seed = 0;
    /** 0 selects std::thread::hardware_concurrency(). */
    unsigned threads = 1;
    Sampler sampler = Sampler::rejection;
    HitAndRunOptions walk;
};

struct EstimateReport
{
    LogMeasure point_estimate;
    double std_error = 0.0;
    double relative_std_error = 0.0;
    std::uint64_t n_samples = 0;
    double acceptance_rate = 0.0;

    /** Stage 1: H^d of the region (sqrt(d + 1) times its Lebesgue volume). */
    LogMeasure region_volume;
    double region_volume_relative_std_error = 0.0;
    /** Stage 2: mean of l over uniform draws from the region. */
    LogMeasure mean_density;
    double mean_density_relative_std_error = 0.0;
};

/** Samples per reproducibility block (one RNG stream each). */
inline constexpr std::uint64_t kBlockSize = 4096;

/** H^d of the sup-metric region by rejection from its bounding box. */
EstimateReport region_volume(const NeighborhoodSpec& spec, std::uint64_t n, const EstimatorOptions& options);

/**
 * Measure of the sup neighborhood: sqrt(2^d) * Lebesgue volume * mean of l.
 * Volume and mean density come from independent draws; their relative
 * errors add in quadrature.  Requires metric sup and n >= 1000.
 */
EstimateReport estimate_neighborhood_measure(const NeighborhoodSpec& spec, std::uint64_t n,
                                             const EstimatorOptions& options);

/**
 * Measure of the TV neighborhood from the sup-region draws, keeping only
 * those with d_TV <= epsilon.  Never exceeds the sup estimate for the same
 * seed.  Requires metric tv and n >= 1000.
 */
EstimateReport estimate_tv_neighborhood_bound(const NeighborhoodSpec& spec, std::uint64_t n,
                                              const EstimatorOptions& options);

}   // namespace bernpoly
