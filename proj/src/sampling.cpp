#include "bernpoly/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace bernpoly {

namespace {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id)
{
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state = a ^ stream_id;
    std::vector<std::uint32_t> words;
    for (int i = 0; i < 8; ++i) {
        const std::uint64_t w = splitmix64(state);
        words.push_back(static_cast<std::uint32_t>(w));
        words.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

// Stream namespaces keep the stages of one estimate independent.
constexpr std::uint64_t kVolumeStreams = 1ULL << 40;
constexpr std::uint64_t kDensityStreams = 2ULL << 40;
constexpr std::uint64_t kWalkStreams = 3ULL << 40;

/** Runs fn(block) for every block; blocks are claimed dynamically. */
template <class Fn>
void for_each_block(std::uint64_t blocks, unsigned threads, Fn fn)
{
    if (threads == 0)
        threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
    if (threads <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b)
            fn(b);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            try {
                for (std::uint64_t b = next++; b < blocks && !failed; b = next++)
                    fn(b);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

std::uint64_t block_count(std::uint64_t n) { return (n + kBlockSize - 1) / kBlockSize; }

std::uint64_t block_length(std::uint64_t n, std::uint64_t b)
{
    return std::min(kBlockSize, n - b * kBlockSize);
}

/** Free coordinates drawn uniformly from the bounding box of the region. */
void draw_box(const NeighborhoodSpec& spec, RngStream& rng, std::vector<double>& x)
{
    const int d = spec.dimension();
    for (int j = 0; j < d; ++j)
        x[static_cast<std::size_t>(j)] = spec.lower[static_cast<std::size_t>(j)]
            + (spec.upper[static_cast<std::size_t>(j)] - spec.lower[static_cast<std::size_t>(j)]) * rng.uniform();
}

/** Whether the implied last coordinate 1 - sum x satisfies its bounds. */
bool last_ok(const NeighborhoodSpec& spec, std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v;
    const double last = 1.0 - s;
    const auto d = static_cast<std::size_t>(spec.dimension());
    return spec.lower[d] <= last && last <= spec.upper[d];
}

double log_box_volume(const NeighborhoodSpec& spec)
{
    double total = 0.0;
    for (int j = 0; j < spec.dimension(); ++j) {
        const double w = spec.upper[static_cast<std::size_t>(j)] - spec.lower[static_cast<std::size_t>(j)];
        if (w <= 0.0)
            return -std::numeric_limits<double>::infinity();
        total += std::log(w);
    }
    return total;
}

/** log l at free coordinates x (last coordinate implied). */
double log_density_at(int d, std::span<const double> x)
{
    std::vector<double> q(x.begin(), x.end());
    double s = 0.0;
    for (double v : x)
        s += v;
    q.push_back(std::max(0.0, 1.0 - s));
    double total = 0.0;
    for (int k = 0; k <= d; ++k) {
        const std::uint64_t n = binomial_u64(d, k) - 1;
        if (n == 0)
            continue;
        if (q[static_cast<std::size_t>(k)] <= 0.0)
            return -std::numeric_limits<double>::infinity();
        total += static_cast<double>(n) * std::log(q[static_cast<std::size_t>(k)])
            - std::lgamma(static_cast<double>(n) + 1.0);
    }
    return total;
}

double tv_distance_at(const SumPmf& center, std::span<const double> x)
{
    double s = 0.0, total = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        s += x[j];
        total += std::abs(x[j] - center[static_cast<int>(j)]);
    }
    total += std::abs(1.0 - s - center[center.dimension()]);
    return 0.5 * total;
}

void check_sample_size(std::uint64_t n)
{
    if (n < 1000)
        throw InvalidArgument("neighborhood estimators need n >= 1000 samples");
}

struct Acceptance
{
    std::uint64_t accepted = 0;
    std::uint64_t drawn = 0;
};

Acceptance count_box_acceptance(const NeighborhoodSpec& spec, std::uint64_t n, const EstimatorOptions& options)
{
    const std::uint64_t blocks = block_count(n);
    std::vector<std::uint64_t> hits(blocks, 0);
    for_each_block(blocks, options.threads, [&](std::uint64_t b) {
        RngStream rng(options.seed, kVolumeStreams + b);
        std::vector<double> x(static_cast<std::size_t>(spec.dimension()));
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < block_length(n, b); ++i) {
            draw_box(spec, rng, x);
            if (last_ok(spec, x))
                ++h;
        }
        hits[b] = h;
    });
    Acceptance a;
    a.drawn = n;
    for (auto h : hits)
        a.accepted += h;
    return a;
}

struct DensityDraws
{
    std::vector<double> log_density;   // one per uniform draw, in sample order
    std::vector<double> tv;            // d_TV(draw, center)
};

DensityDraws draw_region_samples(const NeighborhoodSpec& spec, std::uint64_t n, const EstimatorOptions& options)
{
    const int d = spec.dimension();
    DensityDraws out;
    out.log_density.resize(n);
    out.tv.resize(n);
    const std::uint64_t blocks = block_count(n);
    for_each_block(blocks, options.threads, [&](std::uint64_t b) {
        const std::uint64_t len = block_length(n, b);
        const std::uint64_t base = b * kBlockSize;
        if (options.sampler == Sampler::rejection) {
            RngStream rng(options.seed, kDensityStreams + b);
            std::vector<double> x(static_cast<std::size_t>(d));
            const std::uint64_t max_attempts = 100'000 * len;
            std::uint64_t attempts = 0;
            for (std::uint64_t i = 0; i < len;) {
                if (++attempts > max_attempts)
                    throw Error("rejection sampler: acceptance rate below 1e-5; use the hit-and-run sampler");
                draw_box(spec, rng, x);
                if (!last_ok(spec, x))
                    continue;
                out.log_density[base + i] = log_density_at(d, x);
                out.tv[base + i] = tv_distance_at(spec.center, x);
                ++i;
            }
        } else {
            HitAndRun walk(spec, options.walk, RngStream(options.seed, kWalkStreams + b));
            for (std::uint64_t i = 0; i < len; ++i) {
                walk.next();
                const auto x = walk.state();
                out.log_density[base + i] = log_density_at(d, x);
                out.tv[base + i] = tv_distance_at(spec.center, x);
            }
        }
    });
    return out;
}

struct MeanEstimate
{
    LogMeasure mean;
    double relative_std_error = 0.0;
};

/**
 * Mean of exp(v_i) over the draws (optionally masked), with its relative
 * standard error: iid for rejection draws, batch means over blocks for
 * hit-and-run chains.
 */
MeanEstimate mean_of_exp(std::span<const double> log_values, std::span<const double> tv, double tv_limit,
                         bool masked, bool batch_means)
{
    double shift = -std::numeric_limits<double>::infinity();
    for (double v : log_values)
        shift = std::max(shift, v);
    MeanEstimate out;
    out.mean = LogMeasure::zero();
    if (!std::isfinite(shift))
        return out;

    auto weight = [&](std::size_t i) {
        if (masked && !(tv[i] <= tv_limit))
            return 0.0;
        return std::exp(log_values[i] - shift);
    };
    const std::size_t n = log_values.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += weight(i);
    if (sum == 0.0)
        return out;
    const double mean = sum / static_cast<double>(n);

    double var_of_mean = 0.0;
    if (!batch_means) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = weight(i) - mean;
            ss += diff * diff;
        }
        var_of_mean = ss / static_cast<double>(n - 1) / static_cast<double>(n);
    } else {
        std::vector<double> batch;
        for (std::size_t start = 0; start < n; start += kBlockSize) {
            const std::size_t stop = std::min<std::size_t>(n, start + kBlockSize);
            double s = 0.0;
            for (std::size_t i = start; i < stop; ++i)
                s += weight(i);
            batch.push_back(s / static_cast<double>(stop - start));
        }
        if (batch.size() < 2)
            throw InvalidArgument("hit-and-run error estimate needs at least two blocks of 4096 samples");
        double ss = 0.0;
        for (double m : batch)
            ss += (m - mean) * (m - mean);
        var_of_mean = ss / static_cast<double>(batch.size() - 1) / static_cast<double>(batch.size());
    }
    out.mean = LogMeasure::from_log(std::log(mean) + shift);
    out.relative_std_error = std::sqrt(var_of_mean) / mean;
    return out;
}

struct TwoStage
{
    EstimateReport sup;
    EstimateReport tv;
};

EstimateReport combine(const EstimateReport& volume, const MeanEstimate& density, int d, std::uint64_t n)
{
    EstimateReport r;
    r.n_samples = n;
    r.acceptance_rate = volume.acceptance_rate;
    r.region_volume = volume.point_estimate;
    r.region_volume_relative_std_error = volume.relative_std_error;
    r.mean_density = density.mean;
    r.mean_density_relative_std_error = density.relative_std_error;
    // mu = sqrt(2^d) * Lebesgue volume * mean l, Lebesgue = H^d / sqrt(d + 1).
    const LogMeasure factor = LogMeasure::from_log(0.5 * d * std::log(2.0) - 0.5 * std::log(d + 1.0));
    r.point_estimate = factor * volume.point_estimate * density.mean;
    r.relative_std_error = std::hypot(volume.relative_std_error, density.relative_std_error);
    r.std_error = r.point_estimate.value() * r.relative_std_error;
    return r;
}

TwoStage run_two_stage(const NeighborhoodSpec& spec, std::uint64_t n, const EstimatorOptions& options)
{
    check_sample_size(n);
    NeighborhoodSpec sup_spec(spec.center, spec.epsilon, Metric::sup, spec.paper_sigma_s);
    if (!(sup_spec.epsilon > 0.0))
        throw InvalidArgument("neighborhood estimators need epsilon > 0");
    const EstimateReport volume = region_volume(sup_spec, n, options);
    const DensityDraws draws = draw_region_samples(sup_spec, n, options);
    const bool batch = options.sampler == Sampler::hit_and_run;
    const MeanEstimate sup_mean = mean_of_exp(draws.log_density, draws.tv, 0.0, false, batch);
    const MeanEstimate tv_mean = mean_of_exp(draws.log_density, draws.tv, spec.epsilon, true, batch);
    return {combine(volume, sup_mean, spec.dimension(), n), combine(volume, tv_mean, spec.dimension(), n)};
}

}   // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id))
{
}

double RngStream::uniform()
{
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal()
{
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    return r * std::cos(2.0 * std::numbers::pi * uniform());
}

double RngStream::gamma(double shape)
{
    if (!(shape > 0.0) || !std::isfinite(shape))
        throw InvalidArgument("gamma shape must be positive and finite");
    if (shape < 1.0)
        return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double dd = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * dd);
    while (true) {
        const double z = normal();
        double v = 1.0 + c * z;
        if (v <= 0.0)
            continue;
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z)
            return dd * v;
        if (std::log(u) < 0.5 * z * z + dd * (1.0 - v + std::log(v)))
            return dd * v;
    }
}

std::vector<double> sample_uniform_simplex(std::size_t n, RngStream& rng)
{
    std::vector<double> x(n + 1);
    if (n == 0) {
        x[0] = 1.0;
        return x;
    }
    double total = 0.0;
    for (auto& v : x) {
        v = rng.exponential();
        total += v;
    }
    for (auto& v : x)
        v /= total;
    return x;
}

std::vector<double> sample_dirichlet(std::span<const double> alpha, RngStream& rng)
{
    if (alpha.empty())
        throw InvalidArgument("Dirichlet needs at least one parameter");
    std::vector<double> x;
    x.reserve(alpha.size());
    double total = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0))
            throw InvalidArgument("Dirichlet parameters must be positive");
        x.push_back(rng.gamma(a));
        total += x.back();
    }
    for (auto& v : x)
        v /= total;
    return x;
}

JointPmf sample_polytope_uniform(const SumPmf& p, RngStream& rng)
{
    const int d = p.dimension();
    check_dense_dimension(d);
    std::vector<double> f(std::size_t{1} << d, 0.0);
    for (int k : p.support()) {
        const auto level = level_indices(d, k);
        const auto w = sample_uniform_simplex(level.size() - 1, rng);
        for (std::size_t j = 0; j < level.size(); ++j)
            f[level[j]] = p[k] * w[j];
    }
    return JointPmf(d, std::move(f));
}

JointPmf sample_fd_uniform(int d, RngStream& rng)
{
    check_dense_dimension(d);
    return JointPmf(d, sample_uniform_simplex((std::size_t{1} << d) - 1, rng));
}

NeighborhoodSpec::NeighborhoodSpec(SumPmf center_, double epsilon_, Metric metric_, bool paper_sigma_s_)
    : center(std::move(center_)), epsilon(epsilon_), metric(metric_), paper_sigma_s(paper_sigma_s_)
{
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw InvalidArgument("neighborhood radius epsilon must be finite and >= 0");
    const int d = center.dimension();
    for (int k = 0; k <= d; ++k) {
        lower.push_back(std::max(center[k] - epsilon, 0.0));
        upper.push_back(std::min(center[k] + epsilon, 1.0));
    }
    if (paper_sigma_s) {
        lower[static_cast<std::size_t>(d)] = 0.0;
        upper[static_cast<std::size_t>(d)] = 1.0;
    }
}

bool NeighborhoodSpec::contains(std::span<const double> q, double tol) const
{
    const int d = dimension();
    if (static_cast<int>(q.size()) != d + 1)
        throw DimensionMismatch("point must have d + 1 coordinates");
    double s = 0.0;
    for (int k = 0; k <= d; ++k) {
        const double v = q[static_cast<std::size_t>(k)];
        s += v;
        if (v < lower[static_cast<std::size_t>(k)] - tol || v > upper[static_cast<std::size_t>(k)] + tol)
            return false;
    }
    return std::abs(s - 1.0) <= tol;
}

HitAndRun::HitAndRun(NeighborhoodSpec spec, HitAndRunOptions options, RngStream rng)
    : spec_(std::move(spec)), options_(options), rng_(std::move(rng))
{
    if (options_.thin == 0)
        throw InvalidArgument("hit-and-run thinning must be >= 1");
    const int d = spec_.dimension();
    const double t = std::min(0.5, spec_.epsilon / 2.0);
    const double bary = 1.0 / (d + 1.0);
    for (int j = 0; j < d; ++j)
        x_.push_back((1.0 - t) * spec_.center[j] + t * bary);
    direction_.resize(static_cast<std::size_t>(d));
}

void HitAndRun::step()
{
    const std::size_t d = x_.size();
    double norm = 0.0;
    for (auto& u : direction_) {
        u = rng_.normal();
        norm += u * u;
    }
    norm = std::sqrt(norm);
    for (auto& u : direction_)
        u /= norm;

    double t_min = -std::numeric_limits<double>::infinity();
    double t_max = std::numeric_limits<double>::infinity();
    auto clip = [&](double value, double slope, double lo, double hi) {
        // lo <= value + t * slope <= hi
        if (slope > 0.0) {
            t_min = std::max(t_min, (lo - value) / slope);
            t_max = std::min(t_max, (hi - value) / slope);
        } else if (slope < 0.0) {
            t_min = std::max(t_min, (hi - value) / slope);
            t_max = std::min(t_max, (lo - value) / slope);
        }
    };
    double s = 0.0, su = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        clip(x_[j], direction_[j], spec_.lower[j], spec_.upper[j]);
        s += x_[j];
        su += direction_[j];
    }
    clip(1.0 - s, -su, spec_.lower[d], spec_.upper[d]);
    if (!(t_max > t_min))
        return;   // degenerate chord: the region is (locally) a point
    const double t = t_min + (t_max - t_min) * rng_.uniform();
    for (std::size_t j = 0; j < d; ++j)
        x_[j] = std::clamp(x_[j] + t * direction_[j], spec_.lower[j], spec_.upper[j]);
}

SumPmf HitAndRun::emit() const
{
    std::vector<double> q(x_.begin(), x_.end());
    double s = 0.0;
    for (double v : x_)
        s += v;
    q.push_back(std::max(0.0, 1.0 - s));
    return SumPmf(std::move(q));
}

SumPmf HitAndRun::next()
{
    if (!burned_in_) {
        for (std::uint64_t i = 0; i < options_.burn_in; ++i)
            step();
        burned_in_ = true;
    }
    for (std::uint64_t i = 0; i < options_.thin; ++i)
        step();
    return emit();
}

EstimateReport region_volume(const NeighborhoodSpec& spec, std::uint64_t n, const EstimatorOptions& options)
{
    if (n == 0)
        throw InvalidArgument("region_volume needs n >= 1");
    const int d = spec.dimension();
    const Acceptance acc = count_box_acceptance(spec, n, options);
    const double rate = static_cast<double>(acc.accepted) / static_cast<double>(acc.drawn);

    EstimateReport r;
    r.n_samples = n;
    r.acceptance_rate = rate;
    const double log_box = log_box_volume(spec);
    if (acc.accepted == 0 || !std::isfinite(log_box)) {
        r.point_estimate = LogMeasure::zero();
    } else {
        r.point_estimate = LogMeasure::from_log(0.5 * std::log(d + 1.0) + log_box + std::log(rate));
        r.relative_std_error = std::sqrt((1.0 - rate) / (rate * static_cast<double>(n)));
        r.std_error = r.point_estimate.value() * r.relative_std_error;
    }
    r.region_volume = r.point_estimate;
    r.region_volume_relative_std_error = r.relative_std_error;
    r.mean_density = LogMeasure::one();
    return r;
}

EstimateReport estimate_neighborhood_measure(const NeighborhoodSpec& spec, std::uint64_t n,
                                             const EstimatorOptions& options)
{
    if (spec.metric != Metric::sup)
        throw Unsupported("estimate_neighborhood_measure needs the sup metric; "
                          "use estimate_tv_neighborhood_bound for total variation");
    return run_two_stage(spec, n, options).sup;
}

EstimateReport estimate_tv_neighborhood_bound(const NeighborhoodSpec& spec, std::uint64_t n,
                                              const EstimatorOptions& options)
{
    if (spec.metric != Metric::tv)
        throw InvalidArgument("estimate_tv_neighborhood_bound needs the tv metric");
    return run_two_stage(spec, n, options).tv;
}

}   // namespace bernpoly
