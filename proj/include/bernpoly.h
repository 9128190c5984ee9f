#ifndef BERNPOLY_H
#define BERNPOLY_H

/**
 * C interface to the bernpoly library.
 *
 * Objects are opaque handles created by bp_*_new / bp_*_from_* functions and
 * released with the matching bp_*_free (which accepts NULL).  Every fallible
 * call returns a bp_status; on failure bp_last_error() holds a message for
 * the calling thread until its next failing call.  Strings returned through
 * char** outputs are heap-allocated and must be released with
 * bp_string_free.
 *
 * JSON conventions:
 *   sum pmf            [p_0, ..., p_d]
 *   dense joint pmf    {"d": d, "values": [...]}     (index bit j-1 is X_j)
 *   sparse joint pmf   {"d": d, "atoms": [[index, mass], ...]}
 * Exact masses are "num/den" strings.  A sum pmf given with at least one
 * string entry is held exactly, and exact inputs select the exact code paths.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(BERNPOLY_BUILDING)
#define BP_API __attribute__((visibility("default")))
#else
#define BP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int bp_status;

enum
{
    BP_OK = 0,
    /** An iterator is exhausted. */
    BP_END = 1,
    BP_ERR_NULL_ARGUMENT = -1,
    BP_ERR_INVALID_ARGUMENT = -2,
    BP_ERR_OUT_OF_RANGE = -3,
    BP_ERR_DIMENSION_MISMATCH = -4,
    /** A size or dimension limit was hit. */
    BP_ERR_GUARD_EXCEEDED = -5,
    BP_ERR_INFEASIBLE = -6,
    BP_ERR_UNSUPPORTED = -7,
    BP_ERR_INTERNAL = -8
};

typedef enum
{
    BP_METRIC_SUP = 0,
    BP_METRIC_TV = 1
} bp_metric;

typedef enum
{
    BP_SAMPLER_REJECTION = 0,
    BP_SAMPLER_HIT_AND_RUN = 1
} bp_sampler;

typedef struct bp_sum_pmf bp_sum_pmf;
typedef struct bp_joint_pmf bp_joint_pmf;
typedef struct bp_sparse_pmf bp_sparse_pmf;
typedef struct bp_joint_list bp_joint_list;
typedef struct bp_mean_vector bp_mean_vector;
typedef struct bp_extremal_iter bp_extremal_iter;
typedef struct bp_rng bp_rng;
typedef struct bp_hit_and_run bp_hit_and_run;

/* ---- library ------------------------------------------------------------ */

BP_API const char* bp_version(void);
/** Message of the last failure on this thread, "" if none. */
BP_API const char* bp_last_error(void);
/** Symbolic name of a status code, e.g. "BP_ERR_GUARD_EXCEEDED". */
BP_API const char* bp_status_name(bp_status status);
BP_API void bp_string_free(char* s);

/* ---- sum pmfs ----------------------------------------------------------- */

BP_API bp_status bp_sum_pmf_from_doubles(const double* p, size_t n, bp_sum_pmf** out);
/** JSON array of numbers and/or "num/den" strings. */
BP_API bp_status bp_sum_pmf_from_json(const char* json, bp_sum_pmf** out);
/** b(theta) = Binomial(d, theta). */
BP_API bp_status bp_sum_pmf_binomial(double theta, int d, bp_sum_pmf** out);
/** Exact b(theta) for theta given as "num/den" or a decimal string. */
BP_API bp_status bp_sum_pmf_binomial_exact(const char* theta, int d, bp_sum_pmf** out);
/** Law of a sum of independent Bernoulli(theta_i); exact when the list holds strings. */
BP_API bp_status bp_sum_pmf_poisson_binomial(const char* theta_json, bp_sum_pmf** out);
/** p^M, the maximizer of the measure of P(p); exact.  d >= 2. */
BP_API bp_status bp_sum_pmf_maximal(int d, bp_sum_pmf** out);
/** Convex-order-minimal pmf of mean mu ("num/den" or decimal); exact. */
BP_API bp_status bp_sum_pmf_convex_min(int d, const char* mu, bp_sum_pmf** out);
BP_API void bp_sum_pmf_free(bp_sum_pmf* p);

BP_API int bp_sum_pmf_dimension(const bp_sum_pmf* p);
BP_API int bp_sum_pmf_is_exact(const bp_sum_pmf* p);
/** Copies d + 1 masses into out (capacity cap). */
BP_API bp_status bp_sum_pmf_values(const bp_sum_pmf* p, double* out, size_t cap);
BP_API bp_status bp_sum_pmf_to_json(const bp_sum_pmf* p, char** out);
BP_API bp_status bp_sum_pmf_entropy(const bp_sum_pmf* p, double* out);

/**
 * Structure of P(p) as JSON: dimension, block_dims, support, intrinsic_dim
 * and vertex_count (a decimal string; it can exceed 64 bits).
 */
BP_API bp_status bp_describe(const bp_sum_pmf* p, char** out);

/** d_S or d_TV between two sum pmfs of equal dimension. */
BP_API bp_status bp_distance(const bp_sum_pmf* p, const bp_sum_pmf* q, bp_metric metric, double* out);

/* ---- joint pmfs --------------------------------------------------------- */

BP_API bp_status bp_joint_pmf_from_json(const char* json, bp_joint_pmf** out);
/** The exchangeable member of P(p), exact when p is. */
BP_API bp_status bp_joint_pmf_exchangeable(const bp_sum_pmf* p, bp_joint_pmf** out);
BP_API void bp_joint_pmf_free(bp_joint_pmf* f);

BP_API int bp_joint_pmf_dimension(const bp_joint_pmf* f);
BP_API int bp_joint_pmf_is_exact(const bp_joint_pmf* f);
/** Copies 2^d masses into out (capacity cap). */
BP_API bp_status bp_joint_pmf_values(const bp_joint_pmf* f, double* out, size_t cap);
BP_API bp_status bp_joint_pmf_to_json(const bp_joint_pmf* f, char** out);
/** JSON of the sum map s(f). */
BP_API bp_status bp_joint_pmf_sum_json(const bp_joint_pmf* f, char** out);
BP_API bp_status bp_joint_pmf_entropy(const bp_joint_pmf* f, double* out);
/** E[prod_{j in subset} X_j], subset entries 1-based. */
BP_API bp_status bp_joint_pmf_cross_moment(const bp_joint_pmf* f, const int* subset, size_t n, double* out);
/** 1 if s(f) = p (exactly when both are exact, else within tol). */
BP_API bp_status bp_joint_pmf_membership(const bp_joint_pmf* f, const bp_sum_pmf* p, double tol, int* out);

/* ---- sparse joint pmfs (vertices of P(p)) ------------------------------- */

BP_API void bp_sparse_pmf_free(bp_sparse_pmf* f);
BP_API int bp_sparse_pmf_dimension(const bp_sparse_pmf* f);
BP_API size_t bp_sparse_pmf_atom_count(const bp_sparse_pmf* f);
BP_API bp_status bp_sparse_pmf_atom(const bp_sparse_pmf* f, size_t i, uint64_t* index, double* mass);
BP_API bp_status bp_sparse_pmf_to_json(const bp_sparse_pmf* f, char** out);
BP_API bp_status bp_sparse_pmf_entropy(const bp_sparse_pmf* f, double* out);

/* ---- extremal points ---------------------------------------------------- */

/** Vertices of P(p) in colexicographic order of the 1-based index sigma. */
BP_API bp_status bp_extremal_iter_new(const bp_sum_pmf* p, bp_extremal_iter** out);
BP_API void bp_extremal_iter_free(bp_extremal_iter* it);
/** Total vertex count as a decimal string. */
BP_API bp_status bp_extremal_iter_count(const bp_extremal_iter* it, char** out);
/** Skips n vertices; BP_END when that passes the last one. */
BP_API bp_status bp_extremal_iter_skip(bp_extremal_iter* it, uint64_t n);
/**
 * Next vertex and its index sigma as JSON (nullable); BP_END with *out set
 * to NULL once exhausted.
 */
BP_API bp_status bp_extremal_iter_next(bp_extremal_iter* it, bp_sparse_pmf** out, char** sigma_json);

/* ---- moment and entropy bounds over P(p) -------------------------------- */

/** Sharp bounds on an order-k cross moment; exact strings when p is exact (nullable). */
BP_API bp_status bp_moment_bounds(const bp_sum_pmf* p, int k, double* lower, double* upper, char** exact_json);
BP_API bp_status bp_entropy_bounds(const bp_sum_pmf* p, double* min, double* max);

/* ---- mean constraints --------------------------------------------------- */

/** JSON list of numbers or "num/den" strings; numbers are rationalized. */
BP_API bp_status bp_mean_vector_from_json(const char* json, bp_mean_vector** out);
BP_API bp_status bp_mean_vector_from_doubles(const double* theta, size_t n, bp_mean_vector** out);
BP_API void bp_mean_vector_free(bp_mean_vector* theta);
BP_API int bp_mean_vector_dimension(const bp_mean_vector* theta);

/** Exact checks: sum theta_i = E[S], and the order-1 moment box. */
BP_API bp_status bp_necessary_conditions(const bp_sum_pmf* p, const bp_mean_vector* theta, int* mean_ok,
                                         int* box_ok);
/** A member of P(p, theta), or *out = NULL with BP_OK when the class is empty. */
BP_API bp_status bp_feasible_point(const bp_sum_pmf* p, const bp_mean_vector* theta, bp_joint_pmf** out);
/** Vertices of P(p, theta), exact and sorted; an empty list when infeasible. */
BP_API bp_status bp_constrained_vertices(const bp_sum_pmf* p, const bp_mean_vector* theta, bp_joint_list** out);
/**
 * (min, max) of E[prod_{j in subset} X_j] over P(p, theta), subset 1-based.
 * BP_ERR_INFEASIBLE when the class is empty.
 */
BP_API bp_status bp_constrained_bounds(const bp_sum_pmf* p, const bp_mean_vector* theta, const int* subset,
                                       size_t n, double* lower, double* upper, char** exact_json);

BP_API void bp_joint_list_free(bp_joint_list* list);
BP_API size_t bp_joint_list_size(const bp_joint_list* list);
/** Copy of element i. */
BP_API bp_status bp_joint_list_get(const bp_joint_list* list, size_t i, bp_joint_pmf** out);

/* ---- measure ------------------------------------------------------------ */

/** Natural logs of the ambient and intrinsic measure of P(p); -inf for zero. */
BP_API bp_status bp_polytope_measure(const bp_sum_pmf* p, double* log_ambient, double* log_intrinsic);
/** log l(p). */
BP_API bp_status bp_log_density(const bp_sum_pmf* p, double* out);
/** log of the total measure of D_d. */
BP_API bp_status bp_log_normalizing_constant(int d, double* out);
/** Dirichlet(C(d,0), ..., C(d,d)) density at p. */
BP_API bp_status bp_dirichlet_pdf(const bp_sum_pmf* p, double* out);

/* ---- binomial curve ----------------------------------------------------- */

/** log of the ambient measure of P(b(theta)). */
BP_API bp_status bp_curve_log_measure(double theta, int d, double* out);
/** Argmax over [0, 1]; grid = 0 selects the default resolution. */
BP_API bp_status bp_curve_argmax(int d, int grid, double* out);
BP_API bp_status bp_bin_vs_mode(int d, double* d_sup, double* log_measure_gap);

/* ---- random generation -------------------------------------------------- */

/** Stream (seed, stream_id); equal pairs give equal draws. */
BP_API bp_status bp_rng_new(uint64_t seed, uint64_t stream_id, bp_rng** out);
BP_API void bp_rng_free(bp_rng* rng);
/** Uniform point of P(p). */
BP_API bp_status bp_sample_polytope(const bp_sum_pmf* p, bp_rng* rng, bp_joint_pmf** out);
/** Uniform point of F_d, all joint pmfs on {0,1}^d. */
BP_API bp_status bp_sample_fd(int d, bp_rng* rng, bp_joint_pmf** out);
/** Dirichlet(alpha) draw, n coordinates into out. */
BP_API bp_status bp_sample_dirichlet(const double* alpha, size_t n, bp_rng* rng, double* out);

typedef struct
{
    double epsilon;
    bp_metric metric;
    /** Nonzero: drop the |q_d - p_d| <= epsilon bound, keeping q_d >= 0. */
    int paper_sigma_s;
} bp_neighborhood;

BP_API bp_status bp_hit_and_run_new(const bp_sum_pmf* center, const bp_neighborhood* region, uint64_t burn_in,
                                    uint64_t thin, uint64_t seed, bp_hit_and_run** out);
BP_API void bp_hit_and_run_free(bp_hit_and_run* walk);
/** Next point (d + 1 masses) of the chain. */
BP_API bp_status bp_hit_and_run_next(bp_hit_and_run* walk, double* out, size_t cap);

typedef struct
{
    uint64_t seed;
    /** 0 selects the hardware concurrency. */
    unsigned threads;
    bp_sampler sampler;
    uint64_t burn_in;
    uint64_t thin;
} bp_estimator_options;

/** Defaults: seed 0, one thread, rejection, burn-in 1000, thin 10. */
BP_API void bp_estimator_options_init(bp_estimator_options* options);

typedef struct
{
    double log_estimate;
    double estimate;
    double std_error;
    double relative_std_error;
    uint64_t n_samples;
    double acceptance_rate;
    double log_region_volume;
    double region_volume_relative_std_error;
    double log_mean_density;
    double mean_density_relative_std_error;
} bp_estimate;

/**
 * Monte Carlo measure of {q : dist(q, center) <= epsilon}.  For the TV
 * metric this is the masked estimate from the sup-region draws, never above
 * the sup estimate for the same seed.  n >= 1000, epsilon > 0.
 */
BP_API bp_status bp_estimate_neighborhood(const bp_sum_pmf* center, const bp_neighborhood* region, uint64_t n,
                                          const bp_estimator_options* options, bp_estimate* out);

#ifdef __cplusplus
}
#endif

#endif
