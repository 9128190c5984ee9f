#include "bernpoly.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <variant>

#include "bernpoly/binomial.hpp"
#include "bernpoly/feasibility.hpp"
#include "bernpoly/io.hpp"
#include "bernpoly/measure.hpp"
#include "bernpoly/polytope.hpp"
#include "bernpoly/sampling.hpp"

using namespace bernpoly;

struct bp_sum_pmf
{
    SumPmf approx;
    std::optional<ExactSumPmf> exact;
};

struct bp_joint_pmf
{
    JointPmf approx;
    std::optional<ExactJointPmf> exact;
};

struct bp_sparse_pmf
{
    SparseJointPmf approx;
    std::optional<ExactSparseJointPmf> exact;
};

struct bp_joint_list
{
    std::vector<bp_joint_pmf> items;
};

struct bp_mean_vector
{
    MeanVector theta;
};

struct bp_extremal_iter
{
    std::variant<ExtremalEnumerator, ExactExtremalEnumerator> it;
};

struct bp_rng
{
    RngStream stream;
};

struct bp_hit_and_run
{
    HitAndRun walk;
    int dimension;
};

namespace {

thread_local std::string last_error;

bp_status fail(bp_status status, const std::string& message)
{
    last_error = message;
    return status;
}

/** Runs `body`, translating library exceptions into status codes. */
template <class F>
bp_status guarded(F&& body)
{
    try {
        return body();
    } catch (const InvalidArgument& e) {
        return fail(BP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const OutOfRange& e) {
        return fail(BP_ERR_OUT_OF_RANGE, e.what());
    } catch (const DimensionMismatch& e) {
        return fail(BP_ERR_DIMENSION_MISMATCH, e.what());
    } catch (const GuardExceeded& e) {
        return fail(BP_ERR_GUARD_EXCEEDED, e.what());
    } catch (const Infeasible& e) {
        return fail(BP_ERR_INFEASIBLE, e.what());
    } catch (const Unsupported& e) {
        return fail(BP_ERR_UNSUPPORTED, e.what());
    } catch (const Json::exception& e) {
        return fail(BP_ERR_INVALID_ARGUMENT, std::string("malformed JSON: ") + e.what());
    } catch (const std::bad_alloc&) {
        return fail(BP_ERR_GUARD_EXCEEDED, "out of memory");
    } catch (const std::exception& e) {
        return fail(BP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BP_ERR_INTERNAL, "unknown error");
    }
}

#define BP_REQUIRE(ptr)                                                                                    \
    do {                                                                                                   \
        if ((ptr) == nullptr)                                                                              \
            return fail(BP_ERR_NULL_ARGUMENT, #ptr " is NULL");                                            \
    } while (0)

char* duplicate(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bp_status emit_json(const Json& j, char** out)
{
    *out = duplicate(j.dump());
    return BP_OK;
}

bp_sum_pmf* make_sum(const SumPmf& p) { return new bp_sum_pmf{p, std::nullopt}; }
bp_sum_pmf* make_sum(const ExactSumPmf& p) { return new bp_sum_pmf{to_double(p), p}; }
bp_joint_pmf make_joint(const ExactJointPmf& f) { return bp_joint_pmf{to_double(f), f}; }

template <class T>
bp_sparse_pmf* make_sparse(const BasicSparseJointPmf<T>& f)
{
    if constexpr (std::is_same_v<T, Rational>)
        return new bp_sparse_pmf{to_double(f), f};
    else
        return new bp_sparse_pmf{f, std::nullopt};
}

bp_status copy_values(std::span<const double> v, double* out, size_t cap)
{
    if (cap < v.size())
        return fail(BP_ERR_OUT_OF_RANGE, "output buffer too small: need " + std::to_string(v.size()));
    std::copy(v.begin(), v.end(), out);
    return BP_OK;
}

std::vector<int> subset_of(const int* subset, size_t n)
{
    return std::vector<int>(subset, subset + n);
}

Json to_json(const PolytopeDescriptor& desc)
{
    return Json{{"dimension", desc.dimension},
                {"block_dims", desc.block_dims},
                {"support", desc.support},
                {"intrinsic_dim", desc.intrinsic_dim},
                {"vertex_count", desc.vertex_count.str()}};
}

NeighborhoodSpec neighborhood(const bp_sum_pmf* center, const bp_neighborhood* region)
{
    const Metric metric = region->metric == BP_METRIC_TV ? Metric::tv : Metric::sup;
    if (region->metric != BP_METRIC_SUP && region->metric != BP_METRIC_TV)
        throw InvalidArgument("unknown metric");
    return NeighborhoodSpec(center->approx, region->epsilon, metric, region->paper_sigma_s != 0);
}

}   // namespace

extern "C" {

/* ---- library ------------------------------------------------------------ */

const char* bp_version(void) { return BERNPOLY_VERSION; }

const char* bp_last_error(void) { return last_error.c_str(); }

const char* bp_status_name(bp_status status)
{
    switch (status) {
        case BP_OK: return "BP_OK";
        case BP_END: return "BP_END";
        case BP_ERR_NULL_ARGUMENT: return "BP_ERR_NULL_ARGUMENT";
        case BP_ERR_INVALID_ARGUMENT: return "BP_ERR_INVALID_ARGUMENT";
        case BP_ERR_OUT_OF_RANGE: return "BP_ERR_OUT_OF_RANGE";
        case BP_ERR_DIMENSION_MISMATCH: return "BP_ERR_DIMENSION_MISMATCH";
        case BP_ERR_GUARD_EXCEEDED: return "BP_ERR_GUARD_EXCEEDED";
        case BP_ERR_INFEASIBLE: return "BP_ERR_INFEASIBLE";
        case BP_ERR_UNSUPPORTED: return "BP_ERR_UNSUPPORTED";
        case BP_ERR_INTERNAL: return "BP_ERR_INTERNAL";
        default: return "BP_UNKNOWN_STATUS";
    }
}

void bp_string_free(char* s) { std::free(s); }

/* ---- sum pmfs ----------------------------------------------------------- */

bp_status bp_sum_pmf_from_doubles(const double* p, size_t n, bp_sum_pmf** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = make_sum(SumPmf(std::vector<double>(p, p + n)));
        return BP_OK;
    });
}

bp_status bp_sum_pmf_from_json(const char* json, bp_sum_pmf** out)
{
    BP_REQUIRE(json);
    BP_REQUIRE(out);
    return guarded([&] {
        ParsedSumPmf parsed = parse_sum_pmf(std::string(json));
        *out = new bp_sum_pmf{std::move(parsed.approx), std::move(parsed.exact)};
        return BP_OK;
    });
}

bp_status bp_sum_pmf_binomial(double theta, int d, bp_sum_pmf** out)
{
    BP_REQUIRE(out);
    return guarded([&] {
        *out = make_sum(binomial_pmf(theta, d));
        return BP_OK;
    });
}

bp_status bp_sum_pmf_binomial_exact(const char* theta, int d, bp_sum_pmf** out)
{
    BP_REQUIRE(theta);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = make_sum(binomial_pmf(parse_rational(theta), d));
        return BP_OK;
    });
}

bp_status bp_sum_pmf_poisson_binomial(const char* theta_json, bp_sum_pmf** out)
{
    BP_REQUIRE(theta_json);
    BP_REQUIRE(out);
    return guarded([&] {
        const Json j = Json::parse(theta_json);
        if (!j.is_array() || j.empty())
            throw InvalidArgument("theta must be a non-empty JSON list");
        bool exact = false;
        for (const auto& e : j)
            exact = exact || e.is_string();
        if (exact) {
            const auto theta = parse_rational_list(j);
            *out = make_sum(poisson_binomial_pmf(std::span<const Rational>(theta)));
        } else {
            const auto theta = parse_double_list(j);
            *out = make_sum(poisson_binomial_pmf(std::span<const double>(theta)));
        }
        return BP_OK;
    });
}

bp_status bp_sum_pmf_maximal(int d, bp_sum_pmf** out)
{
    BP_REQUIRE(out);
    return guarded([&] {
        *out = make_sum(exact_maximal_pmf(d));
        return BP_OK;
    });
}

bp_status bp_sum_pmf_convex_min(int d, const char* mu, bp_sum_pmf** out)
{
    BP_REQUIRE(mu);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = make_sum(convex_min_pmf(d, parse_rational(mu)));
        return BP_OK;
    });
}

void bp_sum_pmf_free(bp_sum_pmf* p) { delete p; }

int bp_sum_pmf_dimension(const bp_sum_pmf* p) { return p == nullptr ? -1 : p->approx.dimension(); }

int bp_sum_pmf_is_exact(const bp_sum_pmf* p) { return p != nullptr && p->exact.has_value(); }

bp_status bp_sum_pmf_values(const bp_sum_pmf* p, double* out, size_t cap)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return copy_values(p->approx.values(), out, cap);
}

bp_status bp_sum_pmf_to_json(const bp_sum_pmf* p, char** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] { return emit_json(p->exact ? to_json(*p->exact) : to_json(p->approx), out); });
}

bp_status bp_sum_pmf_entropy(const bp_sum_pmf* p, double* out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = entropy(p->approx);
        return BP_OK;
    });
}

bp_status bp_describe(const bp_sum_pmf* p, char** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] { return emit_json(to_json(describe(p->approx)), out); });
}

bp_status bp_distance(const bp_sum_pmf* p, const bp_sum_pmf* q, bp_metric metric, double* out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(q);
    BP_REQUIRE(out);
    return guarded([&] {
        if (metric == BP_METRIC_SUP)
            *out = dist_sup(p->approx, q->approx);
        else if (metric == BP_METRIC_TV)
            *out = dist_tv(p->approx, q->approx);
        else
            throw InvalidArgument("unknown metric");
        return BP_OK;
    });
}

/* ---- joint pmfs --------------------------------------------------------- */

bp_status bp_joint_pmf_from_json(const char* json, bp_joint_pmf** out)
{
    BP_REQUIRE(json);
    BP_REQUIRE(out);
    return guarded([&] {
        const Json j = Json::parse(json);
        bool exact = false;
        if (j.is_object() && j.contains("values") && j["values"].is_array())
            for (const auto& e : j["values"])
                exact = exact || e.is_string();
        if (exact)
            *out = new bp_joint_pmf(make_joint(parse_exact_joint_pmf(j)));
        else
            *out = new bp_joint_pmf{parse_joint_pmf(j), std::nullopt};
        return BP_OK;
    });
}

bp_status bp_joint_pmf_exchangeable(const bp_sum_pmf* p, bp_joint_pmf** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] {
        if (p->exact)
            *out = new bp_joint_pmf(make_joint(exchangeable_pmf(*p->exact)));
        else
            *out = new bp_joint_pmf{exchangeable_pmf(p->approx), std::nullopt};
        return BP_OK;
    });
}

void bp_joint_pmf_free(bp_joint_pmf* f) { delete f; }

int bp_joint_pmf_dimension(const bp_joint_pmf* f) { return f == nullptr ? -1 : f->approx.dimension(); }

int bp_joint_pmf_is_exact(const bp_joint_pmf* f) { return f != nullptr && f->exact.has_value(); }

bp_status bp_joint_pmf_values(const bp_joint_pmf* f, double* out, size_t cap)
{
    BP_REQUIRE(f);
    BP_REQUIRE(out);
    return copy_values(f->approx.values(), out, cap);
}

bp_status bp_joint_pmf_to_json(const bp_joint_pmf* f, char** out)
{
    BP_REQUIRE(f);
    BP_REQUIRE(out);
    return guarded([&] { return emit_json(f->exact ? to_json(*f->exact) : to_json(f->approx), out); });
}

bp_status bp_joint_pmf_sum_json(const bp_joint_pmf* f, char** out)
{
    BP_REQUIRE(f);
    BP_REQUIRE(out);
    return guarded([&] {
        return emit_json(f->exact ? to_json(sum_map(*f->exact)) : to_json(sum_map(f->approx)), out);
    });
}

bp_status bp_joint_pmf_entropy(const bp_joint_pmf* f, double* out)
{
    BP_REQUIRE(f);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = entropy(f->approx);
        return BP_OK;
    });
}

bp_status bp_joint_pmf_cross_moment(const bp_joint_pmf* f, const int* subset, size_t n, double* out)
{
    BP_REQUIRE(f);
    BP_REQUIRE(subset);
    BP_REQUIRE(out);
    return guarded([&] {
        const auto s = subset_of(subset, n);
        *out = f->exact ? to_double(cross_moment(*f->exact, std::span<const int>(s)))
                        : cross_moment(f->approx, std::span<const int>(s));
        return BP_OK;
    });
}

bp_status bp_joint_pmf_membership(const bp_joint_pmf* f, const bp_sum_pmf* p, double tol, int* out)
{
    BP_REQUIRE(f);
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] {
        if (f->approx.dimension() != p->approx.dimension())
            throw DimensionMismatch("joint pmf and sum pmf dimensions differ");
        if (f->exact && p->exact)
            *out = membership(*f->exact, *p->exact) ? 1 : 0;
        else
            *out = membership(f->approx, p->approx, tol) ? 1 : 0;
        return BP_OK;
    });
}

/* ---- sparse joint pmfs -------------------------------------------------- */

void bp_sparse_pmf_free(bp_sparse_pmf* f) { delete f; }

int bp_sparse_pmf_dimension(const bp_sparse_pmf* f) { return f == nullptr ? -1 : f->approx.dimension(); }

size_t bp_sparse_pmf_atom_count(const bp_sparse_pmf* f) { return f == nullptr ? 0 : f->approx.atoms().size(); }

bp_status bp_sparse_pmf_atom(const bp_sparse_pmf* f, size_t i, uint64_t* index, double* mass)
{
    BP_REQUIRE(f);
    BP_REQUIRE(index);
    BP_REQUIRE(mass);
    if (i >= f->approx.atoms().size())
        return fail(BP_ERR_OUT_OF_RANGE, "atom position out of range");
    *index = f->approx.atoms()[i].index;
    *mass = f->approx.atoms()[i].mass;
    return BP_OK;
}

bp_status bp_sparse_pmf_to_json(const bp_sparse_pmf* f, char** out)
{
    BP_REQUIRE(f);
    BP_REQUIRE(out);
    return guarded([&] { return emit_json(f->exact ? to_json(*f->exact) : to_json(f->approx), out); });
}

bp_status bp_sparse_pmf_entropy(const bp_sparse_pmf* f, double* out)
{
    BP_REQUIRE(f);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = entropy(f->approx);
        return BP_OK;
    });
}

/* ---- extremal points ---------------------------------------------------- */

bp_status bp_extremal_iter_new(const bp_sum_pmf* p, bp_extremal_iter** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] {
        if (p->exact)
            *out = new bp_extremal_iter{extremal_enumerate(*p->exact)};
        else
            *out = new bp_extremal_iter{extremal_enumerate(p->approx)};
        return BP_OK;
    });
}

void bp_extremal_iter_free(bp_extremal_iter* it) { delete it; }

bp_status bp_extremal_iter_count(const bp_extremal_iter* it, char** out)
{
    BP_REQUIRE(it);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = duplicate(std::visit([](const auto& e) { return e.count().str(); }, it->it));
        return BP_OK;
    });
}

bp_status bp_extremal_iter_skip(bp_extremal_iter* it, uint64_t n)
{
    BP_REQUIRE(it);
    return guarded([&] {
        return std::visit(
            [n](auto& e) {
                e.skip(BigInt(n));
                return e.exhausted() ? BP_END : BP_OK;
            },
            it->it);
    });
}

bp_status bp_extremal_iter_next(bp_extremal_iter* it, bp_sparse_pmf** out, char** sigma_json)
{
    BP_REQUIRE(it);
    BP_REQUIRE(out);
    *out = nullptr;
    if (sigma_json != nullptr)
        *sigma_json = nullptr;
    return guarded([&] {
        return std::visit(
            [&](auto& e) {
                const ExtremalIndex idx = e.current_index();
                auto v = e.next();
                if (!v)
                    return BP_END;
                std::unique_ptr<bp_sparse_pmf> held(make_sparse(*v));
                if (sigma_json != nullptr)
                    *sigma_json = duplicate(Json(idx.sigma).dump());
                *out = held.release();
                return BP_OK;
            },
            it->it);
    });
}

/* ---- moment and entropy bounds ------------------------------------------ */

bp_status bp_moment_bounds(const bp_sum_pmf* p, int k, double* lower, double* upper, char** exact_json)
{
    BP_REQUIRE(p);
    BP_REQUIRE(lower);
    BP_REQUIRE(upper);
    if (exact_json != nullptr)
        *exact_json = nullptr;
    return guarded([&] {
        if (p->exact) {
            const auto [lo, hi] = moment_bounds(*p->exact, k);
            *lower = to_double(lo);
            *upper = to_double(hi);
            if (exact_json != nullptr)
                *exact_json = duplicate(Json{{"lower", to_json(lo)}, {"upper", to_json(hi)}}.dump());
        } else {
            const auto [lo, hi] = moment_bounds(p->approx, k);
            *lower = lo;
            *upper = hi;
        }
        return BP_OK;
    });
}

bp_status bp_entropy_bounds(const bp_sum_pmf* p, double* min, double* max)
{
    BP_REQUIRE(p);
    BP_REQUIRE(min);
    BP_REQUIRE(max);
    return guarded([&] {
        const EntropyBounds b = entropy_bounds(p->approx);
        *min = b.min;
        *max = b.max;
        return BP_OK;
    });
}

/* ---- mean constraints --------------------------------------------------- */

bp_status bp_mean_vector_from_json(const char* json, bp_mean_vector** out)
{
    BP_REQUIRE(json);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = new bp_mean_vector{MeanVector(parse_rational_list(Json::parse(json)))};
        return BP_OK;
    });
}

bp_status bp_mean_vector_from_doubles(const double* theta, size_t n, bp_mean_vector** out)
{
    BP_REQUIRE(theta);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = new bp_mean_vector{MeanVector::from_doubles(std::span<const double>(theta, n))};
        return BP_OK;
    });
}

void bp_mean_vector_free(bp_mean_vector* theta) { delete theta; }

int bp_mean_vector_dimension(const bp_mean_vector* theta) { return theta == nullptr ? -1 : theta->theta.dimension(); }

namespace {

/** Exact view of p for the constrained-class routines. */
ExactSumPmf exact_of(const bp_sum_pmf* p) { return p->exact ? *p->exact : to_exact(p->approx); }

}   // namespace

bp_status bp_necessary_conditions(const bp_sum_pmf* p, const bp_mean_vector* theta, int* mean_ok, int* box_ok)
{
    BP_REQUIRE(p);
    BP_REQUIRE(theta);
    BP_REQUIRE(mean_ok);
    BP_REQUIRE(box_ok);
    return guarded([&] {
        const NecessaryConditions nc = necessary_conditions(exact_of(p), theta->theta);
        *mean_ok = nc.mean_ok ? 1 : 0;
        *box_ok = nc.box_ok ? 1 : 0;
        return BP_OK;
    });
}

bp_status bp_feasible_point(const bp_sum_pmf* p, const bp_mean_vector* theta, bp_joint_pmf** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(theta);
    BP_REQUIRE(out);
    *out = nullptr;
    return guarded([&] {
        const auto f = feasible_point(exact_of(p), theta->theta);
        if (f)
            *out = new bp_joint_pmf(make_joint(*f));
        return BP_OK;
    });
}

bp_status bp_constrained_vertices(const bp_sum_pmf* p, const bp_mean_vector* theta, bp_joint_list** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(theta);
    BP_REQUIRE(out);
    return guarded([&] {
        auto list = std::make_unique<bp_joint_list>();
        for (const auto& f : constrained_vertices(exact_of(p), theta->theta))
            list->items.push_back(make_joint(f));
        *out = list.release();
        return BP_OK;
    });
}

bp_status bp_constrained_bounds(const bp_sum_pmf* p, const bp_mean_vector* theta, const int* subset, size_t n,
                                double* lower, double* upper, char** exact_json)
{
    BP_REQUIRE(p);
    BP_REQUIRE(theta);
    BP_REQUIRE(subset);
    BP_REQUIRE(lower);
    BP_REQUIRE(upper);
    if (exact_json != nullptr)
        *exact_json = nullptr;
    return guarded([&] {
        const auto s = subset_of(subset, n);
        const auto [lo, hi] = constrained_moment_bounds(exact_of(p), theta->theta, std::span<const int>(s));
        *lower = to_double(lo);
        *upper = to_double(hi);
        if (exact_json != nullptr)
            *exact_json = duplicate(Json{{"lower", to_json(lo)}, {"upper", to_json(hi)}}.dump());
        return BP_OK;
    });
}

void bp_joint_list_free(bp_joint_list* list) { delete list; }

size_t bp_joint_list_size(const bp_joint_list* list) { return list == nullptr ? 0 : list->items.size(); }

bp_status bp_joint_list_get(const bp_joint_list* list, size_t i, bp_joint_pmf** out)
{
    BP_REQUIRE(list);
    BP_REQUIRE(out);
    if (i >= list->items.size())
        return fail(BP_ERR_OUT_OF_RANGE, "list position out of range");
    return guarded([&] {
        *out = new bp_joint_pmf(list->items[i]);
        return BP_OK;
    });
}

/* ---- measure ------------------------------------------------------------ */

bp_status bp_polytope_measure(const bp_sum_pmf* p, double* log_ambient, double* log_intrinsic)
{
    BP_REQUIRE(p);
    BP_REQUIRE(log_ambient);
    BP_REQUIRE(log_intrinsic);
    return guarded([&] {
        const PolytopeMeasure m = polytope_measure(p->approx);
        *log_ambient = m.ambient.log_value();
        *log_intrinsic = m.intrinsic.log_value();
        return BP_OK;
    });
}

bp_status bp_log_density(const bp_sum_pmf* p, double* out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = density_l(p->approx).log_value();
        return BP_OK;
    });
}

bp_status bp_log_normalizing_constant(int d, double* out)
{
    BP_REQUIRE(out);
    return guarded([&] {
        *out = normalizing_constant(d).log_value();
        return BP_OK;
    });
}

bp_status bp_dirichlet_pdf(const bp_sum_pmf* p, double* out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = dirichlet_pdf(p->approx);
        return BP_OK;
    });
}

/* ---- binomial curve ----------------------------------------------------- */

bp_status bp_curve_log_measure(double theta, int d, double* out)
{
    BP_REQUIRE(out);
    return guarded([&] {
        *out = curve_log_measure(theta, d).log_value();
        return BP_OK;
    });
}

bp_status bp_curve_argmax(int d, int grid, double* out)
{
    BP_REQUIRE(out);
    return guarded([&] {
        *out = grid == 0 ? curve_argmax(d) : curve_argmax(d, grid);
        return BP_OK;
    });
}

bp_status bp_bin_vs_mode(int d, double* d_sup, double* log_measure_gap)
{
    BP_REQUIRE(d_sup);
    BP_REQUIRE(log_measure_gap);
    return guarded([&] {
        const BinVsMode r = bin_vs_mode(d);
        *d_sup = r.d_sup;
        *log_measure_gap = r.log_measure_gap;
        return BP_OK;
    });
}

/* ---- random generation -------------------------------------------------- */

bp_status bp_rng_new(uint64_t seed, uint64_t stream_id, bp_rng** out)
{
    BP_REQUIRE(out);
    return guarded([&] {
        *out = new bp_rng{RngStream(seed, stream_id)};
        return BP_OK;
    });
}

void bp_rng_free(bp_rng* rng) { delete rng; }

bp_status bp_sample_polytope(const bp_sum_pmf* p, bp_rng* rng, bp_joint_pmf** out)
{
    BP_REQUIRE(p);
    BP_REQUIRE(rng);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = new bp_joint_pmf{sample_polytope_uniform(p->approx, rng->stream), std::nullopt};
        return BP_OK;
    });
}

bp_status bp_sample_fd(int d, bp_rng* rng, bp_joint_pmf** out)
{
    BP_REQUIRE(rng);
    BP_REQUIRE(out);
    return guarded([&] {
        *out = new bp_joint_pmf{sample_fd_uniform(d, rng->stream), std::nullopt};
        return BP_OK;
    });
}

bp_status bp_sample_dirichlet(const double* alpha, size_t n, bp_rng* rng, double* out)
{
    BP_REQUIRE(alpha);
    BP_REQUIRE(rng);
    BP_REQUIRE(out);
    return guarded([&] {
        const auto x = sample_dirichlet(std::span<const double>(alpha, n), rng->stream);
        std::copy(x.begin(), x.end(), out);
        return BP_OK;
    });
}

bp_status bp_hit_and_run_new(const bp_sum_pmf* center, const bp_neighborhood* region, uint64_t burn_in,
                             uint64_t thin, uint64_t seed, bp_hit_and_run** out)
{
    BP_REQUIRE(center);
    BP_REQUIRE(region);
    BP_REQUIRE(out);
    return guarded([&] {
        HitAndRunOptions opt;
        opt.burn_in = burn_in;
        opt.thin = thin;
        *out = new bp_hit_and_run{HitAndRun(neighborhood(center, region), opt, RngStream(seed, 0)),
                                  center->approx.dimension()};
        return BP_OK;
    });
}

void bp_hit_and_run_free(bp_hit_and_run* walk) { delete walk; }

bp_status bp_hit_and_run_next(bp_hit_and_run* walk, double* out, size_t cap)
{
    BP_REQUIRE(walk);
    BP_REQUIRE(out);
    if (cap < static_cast<size_t>(walk->dimension) + 1)
        return fail(BP_ERR_OUT_OF_RANGE, "output buffer too small");
    return guarded([&] {
        const SumPmf q = walk->walk.next();
        return copy_values(q.values(), out, cap);
    });
}

void bp_estimator_options_init(bp_estimator_options* options)
{
    if (options == nullptr)
        return;
    const EstimatorOptions defaults;
    options->seed = defaults.seed;
    options->threads = defaults.threads;
    options->sampler = BP_SAMPLER_REJECTION;
    options->burn_in = defaults.walk.burn_in;
    options->thin = defaults.walk.thin;
}

bp_status bp_estimate_neighborhood(const bp_sum_pmf* center, const bp_neighborhood* region, uint64_t n,
                                   const bp_estimator_options* options, bp_estimate* out)
{
    BP_REQUIRE(center);
    BP_REQUIRE(region);
    BP_REQUIRE(options);
    BP_REQUIRE(out);
    return guarded([&] {
        EstimatorOptions opt;
        opt.seed = options->seed;
        opt.threads = options->threads;
        if (options->sampler == BP_SAMPLER_REJECTION)
            opt.sampler = Sampler::rejection;
        else if (options->sampler == BP_SAMPLER_HIT_AND_RUN)
            opt.sampler = Sampler::hit_and_run;
        else
            throw InvalidArgument("unknown sampler");
        opt.walk.burn_in = options->burn_in;
        opt.walk.thin = options->thin;

        const NeighborhoodSpec spec = neighborhood(center, region);
        const EstimateReport r = spec.metric == Metric::tv ? estimate_tv_neighborhood_bound(spec, n, opt)
                                                           : estimate_neighborhood_measure(spec, n, opt);
        out->log_estimate = r.point_estimate.log_value();
        out->estimate = r.point_estimate.value();
        out->std_error = r.std_error;
        out->relative_std_error = r.relative_std_error;
        out->n_samples = r.n_samples;
        out->acceptance_rate = r.acceptance_rate;
        out->log_region_volume = r.region_volume.log_value();
        out->region_volume_relative_std_error = r.region_volume_relative_std_error;
        out->log_mean_density = r.mean_density.log_value();
        out->mean_density_relative_std_error = r.mean_density_relative_std_error;
        return BP_OK;
    });
}

}   // extern "C"
