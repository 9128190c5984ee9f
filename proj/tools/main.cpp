#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bernpoly.h"

using Json = nlohmann::ordered_json;

namespace {

/** A failed library call, carrying its status for the diagnostic. */
class CliError : public std::runtime_error
{
    public:
        explicit CliError(const std::string& message) : std::runtime_error(message) {}
};

void check(bp_status status)
{
    if (status < 0)
        throw CliError(std::string(bp_status_name(status)) + ": " + bp_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter
{
    void operator()(T* p) const { Free(p); }
};

using SumPtr = std::unique_ptr<bp_sum_pmf, Deleter<bp_sum_pmf, bp_sum_pmf_free>>;
using JointPtr = std::unique_ptr<bp_joint_pmf, Deleter<bp_joint_pmf, bp_joint_pmf_free>>;
using SparsePtr = std::unique_ptr<bp_sparse_pmf, Deleter<bp_sparse_pmf, bp_sparse_pmf_free>>;
using ListPtr = std::unique_ptr<bp_joint_list, Deleter<bp_joint_list, bp_joint_list_free>>;
using MeanPtr = std::unique_ptr<bp_mean_vector, Deleter<bp_mean_vector, bp_mean_vector_free>>;
using IterPtr = std::unique_ptr<bp_extremal_iter, Deleter<bp_extremal_iter, bp_extremal_iter_free>>;
using RngPtr = std::unique_ptr<bp_rng, Deleter<bp_rng, bp_rng_free>>;

/** Takes ownership of a library string. */
std::string take(char* s)
{
    std::string out = s == nullptr ? std::string() : std::string(s);
    bp_string_free(s);
    return out;
}

/** Inline JSON, or the contents of a file when the argument names one. */
std::string read_input(const std::string& arg)
{
    std::error_code ec;
    if (!arg.empty() && arg.front() != '[' && arg.front() != '{' && std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

SumPtr load_sum(const std::string& arg)
{
    bp_sum_pmf* p = nullptr;
    check(bp_sum_pmf_from_json(read_input(arg).c_str(), &p));
    return SumPtr(p);
}

MeanPtr load_theta(const std::string& arg)
{
    bp_mean_vector* t = nullptr;
    check(bp_mean_vector_from_json(read_input(arg).c_str(), &t));
    return MeanPtr(t);
}

std::vector<double> values_of(const bp_sum_pmf* p)
{
    std::vector<double> v(static_cast<std::size_t>(bp_sum_pmf_dimension(p)) + 1);
    check(bp_sum_pmf_values(p, v.data(), v.size()));
    return v;
}

std::vector<double> values_of(const bp_joint_pmf* f)
{
    std::vector<double> v(std::size_t{1} << bp_joint_pmf_dimension(f));
    check(bp_joint_pmf_values(f, v.data(), v.size()));
    return v;
}

Json pmf_json(const bp_sum_pmf* p)
{
    char* s = nullptr;
    check(bp_sum_pmf_to_json(p, &s));
    return Json::parse(take(s));
}

Json pmf_json(const bp_joint_pmf* f)
{
    char* s = nullptr;
    check(bp_joint_pmf_to_json(f, &s));
    return Json::parse(take(s));
}

/** "x_1 x_2 ... x_d" for the atom at `index`; bit j-1 of the index is X_j. */
std::string label(std::uint64_t index, int d)
{
    std::string s(static_cast<std::size_t>(d), '0');
    for (int j = 0; j < d; ++j)
        if ((index >> j) & 1U)
            s[static_cast<std::size_t>(j)] = '1';
    return s;
}

/** JSON number; non-finite values become null. */
Json num(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return x;
}

/**
 * Output of a subcommand: a JSON document and a flat table with the same
 * numbers for CSV.
 */
struct Output
{
    Json doc = Json::object();
    std::vector<std::string> header;
    std::vector<std::vector<Json>> rows;
};

std::string csv_cell(const Json& v)
{
    if (v.is_null())
        return "";
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"')
                quoted += '"';
            quoted += c;
        }
        return quoted + "\"";
    }
    if (v.is_array() || v.is_object())
        return csv_cell(Json(v.dump()));
    return v.dump();
}

void print(const Output& out, const std::string& format)
{
    if (format == "csv") {
        for (std::size_t i = 0; i < out.header.size(); ++i)
            std::cout << (i ? "," : "") << out.header[i];
        std::cout << '\n';
        for (const auto& row : out.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                std::cout << (i ? "," : "") << csv_cell(row[i]);
            std::cout << '\n';
        }
    } else {
        std::cout << out.doc.dump(2) << '\n';
    }
}

struct Common
{
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

/** The seed in use and whether it was generated here. */
std::pair<std::uint64_t, bool> resolve_seed(const Common& c)
{
    if (c.seed)
        return {*c.seed, false};
    std::random_device rd;
    return {(static_cast<std::uint64_t>(rd()) << 32) ^ rd(), true};
}

void add_provenance(Output& out, std::uint64_t seed, bool generated, std::uint64_t n)
{
    out.doc["seed"] = seed;
    out.doc["seed_generated"] = generated;
    out.doc["n"] = n;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

Output run_extremals(const std::string& p_arg, std::optional<std::uint64_t> limit, std::uint64_t skip,
                     std::uint64_t max_vertices)
{
    const SumPtr p = load_sum(p_arg);
    const int d = bp_sum_pmf_dimension(p.get());
    bp_extremal_iter* raw = nullptr;
    check(bp_extremal_iter_new(p.get(), &raw));
    const IterPtr it(raw);
    char* count_s = nullptr;
    check(bp_extremal_iter_count(it.get(), &count_s));
    const std::string count = take(count_s);

    // Decimal vertex counts can exceed 64 bits; compare by length first.
    const std::string cap = std::to_string(max_vertices);
    const bool over = count.size() > cap.size() || (count.size() == cap.size() && count > cap);
    if (!limit && over)
        throw CliError("P(p) has " + count + " vertices, above --max-vertices " + cap + "; pass --limit");

    Output out;
    out.doc["p"] = pmf_json(p.get());
    out.doc["d"] = d;
    out.doc["vertex_count"] = count;
    out.doc["skip"] = skip;
    out.header = {"vertex", "sigma", "x", "mass"};
    if (skip > 0 && bp_extremal_iter_skip(it.get(), skip) == BP_END) {
        out.doc["vertices"] = Json::array();
        return out;
    }
    Json vertices = Json::array();
    std::uint64_t emitted = 0;
    while (!limit || emitted < *limit) {
        bp_sparse_pmf* v_raw = nullptr;
        char* sigma_s = nullptr;
        const bp_status st = bp_extremal_iter_next(it.get(), &v_raw, &sigma_s);
        check(st);
        if (st == BP_END)
            break;
        const SparsePtr v(v_raw);
        const Json sigma = Json::parse(take(sigma_s));
        char* vj = nullptr;
        check(bp_sparse_pmf_to_json(v.get(), &vj));
        const Json exact_atoms = Json::parse(take(vj))["atoms"];
        Json atoms = Json::array();
        for (std::size_t a = 0; a < bp_sparse_pmf_atom_count(v.get()); ++a) {
            std::uint64_t index = 0;
            double mass = 0.0;
            check(bp_sparse_pmf_atom(v.get(), a, &index, &mass));
            Json atom = {{"x", label(index, d)}, {"mass", mass}};
            if (bp_sum_pmf_is_exact(p.get()))
                atom["mass_exact"] = exact_atoms[a][1];
            out.rows.push_back({skip + emitted, sigma, label(index, d), mass});
            atoms.push_back(std::move(atom));
        }
        vertices.push_back({{"sigma", sigma}, {"atoms", atoms}});
        ++emitted;
    }
    out.doc["vertices"] = vertices;
    return out;
}

Output run_bounds(const std::string& p_arg, std::optional<int> order)
{
    const SumPtr p = load_sum(p_arg);
    const int d = bp_sum_pmf_dimension(p.get());
    Output out;
    out.header = {"order", "lower", "upper"};
    Json rows = Json::array();
    const int from = order ? *order : 1;
    const int to = order ? *order : d;
    for (int k = from; k <= to; ++k) {
        double lo = 0.0, hi = 0.0;
        char* exact = nullptr;
        check(bp_moment_bounds(p.get(), k, &lo, &hi, &exact));
        Json row = {{"order", k}, {"lower", lo}, {"upper", hi}};
        if (exact != nullptr) {
            const Json e = Json::parse(take(exact));
            row["lower_exact"] = e["lower"];
            row["upper_exact"] = e["upper"];
        }
        out.rows.push_back({k, lo, hi});
        rows.push_back(std::move(row));
    }
    if (order) {
        out.doc = rows[0];
    } else {
        out.doc["p"] = pmf_json(p.get());
        out.doc["bounds"] = rows;
    }
    return out;
}

Output run_entropy_bounds(const std::string& p_arg)
{
    const SumPtr p = load_sum(p_arg);
    double lo = 0.0, hi = 0.0, hp = 0.0;
    check(bp_entropy_bounds(p.get(), &lo, &hi));
    check(bp_sum_pmf_entropy(p.get(), &hp));
    Output out;
    out.doc = {{"p", pmf_json(p.get())}, {"min", lo}, {"max", hi}, {"entropy_p", hp}};
    out.header = {"min", "max", "entropy_p"};
    out.rows.push_back({lo, hi, hp});
    return out;
}

Output run_feasible(const std::string& p_arg, const std::string& theta_arg)
{
    const SumPtr p = load_sum(p_arg);
    const MeanPtr theta = load_theta(theta_arg);
    int mean_ok = 0, box_ok = 0;
    check(bp_necessary_conditions(p.get(), theta.get(), &mean_ok, &box_ok));
    bp_joint_pmf* raw = nullptr;
    check(bp_feasible_point(p.get(), theta.get(), &raw));
    const JointPtr f(raw);
    Output out;
    out.doc = {{"mean_ok", mean_ok == 1}, {"box_ok", box_ok == 1}, {"feasible", f != nullptr}};
    out.header = {"mean_ok", "box_ok", "feasible", "x", "mass"};
    if (f) {
        out.doc["point"] = pmf_json(f.get());
        const int d = bp_joint_pmf_dimension(f.get());
        const auto v = values_of(f.get());
        for (std::size_t i = 0; i < v.size(); ++i)
            out.rows.push_back({mean_ok == 1, box_ok == 1, true, label(i, d), v[i]});
    } else {
        out.rows.push_back({mean_ok == 1, box_ok == 1, false, nullptr, nullptr});
    }
    return out;
}

Output run_constrained_vertices(const std::string& p_arg, const std::string& theta_arg)
{
    const SumPtr p = load_sum(p_arg);
    const MeanPtr theta = load_theta(theta_arg);
    bp_joint_list* raw = nullptr;
    check(bp_constrained_vertices(p.get(), theta.get(), &raw));
    const ListPtr list(raw);
    Output out;
    out.header = {"vertex", "x", "mass", "mass_exact"};
    Json vertices = Json::array();
    for (std::size_t k = 0; k < bp_joint_list_size(list.get()); ++k) {
        bp_joint_pmf* fr = nullptr;
        check(bp_joint_list_get(list.get(), k, &fr));
        const JointPtr f(fr);
        const int d = bp_joint_pmf_dimension(f.get());
        const Json exact = pmf_json(f.get())["values"];
        Json atoms = Json::array();
        const auto v = values_of(f.get());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0.0)
                continue;
            atoms.push_back({{"x", label(i, d)}, {"mass", v[i]}, {"mass_exact", exact[i]}});
            out.rows.push_back({k + 1, label(i, d), v[i], exact[i]});
        }
        vertices.push_back({{"atoms", atoms}, {"values", exact}});
    }
    out.doc["count"] = bp_joint_list_size(list.get());
    out.doc["vertices"] = vertices;
    return out;
}

/** Parses "1,2,3" into 1-based coordinates. */
std::vector<int> parse_subset(const std::string& s)
{
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stoi(item));
    if (out.empty())
        throw CliError("empty --subset");
    return out;
}

Output run_constrained_bounds(const std::string& p_arg, const std::string& theta_arg,
                              const std::optional<std::string>& subset)
{
    const SumPtr p = load_sum(p_arg);
    const MeanPtr theta = load_theta(theta_arg);
    const int d = bp_mean_vector_dimension(theta.get());
    std::vector<std::vector<int>> subsets;
    if (subset) {
        subsets.push_back(parse_subset(*subset));
    } else {
        // Every nonempty subset, by size then lexicographically.
        for (int size = 1; size <= d; ++size)
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
                if (__builtin_popcountll(mask) != size)
                    continue;
                std::vector<int> s;
                for (int j = 0; j < d; ++j)
                    if ((mask >> j) & 1U)
                        s.push_back(j + 1);
                subsets.push_back(s);
            }
        std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
    }
    Output out;
    out.header = {"subset", "lower", "upper", "lower_exact", "upper_exact"};
    Json rows = Json::array();
    for (const auto& s : subsets) {
        double lo = 0.0, hi = 0.0;
        char* exact = nullptr;
        check(bp_constrained_bounds(p.get(), theta.get(), s.data(), s.size(), &lo, &hi, &exact));
        const Json e = Json::parse(take(exact));
        std::string name;
        for (int j : s)
            name += (name.empty() ? "" : " ") + std::to_string(j);
        rows.push_back({{"subset", s}, {"lower", lo}, {"upper", hi}, {"lower_exact", e["lower"]},
                        {"upper_exact", e["upper"]}});
        out.rows.push_back({name, lo, hi, e["lower"], e["upper"]});
    }
    out.doc = subset ? rows[0] : Json{{"bounds", rows}};
    return out;
}

Output run_measure(const std::string& p_arg)
{
    const SumPtr p = load_sum(p_arg);
    double amb = 0.0, intr = 0.0, dens = 0.0, nc = 0.0;
    check(bp_polytope_measure(p.get(), &amb, &intr));
    check(bp_log_density(p.get(), &dens));
    check(bp_log_normalizing_constant(bp_sum_pmf_dimension(p.get()), &nc));
    char* desc = nullptr;
    check(bp_describe(p.get(), &desc));
    Output out;
    out.doc = {{"p", pmf_json(p.get())},
               {"log_ambient", num(amb)},
               {"ambient", std::exp(amb)},
               {"log_intrinsic", num(intr)},
               {"intrinsic", std::exp(intr)},
               {"log_density", num(dens)},
               {"log_normalizing_constant", nc},
               {"polytope", Json::parse(take(desc))}};
    out.header = {"log_ambient", "ambient", "log_intrinsic", "intrinsic", "log_density", "log_normalizing_constant"};
    out.rows.push_back({num(amb), std::exp(amb), num(intr), std::exp(intr), num(dens), nc});
    return out;
}

Output run_mode(int d)
{
    bp_sum_pmf* raw = nullptr;
    check(bp_sum_pmf_maximal(d, &raw));
    const SumPtr m(raw);
    const auto v = values_of(m.get());
    double dens = 0.0;
    check(bp_log_density(m.get(), &dens));
    Output out;
    out.doc = {{"p", v}, {"p_exact", pmf_json(m.get())}, {"log_density", dens}};
    out.header = {"k", "p", "p_exact"};
    const Json exact = pmf_json(m.get());
    for (std::size_t k = 0; k < v.size(); ++k)
        out.rows.push_back({k, v[k], exact[k]});
    return out;
}

Output run_density(const std::string& p_arg)
{
    const SumPtr p = load_sum(p_arg);
    const int d = bp_sum_pmf_dimension(p.get());
    double dens = 0.0, nc = 0.0, pdf = 0.0;
    check(bp_log_density(p.get(), &dens));
    check(bp_log_normalizing_constant(d, &nc));
    check(bp_dirichlet_pdf(p.get(), &pdf));
    Output out;
    out.doc = {{"p", pmf_json(p.get())},
               {"log_density", num(dens)},
               {"density", std::exp(dens)},
               {"log_normalizing_constant", nc},
               {"dirichlet_pdf", pdf}};
    out.header = {"log_density", "density", "log_normalizing_constant", "dirichlet_pdf"};
    out.rows.push_back({num(dens), std::exp(dens), nc, pdf});
    return out;
}

Output run_sample(const std::optional<std::string>& p_arg, std::optional<int> d_arg, std::uint64_t n, bool push,
                  const Common& c)
{
    if (p_arg.has_value() == d_arg.has_value())
        throw CliError("sample needs exactly one of --p or --d");
    const auto [seed, generated] = resolve_seed(c);
    bp_rng* rraw = nullptr;
    check(bp_rng_new(seed, 0, &rraw));
    const RngPtr rng(rraw);
    SumPtr p;
    if (p_arg)
        p = load_sum(*p_arg);
    const int d = p ? bp_sum_pmf_dimension(p.get()) : *d_arg;

    Output out;
    add_provenance(out, seed, generated, n);
    out.doc["source"] = p ? "polytope" : "fd";
    out.doc["d"] = d;
    out.doc["push_forward"] = push;
    out.header = {"draw"};
    const std::size_t width = push ? static_cast<std::size_t>(d) + 1 : std::size_t{1} << d;
    for (std::size_t i = 0; i < width; ++i)
        out.header.push_back(push ? "s" + std::to_string(i) : "f" + label(i, d));
    Json draws = Json::array();
    for (std::uint64_t t = 0; t < n; ++t) {
        bp_joint_pmf* fr = nullptr;
        check(p ? bp_sample_polytope(p.get(), rng.get(), &fr) : bp_sample_fd(d, rng.get(), &fr));
        const JointPtr f(fr);
        std::vector<double> v;
        if (push) {
            char* s = nullptr;
            check(bp_joint_pmf_sum_json(f.get(), &s));
            v = Json::parse(take(s)).get<std::vector<double>>();
        } else {
            v = values_of(f.get());
        }
        std::vector<Json> row{t};
        row.insert(row.end(), v.begin(), v.end());
        out.rows.push_back(std::move(row));
        draws.push_back(v);
    }
    out.doc["draws"] = draws;
    return out;
}

Output run_neighborhood(const std::string& p_arg, double eps, const std::string& metric, std::uint64_t n,
                        const std::string& sampler, bool paper_sigma_s, std::uint64_t burn_in, std::uint64_t thin,
                        const Common& c)
{
    const SumPtr p = load_sum(p_arg);
    const auto [seed, generated] = resolve_seed(c);
    bp_neighborhood region{eps, metric == "tv" ? BP_METRIC_TV : BP_METRIC_SUP, paper_sigma_s ? 1 : 0};
    bp_estimator_options opt;
    bp_estimator_options_init(&opt);
    opt.seed = seed;
    opt.threads = c.threads;
    opt.sampler = sampler == "hit-and-run" ? BP_SAMPLER_HIT_AND_RUN : BP_SAMPLER_REJECTION;
    opt.burn_in = burn_in;
    opt.thin = thin;
    bp_estimate r{};
    check(bp_estimate_neighborhood(p.get(), &region, n, &opt, &r));

    Output out;
    add_provenance(out, seed, generated, r.n_samples);
    out.doc["p"] = pmf_json(p.get());
    out.doc["epsilon"] = eps;
    out.doc["metric"] = metric;
    out.doc["sampler"] = sampler;
    out.doc["paper_sigma_s"] = paper_sigma_s;
    out.doc["estimate"] = r.estimate;
    out.doc["log_estimate"] = num(r.log_estimate);
    out.doc["std_error"] = r.std_error;
    out.doc["relative_std_error"] = r.relative_std_error;
    out.doc["acceptance_rate"] = r.acceptance_rate;
    out.doc["log_region_volume"] = num(r.log_region_volume);
    out.doc["region_volume_relative_std_error"] = r.region_volume_relative_std_error;
    out.doc["log_mean_density"] = num(r.log_mean_density);
    out.doc["mean_density_relative_std_error"] = r.mean_density_relative_std_error;
    out.header = {"seed", "n", "epsilon", "metric", "estimate", "std_error", "log_estimate", "acceptance_rate"};
    out.rows.push_back({seed, r.n_samples, eps, metric, r.estimate, r.std_error, num(r.log_estimate),
                        r.acceptance_rate});
    return out;
}

Output run_binomial_scan(int d, int points)
{
    if (points < 1)
        throw CliError("--points must be positive");
    Output out;
    out.header = {"theta", "log_measure"};
    Json rows = Json::array();
    for (int i = 1; i <= points; ++i) {
        const double theta = static_cast<double>(i) / (points + 1);
        double lm = 0.0;
        check(bp_curve_log_measure(theta, d, &lm));
        rows.push_back({{"theta", theta}, {"log_measure", num(lm)}});
        out.rows.push_back({theta, num(lm)});
    }
    double argmax = 0.0;
    check(bp_curve_argmax(d, 0, &argmax));
    out.doc = {{"d", d}, {"argmax", argmax}, {"scan", rows}};
    return out;
}

Output run_bin_vs_mode(int dmax)
{
    if (dmax < 2)
        throw CliError("--dmax must be at least 2");
    Output out;
    out.header = {"d", "d_sup", "log_measure_gap"};
    Json rows = Json::array();
    for (int d = 2; d <= dmax; ++d) {
        double ds = 0.0, gap = 0.0;
        check(bp_bin_vs_mode(d, &ds, &gap));
        rows.push_back({{"d", d}, {"d_sup", ds}, {"log_measure_gap", gap}});
        out.rows.push_back({d, ds, gap});
    }
    out.doc = {{"table", rows}};
    return out;
}

}   // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bernoulli vectors with a given sum distribution: extremal points, bounds and measures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(bp_version()));

    Common common;
    const auto add_common = [&](CLI::App* sub, bool stochastic) {
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
        if (stochastic)
            sub->add_option("--seed", common.seed, "Random seed (generated and reported if absent)");
    };

    std::string p_arg, theta_arg;
    const char* p_help = "Sum pmf: inline JSON list or a file path";
    const char* theta_help = "Mean vector: inline JSON list or a file path";

    auto* ext = app.add_subcommand("extremals", "Vertices of P(p)");
    std::optional<std::uint64_t> limit;
    std::uint64_t skip = 0, max_vertices = 100000;
    ext->add_option("--p", p_arg, p_help)->required();
    ext->add_option("--limit", limit, "Emit at most this many vertices");
    ext->add_option("--skip", skip, "Skip this many vertices first");
    ext->add_option("--max-vertices", max_vertices, "Refuse larger vertex sets unless --limit is given");
    add_common(ext, false);

    auto* bnd = app.add_subcommand("bounds", "Sharp cross-moment bounds over P(p)");
    std::optional<int> order;
    bnd->add_option("--p", p_arg, p_help)->required();
    bnd->add_option("--order", order, "Moment order k (all orders if absent)");
    add_common(bnd, false);

    auto* ent = app.add_subcommand("entropy-bounds", "Entropy range over P(p)");
    ent->add_option("--p", p_arg, p_help)->required();
    add_common(ent, false);

    auto* fea = app.add_subcommand("feasible", "Necessary conditions and a member of P(p, theta)");
    fea->add_option("--p", p_arg, p_help)->required();
    fea->add_option("--theta", theta_arg, theta_help)->required();
    add_common(fea, false);

    auto* cv = app.add_subcommand("constrained-vertices", "Vertices of P(p, theta)");
    cv->add_option("--p", p_arg, p_help)->required();
    cv->add_option("--theta", theta_arg, theta_help)->required();
    add_common(cv, false);

    auto* cb = app.add_subcommand("constrained-bounds", "Cross-moment bounds over P(p, theta)");
    std::optional<std::string> subset;
    cb->add_option("--p", p_arg, p_help)->required();
    cb->add_option("--theta", theta_arg, theta_help)->required();
    cb->add_option("--subset", subset, "Coordinates such as 1,2 (all subsets if absent)");
    add_common(cb, false);

    auto* mea = app.add_subcommand("measure", "Hausdorff measure of P(p)");
    mea->add_option("--p", p_arg, p_help)->required();
    add_common(mea, false);

    auto* mod = app.add_subcommand("mode", "The maximal pmf p^M");
    int d_mode = 0;
    mod->add_option("--d", d_mode, "Dimension")->required();
    add_common(mod, false);

    auto* den = app.add_subcommand("density", "Density l(p) and the Dirichlet density at p");
    den->add_option("--p", p_arg, p_help)->required();
    add_common(den, false);

    auto* smp = app.add_subcommand("sample", "Uniform draws from P(p) (--p) or F_d (--d)");
    std::optional<std::string> sample_p;
    std::optional<int> sample_d;
    std::uint64_t sample_n = 1;
    bool push = false;
    smp->add_option("--p", sample_p, p_help);
    smp->add_option("--d", sample_d, "Dimension for draws from F_d");
    smp->add_option("--n", sample_n, "Number of draws");
    smp->add_flag("--sum", push, "Emit s(f) instead of f");
    add_common(smp, true);

    auto* nb = app.add_subcommand("neighborhood", "Monte Carlo measure of a neighborhood of p");
    double eps = 0.0;
    std::string metric = "sup", sampler = "rejection";
    std::uint64_t nb_n = 100000, burn_in = 1000, thin = 10;
    bool paper_sigma_s = false;
    nb->add_option("--p", p_arg, p_help)->required();
    nb->add_option("--eps", eps, "Radius epsilon")->required();
    nb->add_option("--metric", metric, "sup or tv")->check(CLI::IsMember({"sup", "tv"}));
    nb->add_option("--n", nb_n, "Samples per stage");
    nb->add_option("--sampler", sampler, "rejection or hit-and-run")
        ->check(CLI::IsMember({"rejection", "hit-and-run"}));
    nb->add_flag("--paper-sigma-s", paper_sigma_s, "Drop the bound on the last coordinate");
    nb->add_option("--burn-in", burn_in, "Hit-and-run burn-in steps");
    nb->add_option("--thin", thin, "Hit-and-run steps between draws");
    add_common(nb, true);

    auto* bs = app.add_subcommand("binomial-scan", "Log measure of P(b(theta)) on a theta grid");
    int bs_d = 0, points = 99;
    bs->add_option("--d", bs_d, "Dimension")->required();
    bs->add_option("--points", points, "Interior grid points");
    add_common(bs, false);

    auto* bm = app.add_subcommand("bin-vs-mode", "b(1/2) against p^M for d = 2..dmax");
    int dmax = 20;
    bm->add_option("--dmax", dmax, "Largest dimension");
    add_common(bm, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Output out;
        if (ext->parsed())
            out = run_extremals(p_arg, limit, skip, max_vertices);
        else if (bnd->parsed())
            out = run_bounds(p_arg, order);
        else if (ent->parsed())
            out = run_entropy_bounds(p_arg);
        else if (fea->parsed())
            out = run_feasible(p_arg, theta_arg);
        else if (cv->parsed())
            out = run_constrained_vertices(p_arg, theta_arg);
        else if (cb->parsed())
            out = run_constrained_bounds(p_arg, theta_arg, subset);
        else if (mea->parsed())
            out = run_measure(p_arg);
        else if (mod->parsed())
            out = run_mode(d_mode);
        else if (den->parsed())
            out = run_density(p_arg);
        else if (smp->parsed())
            out = run_sample(sample_p, sample_d, sample_n, push, common);
        else if (nb->parsed())
            out = run_neighborhood(p_arg, eps, metric, nb_n, sampler, paper_sigma_s, burn_in, thin, common);
        else if (bs->parsed())
            out = run_binomial_scan(bs_d, points);
        else if (bm->parsed())
            out = run_bin_vs_mode(dmax);
        print(out, common.format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
