#include "bernpoly/io.hpp"

namespace bernpoly {

namespace {

const Json& require_array(const Json& j, const char* what)
{
    if (!j.is_array())
        throw InvalidArgument(std::string(what) + ": expected a JSON array");
    return j;
}

bool has_string(const Json& list)
{
    for (const auto& v : list)
        if (v.is_string())
            return true;
    return false;
}

Rational read_rational(const Json& v, const char* what)
{
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(v.get<long long>());
    if (v.is_number())
        return rationalize(v.get<double>());
    throw InvalidArgument(std::string(what) + ": entries must be numbers or \"num/den\" strings");
}

double read_double(const Json& v, const char* what)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return to_double(parse_rational(v.get<std::string>()));
    throw InvalidArgument(std::string(what) + ": entries must be numbers or \"num/den\" strings");
}

int read_dimension(const Json& j, const char* what)
{
    if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer())
        throw InvalidArgument(std::string(what) + ": expected an object with integer field \"d\"");
    return j["d"].get<int>();
}

template <class T>
std::vector<BasicAtom<T>> read_atoms(const Json& j, const char* what)
{
    if (!j.contains("atoms"))
        throw InvalidArgument(std::string(what) + ": missing field \"atoms\"");
    std::vector<BasicAtom<T>> atoms;
    for (const auto& a : require_array(j["atoms"], what)) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_unsigned())
            throw InvalidArgument(std::string(what) + ": atoms must be [index, mass] pairs");
        const Index i = a[0].get<Index>();
        if constexpr (detail::is_exact_v<T>)
            atoms.push_back({i, read_rational(a[1], what)});
        else
            atoms.push_back({i, read_double(a[1], what)});
    }
    return atoms;
}

}   // namespace

ParsedSumPmf parse_sum_pmf(const Json& j)
{
    require_array(j, "SumPmf");
    if (has_string(j)) {
        ExactSumPmf exact(parse_rational_list(j));
        return {to_double(exact), std::move(exact)};
    }
    return {SumPmf(parse_double_list(j)), std::nullopt};
}

ParsedSumPmf parse_sum_pmf(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(std::string("SumPmf: malformed JSON: ") + e.what());
    }
    return parse_sum_pmf(j);
}

std::vector<Rational> parse_rational_list(const Json& j)
{
    std::vector<Rational> out;
    for (const auto& v : require_array(j, "list"))
        out.push_back(read_rational(v, "list"));
    return out;
}

std::vector<double> parse_double_list(const Json& j)
{
    std::vector<double> out;
    for (const auto& v : require_array(j, "list"))
        out.push_back(read_double(v, "list"));
    return out;
}

JointPmf parse_joint_pmf(const Json& j)
{
    const int d = read_dimension(j, "JointPmf");
    if (!j.contains("values"))
        throw InvalidArgument("JointPmf: missing field \"values\"");
    return JointPmf(d, parse_double_list(j["values"]));
}

ExactJointPmf parse_exact_joint_pmf(const Json& j)
{
    const int d = read_dimension(j, "JointPmf");
    if (!j.contains("values"))
        throw InvalidArgument("JointPmf: missing field \"values\"");
    return ExactJointPmf(d, parse_rational_list(j["values"]));
}

SparseJointPmf parse_sparse_joint_pmf(const Json& j)
{
    const int d = read_dimension(j, "SparseJointPmf");
    return SparseJointPmf(d, read_atoms<double>(j, "SparseJointPmf"));
}

ExactSparseJointPmf parse_exact_sparse_joint_pmf(const Json& j)
{
    const int d = read_dimension(j, "SparseJointPmf");
    return ExactSparseJointPmf(d, read_atoms<Rational>(j, "SparseJointPmf"));
}

Json to_json(const Rational& v)
{
    return to_string(v);
}

Json to_json(const SumPmf& p)
{
    Json out = Json::array();
    for (double v : p.values())
        out.push_back(v);
    return out;
}

Json to_json(const ExactSumPmf& p)
{
    Json out = Json::array();
    for (const auto& v : p.values())
        out.push_back(to_string(v));
    return out;
}

Json to_json(const JointPmf& f)
{
    Json values = Json::array();
    for (double v : f.values())
        values.push_back(v);
    return {{"d", f.dimension()}, {"values", std::move(values)}};
}

Json to_json(const ExactJointPmf& f)
{
    Json values = Json::array();
    for (const auto& v : f.values())
        values.push_back(to_string(v));
    return {{"d", f.dimension()}, {"values", std::move(values)}};
}

Json to_json(const SparseJointPmf& f)
{
    Json atoms = Json::array();
    for (const auto& a : f.atoms())
        atoms.push_back(Json::array({a.index, a.mass}));
    return {{"d", f.dimension()}, {"atoms", std::move(atoms)}};
}

Json to_json(const ExactSparseJointPmf& f)
{
    Json atoms = Json::array();
    for (const auto& a : f.atoms())
        atoms.push_back(Json::array({a.index, to_string(a.mass)}));
    return {{"d", f.dimension()}, {"atoms", std::move(atoms)}};
}

std::string binary_label(Index i, int d)
{
    std::string s;
    for (int j = 0; j < d; ++j)
        s.push_back(((i >> j) & 1U) ? '1' : '0');
    return s;
}

}   // namespace bernpoly
