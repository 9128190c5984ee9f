#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bernpoly/core.hpp"

/**
 * JSON forms of the pmf types.
 *
 *   SumPmf          [p_0, ..., p_d]
 *   JointPmf        {"d": d, "values": [f_0, ..., f_{2^d - 1}]}
 *   SparseJointPmf  {"d": d, "atoms": [[index, mass], ...]}
 *
 * Floating-point masses are JSON numbers; exact masses are "num/den"
 * strings.  On input a list containing at least one string is read exactly,
 * with any number entries converted through rationalize().
 */
namespace bernpoly {

using Json = nlohmann::json;

/** A sum pmf read from JSON; `exact` is set when the input was rational. */
struct ParsedSumPmf
{
    SumPmf approx;
    std::optional<ExactSumPmf> exact;

    bool is_exact() const { return exact.has_value(); }
};

ParsedSumPmf parse_sum_pmf(const Json& j);
ParsedSumPmf parse_sum_pmf(const std::string& text);

/** A plain list of reals (numbers or rational strings), e.g. a mean vector. */
std::vector<Rational> parse_rational_list(const Json& j);
std::vector<double> parse_double_list(const Json& j);

JointPmf parse_joint_pmf(const Json& j);
ExactJointPmf parse_exact_joint_pmf(const Json& j);
SparseJointPmf parse_sparse_joint_pmf(const Json& j);
ExactSparseJointPmf parse_exact_sparse_joint_pmf(const Json& j);

Json to_json(const Rational& v);
Json to_json(const SumPmf& p);
Json to_json(const ExactSumPmf& p);
Json to_json(const JointPmf& f);
Json to_json(const ExactJointPmf& f);
Json to_json(const SparseJointPmf& f);
Json to_json(const ExactSparseJointPmf& f);

/** "x_1 x_2 ... x_d" as a digit string, e.g. "110" for index 3 when d = 3. */
std::string binary_label(Index i, int d);

}   // namespace bernpoly
