#include <doctest.h>

#include "bernpoly/io.hpp"

using namespace bernpoly;

TEST_CASE("sum pmf from numbers stays floating point")
{
    const auto parsed = parse_sum_pmf(std::string("[0.125, 0.375, 0.375, 0.125]"));
    CHECK_FALSE(parsed.is_exact());
    CHECK(parsed.approx[1] == 0.375);
}

TEST_CASE("sum pmf with rational strings routes to the exact path")
{
    const auto parsed = parse_sum_pmf(std::string(R"(["0", "4/5", "0.2", 0])"));
    REQUIRE(parsed.is_exact());
    CHECK((*parsed.exact)[1] == Rational(4, 5));
    CHECK((*parsed.exact)[2] == Rational(1, 5));
    CHECK(parsed.approx[1] == doctest::Approx(0.8));
}

TEST_CASE("malformed inputs name the failure")
{
    CHECK_THROWS_AS(parse_sum_pmf(std::string("[0.5, 0.6]")), InvalidArgument);
    CHECK_THROWS_AS(parse_sum_pmf(std::string("{\"a\": 1}")), InvalidArgument);
    CHECK_THROWS_AS(parse_sum_pmf(std::string("[0.5, ")), InvalidArgument);
    CHECK_THROWS_AS(parse_sum_pmf(std::string(R"(["1/0", "1"])")), InvalidArgument);
    CHECK_THROWS_AS(parse_sum_pmf(std::string("[true, false]")), InvalidArgument);
    try {
        parse_sum_pmf(std::string("[0.5, -0.5, 1.0]"));
        FAIL("expected a throw");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("negative") != std::string::npos);
    }
}

TEST_CASE("round trips")
{
    const ExactSumPmf p({Rational(1, 8), Rational(3, 8), Rational(3, 8), Rational(1, 8)});
    const Json j = to_json(p);
    CHECK(j.dump() == R"(["1/8","3/8","3/8","1/8"])");
    CHECK(*parse_sum_pmf(j).exact == p);

    const JointPmf f(2, {0.1, 0.2, 0.3, 0.4});
    CHECK(parse_joint_pmf(to_json(f)) == f);

    const ExactSparseJointPmf s(3, {{3, Rational(3, 8)}, {0, Rational(5, 8)}});
    CHECK(to_json(s).dump() == R"({"atoms":[[0,"5/8"],[3,"3/8"]],"d":3})");
    CHECK(parse_exact_sparse_joint_pmf(to_json(s)) == s);

    const SparseJointPmf sd(3, {{1, 0.5}, {6, 0.5}});
    CHECK(parse_sparse_joint_pmf(to_json(sd)) == sd);
}

TEST_CASE("binary labels")
{
    CHECK(binary_label(3, 3) == "110");
    CHECK(binary_label(4, 3) == "001");
    CHECK(binary_label(0, 2) == "00");
}
