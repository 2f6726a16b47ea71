#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

#include "fcm/harness.hpp"
#include "fcm/json_io.hpp"

using namespace fcm;

TEST_CASE("family generators")
{
    CHECK(gen_family({Family::linear_chain, 2}) == parse_formula(fixtures::f1_text));
    CHECK(clausify(gen_family({Family::linear_chain, 2})) == fixtures::f1_matrix());

    Matrix d1 = clausify(gen_family({Family::doubling_chain, 1}));
    CHECK(d1.to_string() == clausify(parse_formula("p0 & (p0 => q0) & (p0 => r0) & (q0 & r0 => p1) => p1")).to_string());
    CHECK(d1.size() == 5);
    CHECK(d1.clauses().back() == Clause{Literal{false, "p1", {}}});

    Matrix nt = clausify(gen_family({Family::nontheorem_chain, 2}));
    CHECK(nt.size() == 2);

    for (Family f : {Family::linear_chain, Family::doubling_chain, Family::nontheorem_chain})
        for (int n = 1; n <= 5; ++n)
            CHECK(gen_family({f, n}) == gen_family({f, n}));
}

TEST_CASE("family specs")
{
    FamilySpec s = parse_family_spec("doubling-chain:3");
    CHECK(s.family == Family::doubling_chain);
    CHECK(s.n == 3);
    CHECK(s.name() == "doubling-chain:3");
    CHECK_THROWS_AS(parse_family_spec("triple-chain:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family_spec("linear-chain"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family_spec("linear-chain:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family_spec("linear-chain:x"), std::invalid_argument);
    CHECK_THROWS_AS(gen_family({Family::doubling_chain, family_max(Family::doubling_chain) + 1}), std::invalid_argument);
}

TEST_CASE("proof JSON round trip")
{
    SearchConfig cfg;
    cfg.factorization = true;
    auto out = prove(fixtures::f1_matrix(), cfg);
    REQUIRE(out.proved());
    const ConnectionProof &p = *out.proof;
    Json j = to_json(p);
    CHECK(j["multiplicity"] == Json::array({1, 2, 1}));
    CHECK(j["connections"].size() == 4);
    CHECK(j["matrix"][1] == Json::array({"~n(X)", "n(f(X))"}));
    CHECK(j["substitution"]["X_1"] == "f(zero)");

    ConnectionProof back = connection_proof_from_json(parse_json(j.dump()));
    CHECK(back.matrix == p.matrix);
    CHECK(back.multiplicity == p.multiplicity);
    CHECK(back.connections == p.connections);
    CHECK(back.substitution == p.substitution);
    REQUIRE(back.dag);
    CHECK(*back.dag == *p.dag);
    CHECK(to_json(back).dump() == j.dump());

    auto sat = saturate(fixtures::f1_matrix());
    REQUIRE(sat.proof);
    Json rj = to_json(*sat.proof);
    CHECK(is_resolution_proof_json(rj));
    CHECK_FALSE(is_resolution_proof_json(j));
    ResolutionProof rback = resolution_proof_from_json(parse_json(rj.dump()));
    CHECK(check_resolution_proof(rback).accepted);
    CHECK(to_json(rback).dump() == rj.dump());
}

TEST_CASE("malformed proof JSON is reported")
{
    CHECK_THROWS_AS(parse_json("{not json"), JsonFormatError);
    CHECK_THROWS_AS(connection_proof_from_json(parse_json(R"({"matrix": []})")), JsonFormatError);
    CHECK_THROWS_AS(connection_proof_from_json(parse_json(
                        R"({"matrix": [["p"], ["~p"]], "multiplicity": [1], "connections": [], "substitution": {}})")),
                    JsonFormatError);
    CHECK_THROWS_AS(connection_proof_from_json(parse_json(
                        R"({"matrix": [["p"], ["~p"]], "multiplicity": [1, 1], "connections": [[[0, 1], [7, 1]]], "substitution": {}})")),
                    JsonFormatError);
    CHECK_THROWS_AS(connection_proof_from_json(parse_json(
                        R"({"matrix": [["p("]], "multiplicity": [1], "connections": [], "substitution": {}})")),
                    JsonFormatError);
    CHECK_THROWS_AS(resolution_proof_from_json(parse_json(
                        R"({"matrix": [["p"]], "steps": [{"kind": "magic", "clause": []}]})")),
                    JsonFormatError);

    ConnectionProof p = connection_proof_from_json(parse_json(
        R"({"matrix": [["p"], ["~p"]], "multiplicity": [1, 1], "connections": [[[0, 1], [1, 1]]], "substitution": {}})"));
    CHECK(check_proof(p).accepted());
}

TEST_CASE("run_compare rows")
{
    CompareConfig cfg;
    cfg.search.max_multiplicity = 64;
    std::vector<FamilySpec> specs{{Family::linear_chain, 1}, {Family::linear_chain, 2}, {Family::linear_chain, 3},
                                  {Family::doubling_chain, 1}, {Family::doubling_chain, 2},
                                  {Family::doubling_chain, 3}, {Family::nontheorem_chain, 1}};
    RunReport report = run_compare(specs, cfg);
    REQUIRE(report.rows.size() == specs.size());

    const RunRow &f1 = report.rows[1];
    CHECK(f1.spec.name() == "linear-chain:2");
    REQUIRE(f1.off.sizes);
    REQUIRE(f1.on.sizes);
    CHECK(f1.off.sizes->connections == 5);
    CHECK(f1.on.sizes->connections == 4);
    CHECK(f1.resolution.steps == 4);
    CHECK(f1.translations.size() == 2);

    for (const auto &row : report.rows)
    {
        CAPTURE(row.spec.name());
        CHECK(row.errors.empty());
        if (row.theorem)
        {
            CHECK(row.off.checked);
            CHECK(row.on.checked);
            CHECK(row.resolution.checked);
            for (const auto &t : row.translations)
                CHECK(t.accepted);
        }
        else
        {
            CHECK_FALSE(row.off.sizes);
            CHECK_FALSE(row.on.sizes);
            CHECK(row.resolution.status != ResolutionStatus::refuted);
        }
    }

    // Sizes are nondecreasing in n within each family.
    for (std::size_t i = 1; i < report.rows.size(); ++i)
    {
        const RunRow &a = report.rows[i - 1], &b = report.rows[i];
        if (a.spec.family != b.spec.family || !b.theorem)
            continue;
        CHECK(a.off.sizes->connections <= b.off.sizes->connections);
        CHECK(a.on.sizes->connections <= b.on.sizes->connections);
        CHECK(a.resolution.steps <= b.resolution.steps);
    }

    RunReport again = run_compare(specs, cfg);
    for (std::size_t i = 0; i < specs.size(); ++i)
        CHECK(to_json(report.rows[i], false).dump() == to_json(again.rows[i], false).dump());
    CHECK_FALSE(to_json(report.rows[0], false)["off"]["stats"].contains("wall_ms"));
    CHECK(to_json(report.rows[0], true)["off"]["stats"].contains("wall_ms"));
}
