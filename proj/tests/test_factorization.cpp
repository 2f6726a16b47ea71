#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "fixtures.hpp"

#include "fcm/factorization.hpp"
#include "fcm/search.hpp"

using namespace fcm;

namespace
{
    // p(a) & ![X]: (p(X) => q(X)) => q(a) & q(a), both copies mapped to a.
    ConnectionProof interchangeable_copies()
    {
        Term a = Term::application("a");
        Term x = Term::variable("X");
        ConnectionProof p;
        p.matrix = Matrix({Clause{Literal{true, "p", {a}}},
                           Clause{Literal{false, "p", {x}}, Literal{true, "q", {x}}},
                           Clause{Literal{false, "q", {a}}, Literal{false, "q", {a}}}});
        p.multiplicity = {1, 2, 1};
        p.connections = {fixtures::conn(0, 0, 1, 1, 0, 1), fixtures::conn(0, 0, 1, 1, 0, 2),
                         fixtures::conn(1, 1, 1, 2, 0, 1), fixtures::conn(1, 1, 2, 2, 1, 1)};
        p.substitution.bind({"X", 1}, a);
        p.substitution.bind({"X", 2}, a);
        p.normalize();
        return p;
    }

    SearchConfig bounds(bool factorization)
    {
        SearchConfig cfg;
        cfg.factorization = factorization;
        cfg.max_multiplicity = 16;
        return cfg;
    }
} // namespace

TEST_CASE("find_factorizations examples")
{
    FactorMap phi = find_factorizations(fixtures::f1_standard_proof());
    REQUIRE(phi.groups.size() == 3);
    CHECK(phi.groups[0] == std::vector<std::vector<int>>{{1}});
    CHECK(phi.groups[1] == std::vector<std::vector<int>>{{1, 3}, {2}});
    CHECK(phi.groups[2] == std::vector<std::vector<int>>{{1}});

    auto ground = prove(clausify(parse_formula("p & (p => q) => q")), bounds(false));
    REQUIRE(ground.proved());
    CHECK(find_factorizations(*ground.proof).is_identity());

    ConnectionProof two = interchangeable_copies();
    REQUIRE(check_proof(two).accepted());
    CHECK(find_factorizations(two).groups[1] == std::vector<std::vector<int>>{{1, 2}});
}

TEST_CASE("apply_factorization examples")
{
    ConnectionProof standard = fixtures::f1_standard_proof();
    ConnectionProof merged = apply_factorization(standard, find_factorizations(standard));
    ConnectionProof expected = fixtures::f1_factorized_proof();
    CHECK(merged.connections == expected.connections);
    CHECK(merged.multiplicity == Multiplicity{1, 2, 1});
    CHECK(merged.substitution == expected.substitution);
    CHECK(merged.connection_count() == 4);
    CHECK(check_proof(merged).accepted());

    ConnectionProof same = apply_factorization(standard, FactorMap::identity(standard.multiplicity));
    CHECK(same.connections == standard.connections);
    CHECK(same.multiplicity == standard.multiplicity);
    CHECK(same.substitution == standard.substitution);

    FactorMap illegal = FactorMap::identity(standard.multiplicity);
    illegal.groups[1] = {{1, 2}, {3}};
    try
    {
        apply_factorization(standard, illegal);
        FAIL("expected a factorization error");
    }
    catch (const FactorizationError &e)
    {
        CHECK(e.clause == 1);
        CHECK(e.first_copy == 1);
        CHECK(e.second_copy == 2);
        CHECK(std::string(e.what()).find("n(f(f(zero)))") != std::string::npos);
    }

    FactorMap not_partition = FactorMap::identity(standard.multiplicity);
    not_partition.groups[1] = {{1, 2}};
    CHECK_THROWS_AS(apply_factorization(standard, not_partition), std::invalid_argument);

    ConnectionProof two = apply_factorization(interchangeable_copies(), find_factorizations(interchangeable_copies()));
    CHECK(two.multiplicity == Multiplicity{1, 1, 1});
    CHECK(two.connection_count() == 3);
    CHECK(check_proof(two).accepted());
}

TEST_CASE("size_report examples")
{
    SizeReport standard = size_report(fixtures::f1_standard_proof());
    SizeReport factorized = size_report(fixtures::f1_factorized_proof());
    CHECK(standard.connections == 5);
    CHECK(factorized.connections == 4);
    CHECK(factorized.total_multiplicity < standard.total_multiplicity);
    CHECK(standard.tree_nodes == standard.dag_nodes);
    CHECK(standard.factorization_edges == 0);
    CHECK(factorized.factorization_edges == 1);
    CHECK(factorized.dag_nodes < factorized.tree_nodes);
    CHECK(factorized.tree_nodes == standard.tree_nodes);

    auto on = prove(clausify(gen_family({Family::doubling_chain, 3})), bounds(true));
    REQUIRE(on.proved());
    SizeReport shared = size_report(*on.proof);
    // Every level doubles the tree; the DAG grows by a constant per level.
    CHECK(shared.tree_nodes >= 8);
    CHECK(shared.dag_nodes <= 4 * 3 + 1);
    int p0_leaves = 0;
    for (const auto &node : on.proof->dag->nodes)
        p0_leaves += node.partner.clause == 0;
    CHECK(p0_leaves >= 1);
    CHECK(shared.tree_nodes >= 2 * 2 * 2 + shared.dag_nodes);
}

TEST_CASE("property: factorization over the corpus")
{
    for (const auto &e : corpus::entries())
    {
        if (!e.theorem)
            continue;
        CAPTURE(e.name);
        auto off = prove(corpus::matrix(e), bounds(false));
        REQUIRE(off.proved());
        const ConnectionProof &p = *off.proof;

        FactorMap phi = find_factorizations(p);
        ConnectionProof once = apply_factorization(p, phi);
        CHECK(check_proof(once).accepted());
        CHECK(once.connection_count() <= p.connection_count());
        CHECK(total_multiplicity(once.multiplicity) <= total_multiplicity(p.multiplicity));

        bool merges_endpoint = false;
        for (std::size_t c = 0; c < phi.groups.size(); ++c)
            for (const auto &g : phi.groups[c])
                for (std::size_t i = 1; i < g.size(); ++i)
                    for (const auto &conn : p.connections)
                        for (OccCopy end : {conn.first, conn.second})
                            merges_endpoint = merges_endpoint ||
                                              (end.clause == static_cast<int>(c) && end.copy == g[i]);
        if (merges_endpoint)
        {
            CHECK(once.connection_count() < p.connection_count());
            CHECK(total_multiplicity(once.multiplicity) < total_multiplicity(p.multiplicity));
        }

        FixpointResult fix = factorize_to_fixpoint(p);
        CHECK(fix.iterations <= total_multiplicity(p.multiplicity));
        CHECK(check_proof(fix.proof).accepted());
        CHECK(find_factorizations(fix.proof).is_identity());
        FixpointResult again = factorize_to_fixpoint(fix.proof);
        CHECK(again.iterations == 0);
        CHECK(again.proof.connections == fix.proof.connections);

        auto on = prove(corpus::matrix(e), bounds(true));
        REQUIRE(on.proved());
        SizeReport report = size_report(*on.proof);
        CHECK(report.dag_nodes <= report.tree_nodes);
        if (report.factorization_edges == 0)
            CHECK(report.dag_nodes == report.tree_nodes);
    }
}

TEST_CASE("factorization strictly shrinks linear-chain proofs")
{
    for (int n = 2; n <= 6; ++n)
    {
        CAPTURE(n);
        auto off = prove(clausify(gen_family({Family::linear_chain, n})), bounds(false));
        REQUIRE(off.proved());
        FixpointResult fix = factorize_to_fixpoint(*off.proof);
        CHECK(fix.proof.connection_count() < off.proof->connection_count());
        CHECK(total_multiplicity(fix.proof.multiplicity) < total_multiplicity(off.proof->multiplicity));
        CHECK(fix.proof.connection_count() == n + 2);
    }
}

TEST_CASE("fixpoint of the doubling-chain tree proof reaches the shared size")
{
    for (int n = 1; n <= 4; ++n)
    {
        auto off = prove(clausify(gen_family({Family::doubling_chain, n})), bounds(false));
        REQUIRE(off.proved());
        FixpointResult fix = factorize_to_fixpoint(*off.proof);
        CHECK(fix.proof.connection_count() == 4 * n + 1);
        CHECK(check_proof(fix.proof).accepted());
    }
}
