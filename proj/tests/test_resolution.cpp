#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "fixtures.hpp"

#include "fcm/resolution.hpp"
#include "fcm/search.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace fcm;

namespace
{
    Literal atom(const std::string &p, bool positive = true) { return Literal{positive, p, {}}; }

    Matrix p_not_p() { return Matrix({Clause{atom("p")}, Clause{atom("p", false)}}); }

    std::vector<Clause> derived_clauses(const ResolutionProof &rp)
    {
        std::vector<Clause> out;
        for (const auto &s : rp.steps)
            if (s.kind != ResKind::input)
                out.push_back(s.clause);
        return out;
    }

    // Ground clause as a sorted multiset of signed atom numbers.
    using GClause = std::vector<int>;

    GClause encode(const Clause &c)
    {
        GClause out;
        for (const auto &l : c)
            out.push_back((l.positive ? 1 : -1) * (l.predicate[1] - '0' + 1));
        std::sort(out.begin(), out.end());
        return out;
    }

    // Shortest refutation length by breadth-first search over sets of derived clauses.
    int shortest_refutation(const std::vector<GClause> &inputs, int max_len)
    {
        using State = std::set<GClause>;
        std::set<State> layer{State{}};
        for (int len = 1; len <= max_len; ++len)
        {
            std::set<State> next;
            for (const auto &st : layer)
            {
                std::vector<GClause> avail(inputs.begin(), inputs.end());
                avail.insert(avail.end(), st.begin(), st.end());
                auto add = [&](GClause c)
                {
                    std::sort(c.begin(), c.end());
                    if (std::find(avail.begin(), avail.end(), c) != avail.end())
                        return false;
                    if (c.empty())
                        return true;
                    State s2 = st;
                    s2.insert(c);
                    next.insert(std::move(s2));
                    return false;
                };
                for (const auto &a : avail)
                {
                    for (std::size_t i = 0; i < a.size(); ++i)
                    {
                        for (std::size_t j = i + 1; j < a.size(); ++j)
                            if (a[i] == a[j])
                            {
                                GClause c = a;
                                c.erase(c.begin() + static_cast<long>(j));
                                if (add(c))
                                    return len;
                            }
                        for (const auto &b : avail)
                            for (std::size_t j = 0; j < b.size(); ++j)
                                if (a[i] == -b[j])
                                {
                                    GClause c;
                                    for (std::size_t k = 0; k < a.size(); ++k)
                                        if (k != i)
                                            c.push_back(a[k]);
                                    for (std::size_t k = 0; k < b.size(); ++k)
                                        if (k != j)
                                            c.push_back(b[k]);
                                    if (add(c))
                                        return len;
                                }
                    }
                }
            }
            layer = std::move(next);
        }
        return -1;
    }
} // namespace

TEST_CASE("resolve and factor")
{
    Term a = Term::application("a");
    Term x = Term::variable("X");
    Clause pq{Literal{true, "p", {x}}, Literal{true, "q", {x}}};
    Clause np{Literal{false, "p", {a}}};
    auto r = resolve(pq, 0, np, 0);
    REQUIRE(r);
    CHECK(r->kind == ResKind::resolution);
    CHECK(r->clause == Clause{Literal{true, "q", {a}}});
    CHECK(r->unifier.bindings().size() == 1);
    CHECK_FALSE(resolve(pq, 1, np, 0));

    auto fct = factor(Clause{Literal{true, "p", {x}}, Literal{true, "p", {a}}}, 0, 1);
    REQUIRE(fct);
    CHECK(fct->clause == Clause{Literal{true, "p", {a}}});
    CHECK_FALSE(factor(Clause{Literal{true, "p", {a}}, Literal{false, "p", {a}}}, 0, 1));

    Clause named{Literal{true, "r", {Term::variable("Y", 3), Term::variable("X", 1), Term::variable("Y", 3)}}};
    Term v0 = Term::variable("V0");
    Term v1 = Term::variable("V1");
    CHECK(normalize_variables(named) == Clause{Literal{true, "r", {v0, v1, v0}}});
}

TEST_CASE("saturate F1: four resolution steps")
{
    auto out = saturate(fixtures::f1_matrix());
    REQUIRE(out.status == ResolutionStatus::refuted);
    REQUIRE(out.proof);
    const ResolutionProof &rp = *out.proof;
    CHECK(rp.step_count() == 4);
    CHECK(rp.resolution_steps() == 4);
    CHECK(rp.factoring_steps() == 0);
    CHECK(rp.steps.back().clause.empty());
    auto derived = derived_clauses(rp);
    REQUIRE(derived.size() == 4);
    using fixtures::f;
    using fixtures::n;
    using fixtures::zero;
    CHECK(derived[0] == Clause{n(f(zero()))});
    CHECK(derived[1] == Clause{n(f(f(zero())))});
    CHECK(check_resolution_proof(rp).accepted);
}

TEST_CASE("saturate trivial sets")
{
    auto refuted = saturate(p_not_p());
    REQUIRE(refuted.proof);
    CHECK(refuted.proof->step_count() == 1);
    CHECK(check_resolution_proof(*refuted.proof).accepted);

    auto sat = saturate(Matrix({Clause{atom("p")}, Clause{atom("q")}}));
    CHECK(sat.status == ResolutionStatus::saturated);
    CHECK_FALSE(sat.proof);

    SaturationBudget tiny;
    tiny.max_generated = 50;
    auto nt = saturate(corpus::matrix({"", family_text({Family::nontheorem_chain, 1}), false}), tiny);
    CHECK(nt.status == ResolutionStatus::budget_exhausted);
    CHECK_FALSE(nt.proof);
}

TEST_CASE("minimal resolution proofs")
{
    auto f1 = minimal_resolution_proof(fixtures::f1_matrix(), 8);
    REQUIRE(f1.proof);
    CHECK(f1.proof->step_count() == 4);
    CHECK(check_resolution_proof(*f1.proof).accepted);

    auto pp = minimal_resolution_proof(p_not_p(), 4);
    REQUIRE(pp.proof);
    CHECK(pp.proof->step_count() == 1);

    auto d1 = minimal_resolution_proof(clausify(gen_family({Family::doubling_chain, 1})), 8);
    REQUIRE(d1.proof);
    CHECK(d1.proof->step_count() == 5);
    CHECK(check_resolution_proof(*d1.proof).accepted);

    auto short_bound = minimal_resolution_proof(fixtures::f1_matrix(), 3);
    CHECK(short_bound.status == ResolutionStatus::budget_exhausted);
    CHECK(short_bound.generated < 5'000'000);
    CHECK_FALSE(short_bound.proof);

    auto capped = minimal_resolution_proof(clausify(gen_family({Family::doubling_chain, 2})), 12, 10);
    CHECK(capped.status == ResolutionStatus::budget_exhausted);
}

TEST_CASE("minimal resolution proof is deterministic")
{
    Matrix m = clausify(gen_family({Family::linear_chain, 3}));
    auto a = minimal_resolution_proof(m, 8);
    auto b = minimal_resolution_proof(m, 8);
    REQUIRE(a.proof);
    REQUIRE(b.proof);
    CHECK(derived_clauses(*a.proof) == derived_clauses(*b.proof));
}

TEST_CASE("checker rejects corrupted proofs")
{
    auto out = saturate(fixtures::f1_matrix());
    REQUIRE(out.proof);
    const ResolutionProof good = *out.proof;

    ResolutionProof empty{good.matrix, {}};
    CHECK_FALSE(check_resolution_proof(empty).accepted);

    int target = -1;
    for (std::size_t i = 0; i < good.steps.size() && target < 0; ++i)
        if (good.steps[i].kind == ResKind::resolution && !good.steps[i].unifier.empty())
            target = static_cast<int>(i);
    REQUIRE(target >= 0);
    ResolutionProof bad = good;
    auto &u = bad.steps[static_cast<std::size_t>(target)].unifier;
    Var v = u.bindings().begin()->first;
    u.bind(v, Term::application("junk"));
    auto verdict = check_resolution_proof(bad);
    CHECK_FALSE(verdict.accepted);
    CHECK(verdict.failed_step == target);

    ResolutionProof wrong_clause = good;
    wrong_clause.steps[static_cast<std::size_t>(target)].clause.push_back(atom("extra"));
    CHECK(check_resolution_proof(wrong_clause).failed_step == target);

    ResolutionProof foreign_input = good;
    foreign_input.steps[0].clause = Clause{atom("foreign")};
    CHECK(check_resolution_proof(foreign_input).failed_step == 0);

    ResolutionProof truncated = good;
    truncated.steps.pop_back();
    CHECK_FALSE(check_resolution_proof(truncated).accepted);
}

TEST_CASE("corpus: checker, verdict agreement, minimal <= saturate")
{
    SearchConfig cfg;
    cfg.max_multiplicity = 16;
    for (const auto &e : corpus::entries())
    {
        CAPTURE(e.name);
        Matrix m = corpus::matrix(e);
        auto sat = saturate(m);
        CHECK((sat.status == ResolutionStatus::refuted) == e.theorem);
        if (!sat.proof)
            continue;
        CHECK(check_resolution_proof(*sat.proof).accepted);

        auto cm = prove(m, cfg);
        CHECK(cm.proved());

        bool ground = std::all_of(m.clauses().begin(), m.clauses().end(),
                                  [](const Clause &c) { return is_ground(c); });
        if (ground)
            CHECK(ground_unsat_oracle(m.clauses()));

        if (sat.proof->step_count() <= 6)
        {
            auto min = minimal_resolution_proof(m, sat.proof->step_count());
            REQUIRE(min.proof);
            CHECK(min.proof->step_count() <= sat.proof->step_count());
            CHECK(check_resolution_proof(*min.proof).accepted);
        }
    }
}

TEST_CASE("property: minimal length matches a breadth-first oracle on ground sets")
{
    std::mt19937 rng(99);
    int compared = 0;
    for (int trial = 0; trial < 400 && compared < 40; ++trial)
    {
        int nclauses = 3 + static_cast<int>(rng() % 3);
        std::vector<Clause> clauses;
        for (int c = 0; c < nclauses; ++c)
        {
            int width = 1 + static_cast<int>(rng() % 2);
            Clause cl;
            for (int l = 0; l < width; ++l)
                cl.push_back(atom("p" + std::to_string(rng() % 3), rng() % 2 == 0));
            clauses.push_back(cl);
        }
        if (!ground_unsat_oracle(clauses))
        {
            CHECK(saturate(Matrix(clauses)).status == ResolutionStatus::saturated);
            continue;
        }
        std::vector<GClause> inputs;
        for (const auto &c : clauses)
            inputs.push_back(encode(c));
        int expected = shortest_refutation(inputs, 4);
        if (expected < 0)
            continue;
        CAPTURE(Matrix(clauses).to_string());
        auto min = minimal_resolution_proof(Matrix(clauses), 4);
        REQUIRE(min.proof);
        CHECK(min.proof->step_count() == expected);
        CHECK(check_resolution_proof(*min.proof).accepted);
        ++compared;
    }
    CHECK(compared >= 20);
}
