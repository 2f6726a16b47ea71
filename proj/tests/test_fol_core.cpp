#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

#include "fcm/formula.hpp"
#include "fcm/term.hpp"

#include <random>

using namespace fcm;

namespace
{
    Term var(const char *n, int k = 0) { return Term::variable(n, k); }
    Term app(const char *s, std::vector<Term> a = {}) { return Term::application(s, std::move(a)); }

    // Random terms over {X,Y,Z}, {a,b}, f/1, g/2.
    Term random_term(std::mt19937 &rng, int depth)
    {
        std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 4);
        switch (pick(rng))
        {
        case 0: return var("X");
        case 1: return var("Y");
        case 2: return var("Z");
        case 3: return app("a");
        case 4: return app("b");
        case 5: return app("f", {random_term(rng, depth - 1)});
        default: return app("g", {random_term(rng, depth - 1), random_term(rng, depth - 1)});
        }
    }

    // Every term of depth <= 1 over {a,b,U}, f/1, g/2.
    std::vector<Term> shallow_terms()
    {
        std::vector<Term> base{app("a"), app("b"), var("U")};
        std::vector<Term> out = base;
        for (const auto &t : base)
            out.push_back(app("f", {t}));
        for (const auto &s : base)
            for (const auto &t : base)
                out.push_back(app("g", {s, t}));
        return out;
    }

    Formula random_formula(std::mt19937 &rng, int depth, std::vector<std::string> &scope, int &counter)
    {
        std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 1);
        auto arg = [&]() -> Term
        {
            if (!scope.empty() && rng() % 2)
                return var(scope[rng() % scope.size()].c_str());
            return rng() % 2 ? app("c") : app("h", {app("c")});
        };
        switch (pick(rng))
        {
        case 0: return Formula::atom(Literal{true, "p", {}});
        case 1: return Formula::atom(Literal{true, "q", {arg(), arg()}});
        case 2: return Formula::negation(random_formula(rng, depth - 1, scope, counter));
        case 3:
        case 4:
        case 5:
        case 6:
        {
            static const Formula::Kind kinds[] = {Formula::Kind::conjunction, Formula::Kind::disjunction,
                                                  Formula::Kind::implication, Formula::Kind::equivalence};
            auto kind = kinds[pick(rng) % 4];
            Formula l = random_formula(rng, depth - 1, scope, counter);
            Formula r = random_formula(rng, depth - 1, scope, counter);
            return Formula::binary(kind, l, r);
        }
        default:
        {
            std::string name = "V" + std::to_string(counter++);
            scope.push_back(name);
            Formula body = random_formula(rng, depth - 1, scope, counter);
            scope.pop_back();
            auto kind = rng() % 2 ? Formula::Kind::forall : Formula::Kind::exists;
            return Formula::quantified(kind, Var{name, 0}, body);
        }
        }
    }
} // namespace

TEST_CASE("parse F1")
{
    Formula f = parse_formula(fixtures::f1_text);
    REQUIRE(f.kind() == Formula::Kind::implication);
    const Formula &lhs = f.lhs();
    REQUIRE(lhs.kind() == Formula::Kind::conjunction);
    CHECK(lhs.lhs().atom_literal().to_string() == "n(zero)");
    REQUIRE(lhs.rhs().kind() == Formula::Kind::forall);
    CHECK(lhs.rhs().body().kind() == Formula::Kind::implication);
    CHECK(f.rhs().kind() == Formula::Kind::conjunction);
    CHECK(f.rhs().lhs().atom_literal().to_string() == "n(f(f(zero)))");
    CHECK(f.rhs().rhs().atom_literal().to_string() == "n(f(zero))");
    CHECK(free_variables(f).empty());
}

TEST_CASE("parse identity implication")
{
    Formula f = parse_formula("p => p");
    REQUIRE(f.kind() == Formula::Kind::implication);
    CHECK(f.lhs() == f.rhs());
}

TEST_CASE("parse errors carry positions")
{
    try
    {
        parse_formula("p(X");
        FAIL("expected a parse error");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 1);
        CHECK(e.column() == 4);
    }
    CHECK_THROWS_AS(parse_formula("p(a) & p(a,b)"), ParseError);
    CHECK_THROWS_AS(parse_formula("p(f(a)) & p(f(a,b))"), ParseError);
    CHECK_THROWS_AS(parse_formula("p &\n  & q"), ParseError);
    try
    {
        parse_formula("p &\n  & q");
    }
    catch (const ParseError &e)
    {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("precedence and associativity")
{
    Formula f = parse_formula("a => b => c");
    REQUIRE(f.kind() == Formula::Kind::implication);
    CHECK(f.rhs().kind() == Formula::Kind::implication);
    Formula g = parse_formula("a | b & c <=> ~d");
    REQUIRE(g.kind() == Formula::Kind::equivalence);
    CHECK(g.lhs().kind() == Formula::Kind::disjunction);
    CHECK(g.lhs().rhs().kind() == Formula::Kind::conjunction);
    CHECK(g.rhs().kind() == Formula::Kind::negation);
    Formula q = parse_formula("![X,Y]: p(X,Y)");
    REQUIRE(q.kind() == Formula::Kind::forall);
    CHECK(q.body().kind() == Formula::Kind::forall);
}

TEST_CASE("bound variables are renamed apart")
{
    Formula f = parse_formula("(![X]: p(X)) & (?[X]: p(X))");
    CHECK(f.lhs().bound() != f.rhs().bound());
    CHECK(parse_formula(f.to_string()) == f);
}

TEST_CASE("fof statements")
{
    Formula f = parse_formula("% comment\nfof(a1, axiom, p).\nfof(a2, axiom, p => q).\nfof(c, conjecture, q).\n");
    REQUIRE(f.kind() == Formula::Kind::implication);
    CHECK(f.lhs().kind() == Formula::Kind::conjunction);
    CHECK(f.rhs().atom_literal().predicate == "q");
}

TEST_CASE("unify examples")
{
    auto r1 = unify(fixtures::n(fixtures::x(1)), fixtures::n(fixtures::zero()));
    REQUIRE(r1);
    CHECK(r1.substitution->to_string() == "{X_1\\zero}");

    auto r2 = unify(fixtures::n(var("X")), fixtures::n(fixtures::f(var("X"))));
    CHECK_FALSE(r2);
    CHECK(r2.error == UnifyError::occurs_check);

    Literal a{true, "p", {var("x"), app("g", {var("y")})}};
    Literal b{true, "p", {app("g", {var("z")}), var("w")}};
    auto r3 = unify(a, b);
    REQUIRE(r3);
    Substitution expected;
    expected.bind(Var{"w", 0}, app("g", {var("y")}));
    expected.bind(Var{"x", 0}, app("g", {var("z")}));
    CHECK(*r3.substitution == expected);

    auto r4 = unify(app("f", {app("a")}), app("g", {app("a"), app("a")}));
    CHECK_FALSE(r4);
    CHECK(r4.error == UnifyError::clash);

    CHECK_FALSE(unify(fixtures::n(app("a")), fixtures::n(app("a"), false)));
}

TEST_CASE("unify extends the given substitution")
{
    Substitution sigma;
    sigma.bind(Var{"X", 0}, app("a"));
    auto r = unify(var("Y"), var("X"), sigma);
    REQUIRE(r);
    CHECK(r.substitution->find(Var{"Y", 0})->to_string() == "a");
    CHECK(r.substitution->find(Var{"X", 0})->to_string() == "a");
    CHECK(r.substitution->is_idempotent());
    CHECK_FALSE(unify(var("X"), app("b"), sigma));
}

TEST_CASE("apply_subst examples")
{
    Substitution s;
    s.bind(fixtures::x(1).var(), fixtures::zero());
    CHECK(apply_subst(s, fixtures::n(fixtures::f(fixtures::x(1)))).to_string() == "n(f(zero))");
    Term t = app("g", {var("X"), app("f", {var("Y")})});
    CHECK(apply_subst(Substitution{}, t) == t);
    Substitution s2;
    s2.bind(Var{"x", 0}, app("f", {var("y")}));
    CHECK(apply_subst(s2, Literal{true, "P", {var("x"), var("x")}}).to_string() == "P(f(y),f(y))");
}

TEST_CASE("fresh_variant examples")
{
    Clause c{fixtures::n(var("X"), false), fixtures::n(fixtures::f(var("X")))};
    CHECK(to_string(fresh_variant(c, 3)) == "{~n(X_3), n(f(X_3))}");
    Clause g{fixtures::n(fixtures::zero())};
    CHECK(fresh_variant(g, 7) == g);
    CHECK_THROWS(fresh_variant(c, 0));

    Clause c1 = fresh_variant(c, 1), c2 = fresh_variant(c, 2);
    std::set<Var> v1, v2;
    collect_variables(c1, v1);
    collect_variables(c2, v2);
    for (const auto &v : v1)
        CHECK(v2.count(v) == 0);
    auto r = unify(c1[0], c2[0]);
    REQUIRE(r);
    CHECK(r.substitution->size() == 1);
    CHECK(apply_subst(*r.substitution, c1[0]) == apply_subst(*r.substitution, c2[0]));
}

TEST_CASE("variable copy syntax")
{
    CHECK(parse_term("X_3") == fixtures::x(3));
    CHECK(parse_literal("~n(f(X_12))").to_string() == "~n(f(X_12))");
}

TEST_CASE("property: unifiers equalize, are idempotent and most general")
{
    std::mt19937 rng(20240611);
    const auto pool = shallow_terms();
    const std::vector<Var> vars{{"X", 0}, {"Y", 0}, {"Z", 0}};
    int unifiable = 0;
    for (int trial = 0; trial < 200; ++trial)
    {
        Literal a{true, "p", {random_term(rng, 2), random_term(rng, 2)}};
        Literal b{true, "p", {random_term(rng, 2), random_term(rng, 2)}};
        auto r = unify(a, b);
        if (r)
        {
            ++unifiable;
            const Substitution &m = *r.substitution;
            CHECK(apply_subst(m, a) == apply_subst(m, b));
            CHECK(m.is_idempotent());
            CHECK(apply_subst(m, apply_subst(m, a)) == apply_subst(m, a));
        }
        // Every unifier in the enumerated space factors through the mgu.
        for (const auto &tx : pool)
            for (const auto &ty : pool)
                for (const auto &tz : pool)
                {
                    Substitution theta;
                    theta.bind(vars[0], tx);
                    theta.bind(vars[1], ty);
                    theta.bind(vars[2], tz);
                    if (apply_subst(theta, a) != apply_subst(theta, b))
                        continue;
                    REQUIRE(r);
                    for (const auto &v : vars)
                    {
                        Term direct = apply_subst(theta, Term::variable(v));
                        Term through = apply_subst(theta, apply_subst(*r.substitution, Term::variable(v)));
                        CHECK(direct == through);
                    }
                }
    }
    CHECK(unifiable > 10);
}

TEST_CASE("property: parse after print is the identity")
{
    std::mt19937 rng(77);
    for (int i = 0; i < 300; ++i)
    {
        std::vector<std::string> scope;
        int counter = 0;
        Formula f = random_formula(rng, 5, scope, counter);
        std::string text = f.to_string();
        Formula g = parse_formula(text);
        CHECK_MESSAGE(g == f, text);
        CHECK(g.to_string() == text);
    }
}
