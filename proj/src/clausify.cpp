#include "fcm/matrix.hpp"

#include <map>
#include <set>

namespace fcm
{

    namespace
    {

        // Negation normal form over atoms, negated atoms, &, |, !, ?.
        Formula nnf(const Formula &f, bool positive)
        {
            using K = Formula::Kind;
            switch (f.kind())
            {
            case K::atom:
                return positive ? f : Formula::negation(f);
            case K::negation:
                return nnf(f.body(), !positive);
            case K::conjunction:
            case K::disjunction:
            {
                bool as_and = (f.kind() == K::conjunction) == positive;
                return Formula::binary(as_and ? K::conjunction : K::disjunction, nnf(f.lhs(), positive),
                                       nnf(f.rhs(), positive));
            }
            case K::implication:
                if (positive)
                    return Formula::disjunction(nnf(f.lhs(), false), nnf(f.rhs(), true));
                return Formula::conjunction(nnf(f.lhs(), true), nnf(f.rhs(), false));
            case K::equivalence:
                if (positive)
                    return Formula::conjunction(Formula::disjunction(nnf(f.lhs(), false), nnf(f.rhs(), true)),
                                                Formula::disjunction(nnf(f.rhs(), false), nnf(f.lhs(), true)));
                return Formula::disjunction(Formula::conjunction(nnf(f.lhs(), true), nnf(f.rhs(), false)),
                                            Formula::conjunction(nnf(f.lhs(), false), nnf(f.rhs(), true)));
            case K::forall:
            case K::exists:
            {
                bool universal = (f.kind() == K::forall) == positive;
                return Formula::quantified(universal ? K::forall : K::exists, f.bound(), nnf(f.body(), positive));
            }
            }
            return f;
        }

        void collect_symbols(const Term &t, std::set<std::string> &out)
        {
            if (t.is_variable())
                return;
            out.insert(t.symbol());
            for (const auto &a : t.args())
                collect_symbols(a, out);
        }

        void collect_symbols(const Formula &f, std::set<std::string> &out)
        {
            switch (f.kind())
            {
            case Formula::Kind::atom:
                out.insert(f.atom_literal().predicate);
                for (const auto &a : f.atom_literal().args)
                    collect_symbols(a, out);
                return;
            case Formula::Kind::negation:
            case Formula::Kind::forall:
            case Formula::Kind::exists:
                collect_symbols(f.body(), out);
                return;
            default:
                collect_symbols(f.lhs(), out);
                collect_symbols(f.rhs(), out);
            }
        }

        Term substitute(const Term &t, const std::map<Var, Term> &env)
        {
            if (t.is_variable())
            {
                auto it = env.find(t.var());
                return it == env.end() ? t : it->second;
            }
            if (t.is_ground())
                return t;
            std::vector<Term> args;
            for (const auto &a : t.args())
                args.push_back(substitute(a, env));
            return Term::application(t.symbol(), std::move(args));
        }

        // Quantifier-free matrix form: a tree of &, | over literals.
        struct QfNode
        {
            enum class Kind
            {
                literal,
                conjunction,
                disjunction,
            } kind;
            Literal literal;
            std::vector<QfNode> children;
        };

        class Skolemizer
        {
        public:
            explicit Skolemizer(const Formula &f)
            {
                collect_symbols(f, symbols_);
            }

            QfNode run(const Formula &f, std::map<Var, Term> env, std::vector<Var> scope)
            {
                using K = Formula::Kind;
                switch (f.kind())
                {
                case K::atom:
                case K::negation:
                {
                    const Formula &a = f.kind() == K::atom ? f : f.body();
                    Literal l = a.atom_literal();
                    l.positive = f.kind() == K::atom;
                    for (auto &t : l.args)
                        t = substitute(t, env);
                    return QfNode{QfNode::Kind::literal, std::move(l), {}};
                }
                case K::conjunction:
                case K::disjunction:
                {
                    QfNode n{f.kind() == K::conjunction ? QfNode::Kind::conjunction : QfNode::Kind::disjunction, {}, {}};
                    n.children.push_back(run(f.lhs(), env, scope));
                    n.children.push_back(run(f.rhs(), env, scope));
                    return n;
                }
                case K::forall:
                {
                    Var v = claim(f.bound());
                    env.insert_or_assign(f.bound(), Term::variable(v));
                    scope.push_back(v);
                    return run(f.body(), std::move(env), std::move(scope));
                }
                case K::exists:
                {
                    // Arguments: universals in scope that occur free in the body.
                    std::set<Var> body_free;
                    for (const auto &v : free_variables(f.body()))
                    {
                        if (v == f.bound())
                            continue;
                        auto it = env.find(v);
                        if (it != env.end())
                            collect_variables(it->second, body_free);
                        else
                            body_free.insert(v);
                    }
                    std::vector<Term> args;
                    for (const auto &u : scope)
                        if (body_free.contains(u))
                            args.push_back(Term::variable(u));
                    env.insert_or_assign(f.bound(), Term::application(fresh_skolem(), std::move(args)));
                    return run(f.body(), std::move(env), std::move(scope));
                }
                default:
                    break;
                }
                throw std::logic_error("clausify: formula not in negation normal form");
            }

        private:
            Var claim(const Var &v)
            {
                if (used_.insert(v).second)
                    return v;
                for (int k = 1;; ++k)
                {
                    Var cand{v.name + std::to_string(k), v.index};
                    if (used_.insert(cand).second)
                        return cand;
                }
            }

            std::string fresh_skolem()
            {
                for (;;)
                {
                    std::string name = "sk" + std::to_string(next_skolem_++);
                    if (symbols_.insert(name).second)
                        return name;
                }
            }

            std::set<std::string> symbols_;
            std::set<Var> used_;
            int next_skolem_ = 0;
        };

        std::vector<Clause> distribute(const QfNode &n)
        {
            switch (n.kind)
            {
            case QfNode::Kind::literal:
                return {Clause{n.literal}};
            case QfNode::Kind::conjunction:
            {
                auto out = distribute(n.children[0]);
                auto rhs = distribute(n.children[1]);
                out.insert(out.end(), rhs.begin(), rhs.end());
                return out;
            }
            case QfNode::Kind::disjunction:
            {
                auto lhs = distribute(n.children[0]);
                auto rhs = distribute(n.children[1]);
                std::vector<Clause> out;
                for (const auto &a : lhs)
                    for (const auto &b : rhs)
                    {
                        Clause c = a;
                        c.insert(c.end(), b.begin(), b.end());
                        out.push_back(std::move(c));
                    }
                return out;
            }
            }
            return {};
        }

        void standardize_apart(std::vector<Clause> &clauses)
        {
            std::set<Var> seen;
            for (const auto &c : clauses)
                collect_variables(c, seen);
            std::set<Var> owned;
            for (auto &c : clauses)
            {
                std::set<Var> vars;
                collect_variables(c, vars);
                Substitution ren;
                for (const auto &v : vars)
                {
                    if (owned.insert(v).second)
                        continue;
                    for (int k = 1;; ++k)
                    {
                        Var cand{v.name + std::to_string(k), v.index};
                        if (!seen.contains(cand))
                        {
                            seen.insert(cand);
                            owned.insert(cand);
                            ren.bind(v, Term::variable(cand));
                            break;
                        }
                    }
                }
                if (!ren.empty())
                    c = apply_subst(ren, c);
            }
        }

    } // namespace

    Matrix clausify(const Formula &f)
    {
        Formula closed = f;
        auto free = free_variables(f);
        for (auto it = free.rbegin(); it != free.rend(); ++it)
            closed = Formula::quantified(Formula::Kind::forall, *it, closed);

        Formula normal = nnf(closed, false);
        Skolemizer sk(normal);
        QfNode qf = sk.run(normal, {}, {});
        auto clauses = distribute(qf);
        standardize_apart(clauses);
        return Matrix(std::move(clauses));
    }

} // namespace fcm
