#pragma once

// Brute-force finite-model validity check, independent of the provers.

#include "fcm/formula.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace model_oracle
{

    struct Signature
    {
        std::map<std::string, int> predicates;
        std::map<std::string, int> functions;
    };

    inline void collect(const fcm::Term &t, Signature &sig)
    {
        if (t.is_variable())
            return;
        sig.functions[t.symbol()] = static_cast<int>(t.arity());
        for (const auto &a : t.args())
            collect(a, sig);
    }

    inline void collect(const fcm::Formula &f, Signature &sig)
    {
        using K = fcm::Formula::Kind;
        switch (f.kind())
        {
        case K::atom:
            sig.predicates[f.atom_literal().predicate] = static_cast<int>(f.atom_literal().args.size());
            for (const auto &a : f.atom_literal().args)
                collect(a, sig);
            return;
        case K::negation:
        case K::forall:
        case K::exists:
            collect(f.body(), sig);
            return;
        default:
            collect(f.lhs(), sig);
            collect(f.rhs(), sig);
        }
    }

    // A table over domain tuples, indexed by mixed-radix encoding.
    struct Interp
    {
        int domain = 1;
        std::map<std::string, std::vector<int>> tables;
    };

    inline int tuple_index(const std::vector<int> &args, int domain)
    {
        int idx = 0;
        for (int a : args)
            idx = idx * domain + a;
        return idx;
    }

    inline int eval(const fcm::Term &t, const Interp &I, const std::map<fcm::Var, int> &env)
    {
        if (t.is_variable())
        {
            auto it = env.find(t.var());
            if (it == env.end())
                throw std::logic_error("free variable " + t.var().to_string());
            return it->second;
        }
        std::vector<int> args;
        for (const auto &a : t.args())
            args.push_back(eval(a, I, env));
        return I.tables.at(t.symbol())[static_cast<std::size_t>(tuple_index(args, I.domain))];
    }

    inline bool eval(const fcm::Formula &f, const Interp &I, std::map<fcm::Var, int> &env)
    {
        using K = fcm::Formula::Kind;
        switch (f.kind())
        {
        case K::atom:
        {
            std::vector<int> args;
            for (const auto &a : f.atom_literal().args)
                args.push_back(eval(a, I, env));
            return I.tables.at(f.atom_literal().predicate)[static_cast<std::size_t>(tuple_index(args, I.domain))] != 0;
        }
        case K::negation: return !eval(f.body(), I, env);
        case K::conjunction: return eval(f.lhs(), I, env) && eval(f.rhs(), I, env);
        case K::disjunction: return eval(f.lhs(), I, env) || eval(f.rhs(), I, env);
        case K::implication: return !eval(f.lhs(), I, env) || eval(f.rhs(), I, env);
        case K::equivalence: return eval(f.lhs(), I, env) == eval(f.rhs(), I, env);
        case K::forall:
        case K::exists:
        {
            bool want = f.kind() == K::exists;
            auto saved = env.find(f.bound()) == env.end() ? std::optional<int>() : std::optional<int>(env[f.bound()]);
            bool result = !want;
            for (int d = 0; d < I.domain && result != want; ++d)
            {
                env[f.bound()] = d;
                if (eval(f.body(), I, env) == want)
                    result = want;
            }
            if (saved)
                env[f.bound()] = *saved;
            else
                env.erase(f.bound());
            return result;
        }
        }
        return false;
    }

    /**
     * True iff f holds in every interpretation with domain size 1..max_domain.
     * Free variables are read universally. Throws if the sweep would exceed
     * max_interpretations per domain size.
     */
    inline bool valid_up_to(const fcm::Formula &f, int max_domain, long max_interpretations = 2'000'000)
    {
        Signature sig;
        collect(f, sig);
        fcm::Formula closed = f;
        for (const auto &v : fcm::free_variables(f))
            closed = fcm::Formula::quantified(fcm::Formula::Kind::forall, v, closed);

        for (int d = 1; d <= max_domain; ++d)
        {
            struct Slot
            {
                std::string name;
                int cells;
                int values;
            };
            std::vector<Slot> slots;
            long total = 1;
            auto power = [](int b, int e)
            {
                int r = 1;
                for (int i = 0; i < e; ++i)
                    r *= b;
                return r;
            };
            for (const auto &[p, ar] : sig.predicates)
                slots.push_back({p, power(d, ar), 2});
            for (const auto &[fn, ar] : sig.functions)
                slots.push_back({fn, power(d, ar), d});
            for (const auto &s : slots)
                for (int i = 0; i < s.cells; ++i)
                {
                    total *= s.values;
                    if (total > max_interpretations)
                        throw std::runtime_error("finite-model sweep too large");
                }

            Interp I;
            I.domain = d;
            for (const auto &s : slots)
                I.tables[s.name].assign(static_cast<std::size_t>(s.cells), 0);
            for (long code = 0; code < total; ++code)
            {
                long rest = code;
                for (const auto &s : slots)
                    for (auto &cell : I.tables[s.name])
                    {
                        cell = static_cast<int>(rest % s.values);
                        rest /= s.values;
                    }
                std::map<fcm::Var, int> env;
                if (!eval(closed, I, env))
                    return false;
            }
        }
        return true;
    }

} // namespace model_oracle
