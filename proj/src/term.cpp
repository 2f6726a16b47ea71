#include "fcm/term.hpp"

#include <stdexcept>

namespace fcm
{

    struct Term::Node
    {
        bool is_variable = false;
        Var var;
        std::string symbol;
        std::vector<Term> args;
        bool ground = true;
    };

    std::string Var::to_string() const
    {
        if (index == 0)
            return name;
        return name + "_" + std::to_string(index);
    }

    Term Term::variable(Var v)
    {
        if (v.index < 0)
            throw std::invalid_argument("variable index must be non-negative");
        auto node = std::make_shared<Node>();
        node->is_variable = true;
        node->var = std::move(v);
        node->ground = false;
        return Term(std::move(node));
    }

    Term Term::variable(std::string name, int index)
    {
        return variable(Var{std::move(name), index});
    }

    Term Term::application(std::string symbol, std::vector<Term> args)
    {
        auto node = std::make_shared<Node>();
        node->symbol = std::move(symbol);
        node->ground = true;
        for (const auto &a : args)
            node->ground = node->ground && a.is_ground();
        node->args = std::move(args);
        return Term(std::move(node));
    }

    bool Term::is_variable() const { return node_->is_variable; }
    const Var &Term::var() const { return node_->var; }
    const std::string &Term::symbol() const { return node_->symbol; }
    std::span<const Term> Term::args() const { return node_->args; }
    bool Term::is_ground() const { return node_->ground; }

    std::strong_ordering Term::operator<=>(const Term &other) const
    {
        if (node_ == other.node_)
            return std::strong_ordering::equal;
        // Variables sort before applications.
        if (is_variable() != other.is_variable())
            return is_variable() ? std::strong_ordering::less : std::strong_ordering::greater;
        if (is_variable())
            return var() <=> other.var();
        if (auto c = symbol() <=> other.symbol(); c != 0)
            return c;
        if (auto c = arity() <=> other.arity(); c != 0)
            return c;
        for (std::size_t i = 0; i < arity(); ++i)
            if (auto c = args()[i] <=> other.args()[i]; c != 0)
                return c;
        return std::strong_ordering::equal;
    }

    bool Term::operator==(const Term &other) const
    {
        return (*this <=> other) == std::strong_ordering::equal;
    }

    std::string Term::to_string() const
    {
        if (is_variable())
            return var().to_string();
        if (args().empty())
            return symbol();
        std::string out = symbol() + "(";
        for (std::size_t i = 0; i < arity(); ++i)
        {
            if (i)
                out += ",";
            out += args()[i].to_string();
        }
        return out + ")";
    }

    Literal Literal::negated() const
    {
        Literal l = *this;
        l.positive = !positive;
        return l;
    }

    bool Literal::is_ground() const
    {
        for (const auto &a : args)
            if (!a.is_ground())
                return false;
        return true;
    }

    bool Literal::complementary_shape(const Literal &other) const
    {
        return positive != other.positive && predicate == other.predicate &&
               args.size() == other.args.size();
    }

    std::string Literal::to_string() const
    {
        std::string out = positive ? "" : "~";
        out += predicate;
        if (!args.empty())
        {
            out += "(";
            for (std::size_t i = 0; i < args.size(); ++i)
            {
                if (i)
                    out += ",";
                out += args[i].to_string();
            }
            out += ")";
        }
        return out;
    }

    std::string to_string(const Clause &clause)
    {
        std::string out = "{";
        for (std::size_t i = 0; i < clause.size(); ++i)
        {
            if (i)
                out += ", ";
            out += clause[i].to_string();
        }
        return out + "}";
    }

    bool is_ground(const Clause &clause)
    {
        for (const auto &l : clause)
            if (!l.is_ground())
                return false;
        return true;
    }

    void collect_variables(const Term &t, std::set<Var> &out)
    {
        if (t.is_variable())
        {
            out.insert(t.var());
            return;
        }
        for (const auto &a : t.args())
            collect_variables(a, out);
    }

    void collect_variables(const Literal &l, std::set<Var> &out)
    {
        for (const auto &a : l.args)
            collect_variables(a, out);
    }

    void collect_variables(const Clause &c, std::set<Var> &out)
    {
        for (const auto &l : c)
            collect_variables(l, out);
    }

    bool occurs_in(const Var &v, const Term &t)
    {
        if (t.is_variable())
            return t.var() == v;
        if (t.is_ground())
            return false;
        for (const auto &a : t.args())
            if (occurs_in(v, a))
                return true;
        return false;
    }

    // ---------- Substitution ----------

    const Term *Substitution::find(const Var &v) const
    {
        auto it = bindings_.find(v);
        return it == bindings_.end() ? nullptr : &it->second;
    }

    void Substitution::bind(Var v, Term t)
    {
        bindings_.insert_or_assign(std::move(v), std::move(t));
    }

    bool Substitution::is_idempotent() const
    {
        for (const auto &[v, t] : bindings_)
        {
            std::set<Var> vars;
            collect_variables(t, vars);
            for (const auto &w : vars)
                if (binds(w))
                    return false;
        }
        return true;
    }

    std::string Substitution::to_string() const
    {
        std::string out = "{";
        bool first = true;
        for (const auto &[v, t] : bindings_)
        {
            if (!first)
                out += ", ";
            first = false;
            out += v.to_string() + "\\" + t.to_string();
        }
        return out + "}";
    }

    Term apply_subst(const Substitution &s, const Term &t)
    {
        if (s.empty() || t.is_ground())
            return t;
        if (t.is_variable())
        {
            const Term *b = s.find(t.var());
            return b ? *b : t;
        }
        std::vector<Term> args;
        args.reserve(t.arity());
        for (const auto &a : t.args())
            args.push_back(apply_subst(s, a));
        return Term::application(t.symbol(), std::move(args));
    }

    Literal apply_subst(const Substitution &s, const Literal &l)
    {
        Literal out{l.positive, l.predicate, {}};
        out.args.reserve(l.args.size());
        for (const auto &a : l.args)
            out.args.push_back(apply_subst(s, a));
        return out;
    }

    Clause apply_subst(const Substitution &s, const Clause &c)
    {
        Clause out;
        out.reserve(c.size());
        for (const auto &l : c)
            out.push_back(apply_subst(s, l));
        return out;
    }

    // ---------- BindingStore ----------

    BindingStore::BindingStore(const Substitution &initial)
    {
        for (const auto &[v, t] : initial.bindings())
        {
            bindings_.emplace(v, t);
            trail_.push_back(v);
        }
    }

    Term BindingStore::walk(const Term &t) const
    {
        Term cur = t;
        while (cur.is_variable())
        {
            auto it = bindings_.find(cur.var());
            if (it == bindings_.end())
                break;
            cur = it->second;
        }
        return cur;
    }

    Term BindingStore::resolve(const Term &t) const
    {
        if (t.is_ground())
            return t;
        Term w = walk(t);
        if (w.is_variable() || w.is_ground())
            return w;
        std::vector<Term> args;
        args.reserve(w.arity());
        for (const auto &a : w.args())
            args.push_back(resolve(a));
        return Term::application(w.symbol(), std::move(args));
    }

    Literal BindingStore::resolve(const Literal &l) const
    {
        Literal out{l.positive, l.predicate, {}};
        out.args.reserve(l.args.size());
        for (const auto &a : l.args)
            out.args.push_back(resolve(a));
        return out;
    }

    bool BindingStore::occurs(const Var &v, const Term &t) const
    {
        Term w = walk(t);
        if (w.is_variable())
            return w.var() == v;
        if (w.is_ground())
            return false;
        for (const auto &a : w.args())
            if (occurs(v, a))
                return true;
        return false;
    }

    bool BindingStore::unify_impl(const Term &a, const Term &b)
    {
        Term x = walk(a);
        Term y = walk(b);
        if (x.is_variable() && y.is_variable() && x.var() == y.var())
            return true;
        if (x.is_variable() || y.is_variable())
        {
            const Term &var_side = x.is_variable() ? x : y;
            const Term &other = x.is_variable() ? y : x;
            if (occurs(var_side.var(), other))
            {
                last_error_ = UnifyError::occurs_check;
                return false;
            }
            bindings_.emplace(var_side.var(), other);
            trail_.push_back(var_side.var());
            return true;
        }
        if (x.symbol() != y.symbol() || x.arity() != y.arity())
        {
            last_error_ = UnifyError::clash;
            return false;
        }
        for (std::size_t i = 0; i < x.arity(); ++i)
            if (!unify_impl(x.args()[i], y.args()[i]))
                return false;
        return true;
    }

    bool BindingStore::unify(const Term &a, const Term &b)
    {
        last_error_.reset();
        std::size_t m = mark();
        if (unify_impl(a, b))
            return true;
        undo(m);
        return false;
    }

    bool BindingStore::unify(const Literal &a, const Literal &b)
    {
        last_error_.reset();
        if (a.positive != b.positive || a.predicate != b.predicate || a.args.size() != b.args.size())
        {
            last_error_ = UnifyError::clash;
            return false;
        }
        std::size_t m = mark();
        for (std::size_t i = 0; i < a.args.size(); ++i)
        {
            if (!unify_impl(a.args[i], b.args[i]))
            {
                undo(m);
                return false;
            }
        }
        return true;
    }

    void BindingStore::undo(std::size_t m)
    {
        while (trail_.size() > m)
        {
            bindings_.erase(trail_.back());
            trail_.pop_back();
        }
    }

    Substitution BindingStore::to_substitution(const std::set<Var> &domain) const
    {
        Substitution out;
        for (const auto &v : domain)
        {
            Term r = resolve(Term::variable(v));
            if (!(r.is_variable() && r.var() == v))
                out.bind(v, r);
        }
        return out;
    }

    Substitution BindingStore::to_substitution() const
    {
        std::set<Var> domain;
        for (const auto &[v, t] : bindings_)
            domain.insert(v);
        return to_substitution(domain);
    }

    UnifyResult unify(const Term &a, const Term &b, const Substitution &sigma)
    {
        BindingStore store(sigma);
        if (!store.unify(a, b))
            return {std::nullopt, *store.last_error()};
        return {store.to_substitution(), UnifyError::clash};
    }

    UnifyResult unify(const Literal &a, const Literal &b, const Substitution &sigma)
    {
        BindingStore store(sigma);
        if (!store.unify(a, b))
            return {std::nullopt, *store.last_error()};
        return {store.to_substitution(), UnifyError::clash};
    }

    namespace
    {
        Term variant_term(const Term &t, int copy)
        {
            if (t.is_ground())
                return t;
            if (t.is_variable())
                return Term::variable(t.var().name, copy);
            std::vector<Term> args;
            args.reserve(t.arity());
            for (const auto &a : t.args())
                args.push_back(variant_term(a, copy));
            return Term::application(t.symbol(), std::move(args));
        }
    } // namespace

    Literal fresh_variant(const Literal &literal, int copy)
    {
        if (copy < 1)
            throw std::invalid_argument("copy index must be >= 1");
        Literal out{literal.positive, literal.predicate, {}};
        out.args.reserve(literal.args.size());
        for (const auto &a : literal.args)
            out.args.push_back(variant_term(a, copy));
        return out;
    }

    Clause fresh_variant(const Clause &clause, int copy)
    {
        Clause out;
        out.reserve(clause.size());
        for (const auto &l : clause)
            out.push_back(fresh_variant(l, copy));
        return out;
    }

} // namespace fcm
