#include "fcm/formula.hpp"

#include <stdexcept>

namespace fcm
{

    struct Formula::Node
    {
        Kind kind = Kind::atom;
        Literal atom;
        std::vector<Formula> children;
        Var bound;
    };

    Formula Formula::atom(Literal positive_atom)
    {
        auto n = std::make_shared<Node>();
        n->kind = Kind::atom;
        positive_atom.positive = true;
        n->atom = std::move(positive_atom);
        return Formula(std::move(n));
    }

    Formula Formula::negation(Formula f)
    {
        auto n = std::make_shared<Node>();
        n->kind = Kind::negation;
        n->children.push_back(std::move(f));
        return Formula(std::move(n));
    }

    Formula Formula::binary(Kind kind, Formula lhs, Formula rhs)
    {
        if (kind == Kind::atom || kind == Kind::negation || kind == Kind::forall || kind == Kind::exists)
            throw std::invalid_argument("not a binary connective");
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->children.push_back(std::move(lhs));
        n->children.push_back(std::move(rhs));
        return Formula(std::move(n));
    }

    Formula Formula::quantified(Kind kind, Var bound, Formula body)
    {
        if (kind != Kind::forall && kind != Kind::exists)
            throw std::invalid_argument("not a quantifier");
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->bound = std::move(bound);
        n->children.push_back(std::move(body));
        return Formula(std::move(n));
    }

    Formula::Kind Formula::kind() const { return node_->kind; }
    const Literal &Formula::atom_literal() const { return node_->atom; }
    const Formula &Formula::lhs() const { return node_->children.at(0); }
    const Formula &Formula::rhs() const { return node_->children.at(1); }
    const Formula &Formula::body() const { return node_->children.at(0); }
    const Var &Formula::bound() const { return node_->bound; }

    bool Formula::is_binary() const
    {
        switch (kind())
        {
        case Kind::conjunction:
        case Kind::disjunction:
        case Kind::implication:
        case Kind::equivalence:
            return true;
        default:
            return false;
        }
    }

    bool Formula::operator==(const Formula &other) const
    {
        if (node_ == other.node_)
            return true;
        if (kind() != other.kind())
            return false;
        if (kind() == Kind::atom)
            return atom_literal() == other.atom_literal();
        if (is_quantifier() && bound() != other.bound())
            return false;
        return node_->children == other.node_->children;
    }

    namespace
    {
        const char *op_text(Formula::Kind k)
        {
            switch (k)
            {
            case Formula::Kind::conjunction:
                return " & ";
            case Formula::Kind::disjunction:
                return " | ";
            case Formula::Kind::implication:
                return " => ";
            case Formula::Kind::equivalence:
                return " <=> ";
            default:
                return "?";
            }
        }

        // Binary children are always parenthesized; unary chains are not.
        std::string print_operand(const Formula &f)
        {
            if (f.is_binary())
                return "(" + f.to_string() + ")";
            return f.to_string();
        }
    } // namespace

    std::string Formula::to_string() const
    {
        switch (kind())
        {
        case Kind::atom:
            return atom_literal().to_string();
        case Kind::negation:
            return "~" + print_operand(body());
        case Kind::forall:
        case Kind::exists:
            return std::string(kind() == Kind::forall ? "!" : "?") + "[" + bound().to_string() +
                   "]: " + print_operand(body());
        default:
            return print_operand(lhs()) + op_text(kind()) + print_operand(rhs());
        }
    }

    namespace
    {
        void free_vars(const Formula &f, std::set<Var> &bound, std::set<Var> &out)
        {
            switch (f.kind())
            {
            case Formula::Kind::atom:
            {
                std::set<Var> vs;
                collect_variables(f.atom_literal(), vs);
                for (const auto &v : vs)
                    if (!bound.contains(v))
                        out.insert(v);
                return;
            }
            case Formula::Kind::negation:
                free_vars(f.body(), bound, out);
                return;
            case Formula::Kind::forall:
            case Formula::Kind::exists:
            {
                bool fresh = bound.insert(f.bound()).second;
                free_vars(f.body(), bound, out);
                if (fresh)
                    bound.erase(f.bound());
                return;
            }
            default:
                free_vars(f.lhs(), bound, out);
                free_vars(f.rhs(), bound, out);
            }
        }
    } // namespace

    std::set<Var> free_variables(const Formula &f)
    {
        std::set<Var> bound, out;
        free_vars(f, bound, out);
        return out;
    }

} // namespace fcm
