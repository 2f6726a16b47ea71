#pragma once

#include "fcm/term.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fcm
{

    class Formula
    {
    public:
        enum class Kind
        {
            atom,
            negation,
            conjunction,
            disjunction,
            implication,
            equivalence,
            forall,
            exists,
        };

        static Formula atom(Literal positive_atom);
        static Formula negation(Formula f);
        static Formula binary(Kind kind, Formula lhs, Formula rhs);
        static Formula conjunction(Formula lhs, Formula rhs) { return binary(Kind::conjunction, std::move(lhs), std::move(rhs)); }
        static Formula disjunction(Formula lhs, Formula rhs) { return binary(Kind::disjunction, std::move(lhs), std::move(rhs)); }
        static Formula implication(Formula lhs, Formula rhs) { return binary(Kind::implication, std::move(lhs), std::move(rhs)); }
        static Formula equivalence(Formula lhs, Formula rhs) { return binary(Kind::equivalence, std::move(lhs), std::move(rhs)); }
        static Formula quantified(Kind kind, Var bound, Formula body);

        Kind kind() const;
        // Only for Kind::atom; the stored literal is always positive.
        const Literal &atom_literal() const;
        const Formula &lhs() const;
        const Formula &rhs() const;
        // The single child of a negation or quantifier.
        const Formula &body() const;
        const Var &bound() const;

        bool is_binary() const;
        bool is_quantifier() const { return kind() == Kind::forall || kind() == Kind::exists; }

        bool operator==(const Formula &other) const;

        // Emits the input grammar, so parse_formula(f.to_string()) == f.
        std::string to_string() const;

    private:
        struct Node;
        explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
        std::shared_ptr<const Node> node_;
    };

    std::set<Var> free_variables(const Formula &f);

    class ParseError : public std::runtime_error
    {
    public:
        ParseError(const std::string &message, int line, int column);
        int line() const { return line_; }
        int column() const { return column_; }

    private:
        int line_;
        int column_;
    };

    /**
     * Parses a formula in the TPTP-FOF-style grammar:
     *
     *   ~ & | => <=>   ![X,Y]:  ?[X]:   lowercase symbols, uppercase variables
     *
     * Precedence from loosest: <=>, => (right associative), |, &, then the
     * unary ~ and quantifiers. The input may also be a sequence of
     * `fof(name, role, formula).` statements; axioms are conjoined and
     * implied the conjunction of conjectures.
     *
     * Bound variables are renamed apart so every quantifier binds a
     * distinct variable.
     */
    Formula parse_formula(std::string_view text);

    // Single term / literal in the same lexical syntax. Variables may carry
    // a copy index written as NAME_k.
    Term parse_term(std::string_view text);
    Literal parse_literal(std::string_view text);

} // namespace fcm
