#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace fcm
{

    /**
     * A first-order variable. The index distinguishes copies of the same
     * clause: index 0 is the variable as written in the matrix, index k >= 1
     * is its renamed variant in copy k.
     */
    struct Var
    {
        std::string name;
        int index = 0;

        auto operator<=>(const Var &) const = default;
        bool operator==(const Var &) const = default;

        std::string to_string() const;
    };

    /**
     * Immutable first-order term with value semantics. Copies share the
     * underlying node. Constants are 0-ary applications.
     */
    class Term
    {
    public:
        static Term variable(Var v);
        static Term variable(std::string name, int index = 0);
        static Term application(std::string symbol, std::vector<Term> args = {});

        bool is_variable() const;
        const Var &var() const;
        const std::string &symbol() const;
        std::span<const Term> args() const;
        std::size_t arity() const { return args().size(); }
        bool is_ground() const;

        std::strong_ordering operator<=>(const Term &other) const;
        bool operator==(const Term &other) const;

        std::string to_string() const;

    private:
        struct Node;
        explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
        std::shared_ptr<const Node> node_;
    };

    struct Literal
    {
        bool positive = true;
        std::string predicate;
        std::vector<Term> args;

        Literal negated() const;
        bool is_ground() const;
        // Same predicate and arity, opposite polarity. Says nothing about the arguments.
        bool complementary_shape(const Literal &other) const;

        auto operator<=>(const Literal &) const = default;
        bool operator==(const Literal &) const = default;

        std::string to_string() const;
    };

    // Literal order is significant: it addresses occurrences in a matrix.
    using Clause = std::vector<Literal>;

    std::string to_string(const Clause &clause);
    bool is_ground(const Clause &clause);

    void collect_variables(const Term &t, std::set<Var> &out);
    void collect_variables(const Literal &l, std::set<Var> &out);
    void collect_variables(const Clause &c, std::set<Var> &out);
    bool occurs_in(const Var &v, const Term &t);

    /**
     * A finite, idempotent mapping from variables to terms. Substitutions
     * produced by unify() never bind a variable to a term containing it.
     */
    class Substitution
    {
    public:
        Substitution() = default;

        const Term *find(const Var &v) const;
        bool binds(const Var &v) const { return find(v) != nullptr; }
        std::size_t size() const { return bindings_.size(); }
        bool empty() const { return bindings_.empty(); }
        const std::map<Var, Term> &bindings() const { return bindings_; }

        // Inserts without normalization. Callers must keep the result idempotent.
        void bind(Var v, Term t);
        // Keeps only bindings whose variable satisfies the predicate.
        template <class Pred>
        Substitution restricted(Pred keep) const
        {
            Substitution out;
            for (const auto &[v, t] : bindings_)
                if (keep(v))
                    out.bindings_.emplace(v, t);
            return out;
        }

        bool is_idempotent() const;

        bool operator==(const Substitution &) const = default;
        std::string to_string() const;

    private:
        std::map<Var, Term> bindings_;
    };

    Term apply_subst(const Substitution &s, const Term &t);
    Literal apply_subst(const Substitution &s, const Literal &l);
    Clause apply_subst(const Substitution &s, const Clause &c);

    enum class UnifyError
    {
        clash,
        occurs_check,
    };

    struct UnifyResult
    {
        std::optional<Substitution> substitution;
        UnifyError error = UnifyError::clash;

        explicit operator bool() const { return substitution.has_value(); }
    };

    /**
     * Most general unifier of two terms extending sigma (which must be
     * idempotent). The result is normalized to idempotent form.
     */
    UnifyResult unify(const Term &a, const Term &b, const Substitution &sigma = {});

    /**
     * Unifies two literals of the same polarity. Complementary matching is
     * done by callers with Literal::negated().
     */
    UnifyResult unify(const Literal &a, const Literal &b, const Substitution &sigma = {});

    /**
     * Renames every variable of the clause to its variant for the given copy
     * (copy >= 1). Variants for distinct copies share no variables.
     */
    Clause fresh_variant(const Clause &clause, int copy);
    Literal fresh_variant(const Literal &literal, int copy);

    /**
     * Mutable triangular binding store with an undo trail. This is the
     * workhorse behind unify() and the tableau engines.
     */
    class BindingStore
    {
    public:
        BindingStore() = default;
        explicit BindingStore(const Substitution &initial);

        Term walk(const Term &t) const;
        Term resolve(const Term &t) const;
        Literal resolve(const Literal &l) const;

        bool unify(const Term &a, const Term &b);
        bool unify(const Literal &a, const Literal &b);
        std::optional<UnifyError> last_error() const { return last_error_; }

        std::size_t mark() const { return trail_.size(); }
        void undo(std::size_t mark);

        // Idempotent substitution over the given variables (unbound ones omitted).
        Substitution to_substitution(const std::set<Var> &domain) const;
        Substitution to_substitution() const;

    private:
        bool unify_impl(const Term &a, const Term &b);
        bool occurs(const Var &v, const Term &t) const;

        std::map<Var, Term> bindings_;
        std::vector<Var> trail_;
        std::optional<UnifyError> last_error_;
    };

} // namespace fcm
