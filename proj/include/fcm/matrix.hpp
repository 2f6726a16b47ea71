#pragma once

#include "fcm/formula.hpp"
#include "fcm/term.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcm
{

    /// Position of a literal in a matrix: clause index and literal index within it.
    struct LiteralOcc
    {
        int clause = 0;
        int literal = 0;

        auto operator<=>(const LiteralOcc &) const = default;
    };

    class Matrix
    {
    public:
        Matrix() = default;
        // Clauses must be variable-disjoint and use copy index 0 only.
        explicit Matrix(std::vector<Clause> clauses);

        const std::vector<Clause> &clauses() const { return clauses_; }
        const Clause &clause(int c) const { return clauses_.at(static_cast<std::size_t>(c)); }
        const Literal &literal(LiteralOcc o) const { return clause(o.clause).at(static_cast<std::size_t>(o.literal)); }
        int size() const { return static_cast<int>(clauses_.size()); }
        bool empty() const { return clauses_.empty(); }

        // Flat left-to-right numbering of occurrences, 0-based.
        int flat_index(LiteralOcc o) const;
        LiteralOcc occurrence(int flat) const;
        int occurrence_count() const { return static_cast<int>(flat_to_occ_.size()); }

        bool operator==(const Matrix &other) const { return clauses_ == other.clauses_; }
        std::string to_string() const;

    private:
        std::vector<Clause> clauses_;
        std::vector<int> clause_offset_;
        std::vector<LiteralOcc> flat_to_occ_;
    };

    /// Per-clause copy counts; entry c is the multiplicity of clause c.
    using Multiplicity = std::vector<int>;

    int total_multiplicity(const Multiplicity &mu);
    // All ones, the default multiplicity.
    Multiplicity unit_multiplicity(const Matrix &m);

    /// A literal occurrence in a specific clause copy.
    struct OccCopy
    {
        int clause = 0;
        int literal = 0;
        int copy = 1;

        LiteralOcc occ() const { return {clause, literal}; }
        auto operator<=>(const OccCopy &) const = default;
    };

    /// Unordered pair of occurrence copies, stored with first < second.
    struct Connection
    {
        OccCopy first;
        OccCopy second;

        static Connection make(OccCopy a, OccCopy b);
        auto operator<=>(const Connection &) const = default;
    };

    class AmplifiedMatrix
    {
    public:
        AmplifiedMatrix(Matrix matrix, Multiplicity mu);

        const Matrix &matrix() const { return matrix_; }
        const Multiplicity &multiplicity() const { return mu_; }
        // Fresh variant of clause c for copy k (1-based).
        const Clause &copy(int clause, int k) const;
        const Literal &literal(OccCopy o) const;
        int copy_count() const;
        bool contains(OccCopy o) const;
        std::set<Var> variables() const;

    private:
        Matrix matrix_;
        Multiplicity mu_;
        std::vector<std::vector<Clause>> copies_;
    };

    AmplifiedMatrix amplify(const Matrix &m, const Multiplicity &mu);

    /// One literal index per clause copy: choice[c][k-1].
    struct Path
    {
        std::vector<std::vector<int>> choice;

        bool contains(OccCopy o) const;
        bool operator==(const Path &) const = default;
        std::string to_string() const;
    };

    class TooManyPaths : public std::runtime_error
    {
    public:
        explicit TooManyPaths(std::uint64_t limit);
    };

    inline constexpr std::uint64_t default_path_cap = std::uint64_t{1} << 20;

    // Number of paths, saturating at UINT64_MAX.
    std::uint64_t path_count(const AmplifiedMatrix &am);

    /**
     * Streams every path of an amplified matrix exactly once, in odometer
     * order (last clause copy varies fastest). Construction throws
     * TooManyPaths when the path count exceeds the cap.
     */
    class PathStream
    {
    public:
        PathStream(const AmplifiedMatrix &am, std::uint64_t cap = default_path_cap);
        std::optional<Path> next();

    private:
        const AmplifiedMatrix &am_;
        Path current_;
        bool done_ = false;
        bool started_ = false;
    };

    PathStream enumerate_paths(const AmplifiedMatrix &am, std::uint64_t cap = default_path_cap);

    enum class DagRule
    {
        extension,
        reduction,
        factorization,
    };

    /**
     * Derivation structure of a connection proof. Each node is a solved
     * subgoal; `partner` is the other end of the connection that closed it.
     * Factorization nodes re-enter an already solved clause copy and point
     * at that copy's existing subgoal nodes instead of re-proving them.
     */
    struct DagNode
    {
        OccCopy goal;
        DagRule rule = DagRule::extension;
        OccCopy partner;
        std::vector<int> children;

        bool operator==(const DagNode &) const = default;
    };

    struct DerivationDag
    {
        int start_clause = 0;
        int start_copy = 1;
        std::vector<int> roots;
        std::vector<DagNode> nodes;

        bool operator==(const DerivationDag &) const = default;
    };

    struct ConnectionProof
    {
        Matrix matrix;
        Multiplicity multiplicity;
        std::vector<Connection> connections; // sorted, no duplicates
        Substitution substitution;
        std::optional<DerivationDag> dag;

        // Sorts and deduplicates connections.
        void normalize();
        int connection_count() const { return static_cast<int>(connections.size()); }
    };

    struct ProofVerdict
    {
        enum class Status
        {
            accepted,
            rejected,
            indeterminate,
        };
        Status status = Status::rejected;
        std::string reason;
        std::optional<Path> open_path;

        bool accepted() const { return status == Status::accepted; }
    };

    /**
     * Clausal form of the negation of f: universal closure, NNF,
     * Skolemization, distribution. Clauses and literals keep left-to-right
     * order; variables are standardized apart between clauses.
     */
    Matrix clausify(const Formula &f);

    /**
     * Gold-standard checker. Accepts iff every connection joins
     * complementary literals whose instances under the substitution are
     * equal, and every path through the amplified matrix contains both ends
     * of some connection. Path search prunes covered prefixes; `cap` bounds
     * the number of search nodes and yields an indeterminate verdict when
     * exceeded.
     */
    ProofVerdict check_proof(const ConnectionProof &p, std::uint64_t cap = default_path_cap);

    /**
     * Finds a path through `am` containing no connection of the set, or
     * nullopt when the set is spanning. Connection validity is not examined.
     * Throws TooManyPaths when the search exceeds `cap` nodes.
     */
    std::optional<Path> find_open_path(const AmplifiedMatrix &am, const std::vector<Connection> &connections,
                                       std::uint64_t cap = default_path_cap);

    class AtomBudgetExceeded : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// True iff no truth assignment satisfies every clause. Ground input, at most 20 atoms.
    bool ground_unsat_oracle(const std::vector<Clause> &clauses, int max_atoms = 20);

    // Instances of every clause copy under the proof substitution, with
    // remaining variables mapped to one fresh constant.
    std::vector<Clause> ground_instances(const ConnectionProof &p);

} // namespace fcm
