#pragma once

#include "fcm/matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace fcm
{

    struct SearchConfig
    {
        bool factorization = false;
        // Copies per clause. Ground unit clauses always use a single copy.
        int max_multiplicity = 8;
        // Longest active path.
        int max_depth = 64;
        // Inference attempts before giving up.
        std::uint64_t node_budget = 5'000'000;
        std::uint64_t path_cap = default_path_cap;
        // Bound on total multiplicity; 0 means the sum of the per-clause bounds.
        int max_total_multiplicity = 0;
    };

    enum class SearchStatus
    {
        proved,
        // The node budget ran out.
        budget_exhausted,
        // Every round up to the multiplicity bound failed, but some were cut by a bound.
        bounds_exhausted,
        // A round finished without hitting any bound: no proof exists at any size.
        space_exhausted,
    };

    std::string to_string(SearchStatus s);

    struct SearchStats
    {
        std::uint64_t nodes = 0;
        std::uint64_t unifications = 0;
        int rounds = 0;
        double wall_ms = 0.0;
    };

    struct SearchOutcome
    {
        SearchStatus status = SearchStatus::bounds_exhausted;
        std::optional<ConnectionProof> proof;
        SearchStats stats;

        bool proved() const { return status == SearchStatus::proved; }
    };

    /**
     * Connection tableau search, iteratively deepened on the total number of
     * clause copies. Start clauses are the all-negative clauses (the negated
     * goals). Each open subgoal is closed by reduction against the active
     * path or by extension into a clause copy. With factorization enabled, a
     * subgoal may instead re-enter an already solved copy through the same
     * entry literal, sharing that copy's subproofs; the resulting DAG is
     * attached to the proof. Every returned proof has passed check_proof.
     */
    SearchOutcome prove(const Matrix &m, const SearchConfig &cfg);

    enum class MinimalMode
    {
        // Any spanning connection set with a unifier.
        unrestricted,
        // Certificates realized by a connection tableau without sharing.
        tree_realizable,
    };

    /**
     * Exhaustive minimum: smallest total multiplicity first, then fewest
     * connections, then the lexicographically least connection list.
     * Returns budget_exhausted when cfg.node_budget is hit.
     */
    SearchOutcome minimal_proof(const Matrix &m, const SearchConfig &cfg, MinimalMode mode);

    /**
     * Rebuilds a derivation DAG for a proof that lacks one, using only the
     * proof's connections, copies and substitution. Shared subproofs become
     * factorization nodes. Returns nullopt if no DAG is found within budget.
     */
    std::optional<DerivationDag> replay_dag(const ConnectionProof &p, std::uint64_t node_budget = 1'000'000);

    /**
     * Structural problems of p.dag, if any: dangling or out-of-range
     * references, cycles, unreachable nodes, connections missing from the
     * proof, or factorization nodes whose instance differs from the node
     * that first entered the shared copy.
     */
    std::optional<std::string> dag_violation(const ConnectionProof &p);

} // namespace fcm
