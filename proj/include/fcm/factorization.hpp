#pragma once

#include "fcm/matrix.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fcm
{

    /**
     * Merge groups of clause copies. groups[c] partitions 1..mu(c); each
     * group is sorted and its first element is the representative. Groups
     * are ordered by representative.
     */
    struct FactorMap
    {
        std::vector<std::vector<std::vector<int>>> groups;

        static FactorMap identity(const Multiplicity &mu);
        bool is_identity() const;
        bool operator==(const FactorMap &) const = default;
    };

    class FactorizationError : public std::runtime_error
    {
    public:
        FactorizationError(const std::string &message, int clause, int first_copy, int second_copy)
            : std::runtime_error(message), clause(clause), first_copy(first_copy), second_copy(second_copy) {}

        int clause;
        int first_copy;
        int second_copy;
    };

    // Groups copies of each clause whose instances under the proof's
    // substitution coincide literal by literal.
    FactorMap find_factorizations(const ConnectionProof &p);

    /**
     * Merges each group into its representative and renumbers copies
     * densely. Connections are rewritten endpoint-wise and deduplicated;
     * the substitution is renamed and restricted to surviving variables.
     * The derivation DAG is dropped. Throws FactorizationError naming the
     * first pair of grouped copies whose instances differ.
     */
    ConnectionProof apply_factorization(const ConnectionProof &p, const FactorMap &phi);

    struct FixpointResult
    {
        ConnectionProof proof;
        // Applications of a non-identity map.
        int iterations = 0;
    };

    FixpointResult factorize_to_fixpoint(const ConnectionProof &p);

    struct SizeReport
    {
        int connections = 0;
        int total_multiplicity = 0;
        // Derivation nodes with shared subproofs counted once per reference.
        std::uint64_t tree_nodes = 0;
        std::uint64_t dag_nodes = 0;
        int factorization_edges = 0;
        // Symbol occurrences in the instantiated amplified matrix.
        int symbols = 0;

        bool operator==(const SizeReport &) const = default;
    };

    // Replays the proof first when it has no DAG; throws std::runtime_error if that fails.
    SizeReport size_report(const ConnectionProof &p);

} // namespace fcm
