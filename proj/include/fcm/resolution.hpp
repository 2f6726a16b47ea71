#pragma once

#include "fcm/matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fcm
{

    enum class ResKind
    {
        input,
        resolution,
        factoring,
    };

    std::string to_string(ResKind k);

    /**
     * One proof line. Parents are renamed apart before unification: every
     * variable of parents[0] gets copy index 1, of parents[1] copy index 2.
     * The unifier is over those renamed variables. Derived clauses have
     * their variables renamed to V0, V1, ... in order of first occurrence.
     *
     * resolution: positions = {literal in parent 0, literal in parent 1}
     * factoring:  positions = {kept literal, removed literal}
     * input:      source = matrix clause index
     */
    struct ResStep
    {
        ResKind kind = ResKind::input;
        int source = -1;
        std::vector<int> parents;
        std::vector<int> positions;
        Substitution unifier;
        Clause clause;
    };

    struct ResolutionProof
    {
        Matrix matrix;
        std::vector<ResStep> steps;

        // Resolution plus factoring steps.
        int step_count() const;
        int resolution_steps() const;
        int factoring_steps() const;
    };

    struct ResolutionVerdict
    {
        bool accepted = false;
        int failed_step = -1;
        std::string reason;
    };

    ResolutionVerdict check_resolution_proof(const ResolutionProof &rp);

    // Renames variables to V0, V1, ... in order of first occurrence.
    Clause normalize_variables(const Clause &c);

    // Derivations from explicit parents; nullopt when the literals do not unify.
    std::optional<ResStep> resolve(const Clause &a, int ia, const Clause &b, int ib);
    std::optional<ResStep> factor(const Clause &c, int keep, int remove);

    struct SaturationBudget
    {
        std::uint64_t max_generated = 20'000;
        std::uint64_t max_given = 2'000;
        // Every n-th selection takes the oldest passive clause instead of the lightest.
        int age_ratio = 5;
    };

    enum class ResolutionStatus
    {
        refuted,
        saturated,
        budget_exhausted,
    };

    std::string to_string(ResolutionStatus s);

    struct ResolutionOutcome
    {
        ResolutionStatus status = ResolutionStatus::saturated;
        std::optional<ResolutionProof> proof;
        std::uint64_t generated = 0;
        std::uint64_t given = 0;
        double wall_ms = 0.0;
    };

    /**
     * Given-clause saturation with binary resolution and factoring.
     * Selection is fewest literals first, first-in-first-out among equals,
     * with every age_ratio-th pick taking the oldest clause. Variants and
     * tautologies are discarded. A refutation is pruned to the ancestors
     * of the empty clause.
     */
    ResolutionOutcome saturate(const Matrix &m, const SaturationBudget &budget = {});

    /**
     * Shortest refutation by iterative deepening on the number of steps.
     * Independent adjacent steps are kept in canonical order and every
     * derived clause must stay usable within the remaining steps. No
     * subsumption or tautology deletion. cap bounds the search nodes.
     * Running out of either max_steps or cap yields budget_exhausted.
     */
    ResolutionOutcome minimal_resolution_proof(const Matrix &m, int max_steps, std::uint64_t cap = 5'000'000);

} // namespace fcm
