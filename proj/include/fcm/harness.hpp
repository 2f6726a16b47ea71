#pragma once

#include "fcm/bridge.hpp"
#include "fcm/factorization.hpp"
#include "fcm/formula.hpp"
#include "fcm/resolution.hpp"
#include "fcm/search.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fcm
{

    enum class Family
    {
        linear_chain,
        doubling_chain,
        nontheorem_chain,
    };

    struct FamilySpec
    {
        Family family = Family::linear_chain;
        int n = 1;

        std::string name() const;
    };

    std::string to_string(Family f);
    // Parses "linear-chain:3" and the like. Throws std::invalid_argument.
    FamilySpec parse_family_spec(std::string_view text);

    // Largest accepted parameter for each family.
    int family_max(Family f);

    /**
     * linear-chain(n):     n(zero) & ![X]: (n(X) => n(f(X))) => n(f^n(zero)) & n(f^(n-1)(zero))
     * doubling-chain(n):   p0, p_i => q_i, p_i => r_i, q_i & r_i => p_(i+1) for i < n, conjecture p_n
     * nontheorem-chain(n): linear-chain(n) without the base fact
     */
    std::string family_text(const FamilySpec &spec);
    Formula gen_family(const FamilySpec &spec);

    // One connection-prover run; sizes are present only for a re-checked proof.
    struct ProverColumn
    {
        SearchStatus status = SearchStatus::bounds_exhausted;
        bool checked = false;
        std::optional<SizeReport> sizes;
        SearchStats stats;
    };

    struct ResolutionColumn
    {
        ResolutionStatus status = ResolutionStatus::saturated;
        bool checked = false;
        int steps = 0;
        int factoring_steps = 0;
        std::uint64_t given = 0;
        std::uint64_t generated = 0;
        double wall_ms = 0.0;
    };

    struct RunRow
    {
        FamilySpec spec;
        bool theorem = true;
        ProverColumn off;
        ProverColumn on;
        ResolutionColumn resolution;
        std::vector<TranslationReport> translations;
        std::vector<std::string> errors;
    };

    struct RunReport
    {
        std::vector<RunRow> rows;
    };

    struct CompareConfig
    {
        // The factorization flag is overridden per column.
        SearchConfig search;
        SaturationBudget saturation;
    };

    /**
     * For each instance: prove with factorization off and on, saturate, and
     * translate in both directions. Every proof is re-checked before its
     * sizes are reported; failures are recorded in the row and the run
     * continues. Rows follow the order of specs.
     */
    RunReport run_compare(const std::vector<FamilySpec> &specs, const CompareConfig &cfg);

} // namespace fcm
