#pragma once

#include "fcm/matrix.hpp"
#include "fcm/resolution.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fcm
{

    class TranslationError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /**
     * Resolution refutation from a connection proof. Every extension and
     * factorization node of the derivation DAG becomes one resolution step,
     * children before parents; a shared copy yields one derived clause that
     * is used as a parent once per entering node. Each reduction becomes one
     * factoring step merging the reduced literal into the entry literal of
     * the ancestor it closes against.
     *
     * A proof without a DAG is replayed first; TranslationError is thrown if
     * replay fails or the result does not check.
     */
    ResolutionProof cm_to_resolution(const ConnectionProof &p, std::uint64_t replay_budget = 1'000'000);

    /**
     * Connection proof from a resolution refutation. Each use of an input
     * clause as a parent is a fresh copy; derived clauses used more than once
     * keep their copies shared unless that makes the unifier fail, in which
     * case they are unfolded. Every resolution step connects all copy
     * literals behind the two resolved literals, factoring merges those
     * sets, and the result is factorized to fixpoint.
     *
     * Throws TranslationError (with the open path, if any) when the result
     * does not check.
     */
    ConnectionProof resolution_to_cm(const ResolutionProof &rp);

    enum class Direction
    {
        cm_to_resolution,
        resolution_to_cm,
    };

    std::string to_string(Direction d);

    struct TranslationReport
    {
        std::string instance;
        std::string group;
        Direction direction = Direction::cm_to_resolution;
        // Connections on the connection side, resolution plus factoring steps on the other.
        int input_size = 0;
        int output_size = 0;
        int factoring_steps = 0;
        double ratio = 0.0;
        bool accepted = false;
        std::string reason;
    };

    struct LinearityItem
    {
        std::string instance;
        std::string group;
        std::optional<ConnectionProof> cm;
        std::optional<ResolutionProof> resolution;
    };

    struct LinearitySummary
    {
        std::vector<TranslationReport> reports;
        // Largest accepted ratio per (group, direction).
        std::map<std::pair<std::string, Direction>, double> max_ratio;
    };

    LinearitySummary measure_linearity(const std::vector<LinearityItem> &corpus);

} // namespace fcm
