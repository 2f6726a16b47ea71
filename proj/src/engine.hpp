#pragma once

// Connection tableau engine shared by prove, minimal_proof and replay_dag.

#include "fcm/matrix.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <vector>

namespace fcm::detail
{

    struct EngineOptions
    {
        enum class Mode
        {
            // Allocate fresh copies up to copy_limit in total.
            search,
            // Fixed multiplicity and connection set; rebuilds a DAG.
            replay,
        };
        Mode mode = Mode::search;
        bool share = false;
        int copy_limit = 1;
        int max_depth = 64;
        // Per-clause copy bound (search) or the fixed multiplicity (replay).
        Multiplicity copies;
        const std::set<Connection> *allowed = nullptr;
        std::uint64_t node_budget = 1'000'000;
    };

    struct Solution
    {
        Multiplicity multiplicity;
        std::vector<Connection> connections;
        Substitution substitution;
        DerivationDag dag;
    };

    class Engine
    {
    public:
        Engine(const Matrix &m, EngineOptions opts, const Substitution &initial = {});

        enum class Result
        {
            stopped,
            exhausted,
            budget,
        };

        // Calls on_solution for every closed tableau; returning true stops the run.
        Result run(const std::function<bool(Solution &&)> &on_solution);

        // Whether a copy or depth bound pruned some branch.
        bool was_cut() const { return cut_; }
        std::uint64_t nodes() const { return nodes_; }
        std::uint64_t unifications() const { return unifications_; }

    private:
        struct PathCell
        {
            OccCopy occ;
            std::shared_ptr<const PathCell> up;
            int length = 0;
        };
        using PathPtr = std::shared_ptr<const PathCell>;

        struct Item
        {
            bool complete = false;
            OccCopy occ;     // goal literal, or for complete: (clause, entry, copy)
            PathPtr path;    // goals only
            int node = -1;   // goal node, or for complete: the node that entered the copy
            std::shared_ptr<const Item> next;
        };
        using List = std::shared_ptr<const Item>;

        struct CopyState
        {
            int entry = -1;
            bool active = false;
            bool solved = false;
            std::vector<int> child_nodes; // per literal; -1 at the entry
        };

        struct NodeState
        {
            DagNode node;
            std::set<OccCopy> deps;
        };

        struct Mark
        {
            std::size_t store, conns, nodes, undo;
            std::vector<int> allocated;
        };

        bool solve(const List &goals);
        bool try_close(const Item &goal, const List &rest, OccCopy partner, DagRule rule);
        bool enter_copy(const Item &goal, const List &rest, int clause, int entry, int copy, bool fresh);
        bool share_copy(const Item &goal, const List &rest, int clause, int entry, int copy);
        bool emit();

        Mark mark() const;
        void restore(const Mark &m);
        void save_copy(int clause, int copy);
        CopyState &state(int clause, int copy);
        const Literal &literal(OccCopy o);
        bool connect_allowed(OccCopy a, OccCopy b) const;
        int total_allocated() const;
        bool ground_unit(int clause) const;

        const Matrix &m_;
        EngineOptions opts_;
        BindingStore store_;
        std::vector<std::vector<Clause>> variants_;
        std::vector<int> allocated_;
        std::vector<std::vector<CopyState>> copies_;
        std::vector<std::pair<std::pair<int, int>, CopyState>> undo_;
        std::vector<Connection> conns_;
        std::vector<NodeState> nodes_state_;
        std::vector<int> roots_;
        int start_clause_ = 0;
        int start_copy_ = 1;
        const std::function<bool(Solution &&)> *on_solution_ = nullptr;
        std::uint64_t nodes_ = 0;
        std::uint64_t unifications_ = 0;
        bool cut_ = false;
        bool budget_hit_ = false;
    };

} // namespace fcm::detail
