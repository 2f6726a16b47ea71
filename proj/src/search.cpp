#include "fcm/search.hpp"

#include "engine.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

namespace fcm
{

    std::string to_string(SearchStatus s)
    {
        switch (s)
        {
        case SearchStatus::proved: return "proved";
        case SearchStatus::budget_exhausted: return "budget-exhausted";
        case SearchStatus::bounds_exhausted: return "bounds-exhausted";
        case SearchStatus::space_exhausted: return "space-exhausted";
        }
        return "unknown";
    }

    namespace
    {
        double elapsed_ms(std::chrono::steady_clock::time_point since)
        {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
        }

        ConnectionProof to_proof(const Matrix &m, detail::Solution &&s)
        {
            ConnectionProof p;
            p.matrix = m;
            p.multiplicity = std::move(s.multiplicity);
            p.connections = std::move(s.connections);
            p.substitution = std::move(s.substitution);
            p.dag = std::move(s.dag);
            p.normalize();
            return p;
        }
    } // namespace

    namespace detail
    {
        Multiplicity copy_bounds(const Matrix &m, int max_mult)
        {
            Multiplicity out;
            for (const auto &c : m.clauses())
                out.push_back(c.size() == 1 && is_ground(c) ? 1 : max_mult);
            return out;
        }

        int total_bound(const Matrix &m, const SearchConfig &cfg)
        {
            if (cfg.max_total_multiplicity > 0)
                return cfg.max_total_multiplicity;
            return total_multiplicity(copy_bounds(m, cfg.max_multiplicity));
        }
    } // namespace detail

    SearchOutcome prove(const Matrix &m, const SearchConfig &cfg)
    {
        if (m.empty())
            throw std::invalid_argument("cannot search an empty matrix");
        if (cfg.max_multiplicity < 1 || cfg.max_depth < 1 || cfg.node_budget < 1 || cfg.path_cap < 1)
            throw std::invalid_argument("search bounds must be positive");
        auto t0 = std::chrono::steady_clock::now();
        SearchOutcome out;
        const Multiplicity bounds = detail::copy_bounds(m, cfg.max_multiplicity);
        const int limit = detail::total_bound(m, cfg);

        for (int t = 1; t <= limit; ++t)
        {
            detail::EngineOptions opts;
            opts.share = cfg.factorization;
            opts.copy_limit = t;
            opts.max_depth = cfg.max_depth;
            opts.copies = bounds;
            opts.node_budget = cfg.node_budget - out.stats.nodes;
            detail::Engine engine(m, opts);
            auto result = engine.run([&](detail::Solution &&s)
                                     {
                                         ConnectionProof p = to_proof(m, std::move(s));
                                         if (!check_proof(p, cfg.path_cap).accepted())
                                             return false;
                                         out.proof = std::move(p);
                                         return true; });
            out.stats.nodes += std::min(engine.nodes(), opts.node_budget);
            out.stats.unifications += engine.unifications();
            out.stats.rounds = t;
            if (out.proof)
            {
                out.status = SearchStatus::proved;
                break;
            }
            if (result == detail::Engine::Result::budget)
            {
                out.status = SearchStatus::budget_exhausted;
                break;
            }
            if (!engine.was_cut())
            {
                out.status = SearchStatus::space_exhausted;
                break;
            }
        }
        out.stats.wall_ms = elapsed_ms(t0);
        return out;
    }

    std::optional<DerivationDag> replay_dag(const ConnectionProof &p, std::uint64_t node_budget)
    {
        if (static_cast<int>(p.multiplicity.size()) != p.matrix.size())
            return std::nullopt;
        std::set<Connection> allowed(p.connections.begin(), p.connections.end());
        detail::EngineOptions opts;
        opts.mode = detail::EngineOptions::Mode::replay;
        opts.share = true;
        opts.copy_limit = total_multiplicity(p.multiplicity);
        opts.max_depth = opts.copy_limit + 1;
        opts.copies = p.multiplicity;
        opts.allowed = &allowed;
        opts.node_budget = node_budget;
        std::optional<DerivationDag> found;
        detail::Engine engine(p.matrix, opts, p.substitution);
        engine.run([&](detail::Solution &&s)
                   {
                       ConnectionProof candidate = p;
                       candidate.dag = std::move(s.dag);
                       if (dag_violation(candidate))
                           return false;
                       found = std::move(candidate.dag);
                       return true; });
        return found;
    }

    std::optional<std::string> dag_violation(const ConnectionProof &p)
    {
        if (!p.dag)
            return "proof has no derivation DAG";
        const DerivationDag &dag = *p.dag;
        const int n = static_cast<int>(dag.nodes.size());
        auto valid = [&](int id)
        { return id >= 0 && id < n; };

        std::set<Connection> conns(p.connections.begin(), p.connections.end());
        AmplifiedMatrix am(p.matrix, p.multiplicity);
        if (dag.start_clause < 0 || dag.start_clause >= p.matrix.size() || !am.contains({dag.start_clause, 0, dag.start_copy}))
            return "start clause copy out of range";
        if (dag.roots.size() != p.matrix.clause(dag.start_clause).size())
            return "roots do not match the start clause";
        for (std::size_t l = 0; l < dag.roots.size(); ++l)
        {
            if (!valid(dag.roots[l]))
                return "root index out of range";
            if (dag.nodes[static_cast<std::size_t>(dag.roots[l])].goal != OccCopy{dag.start_clause, static_cast<int>(l), dag.start_copy})
                return "root goal does not match the start clause";
        }

        for (int id = 0; id < n; ++id)
        {
            const DagNode &node = dag.nodes[static_cast<std::size_t>(id)];
            const std::string where = "node " + std::to_string(id) + ": ";
            if (!am.contains(node.goal) || !am.contains(node.partner))
                return where + "occurrence out of range";
            if (!conns.count(Connection::make(node.goal, node.partner)))
                return where + "connection not in the proof";
            for (int c : node.children)
                if (!valid(c))
                    return where + "child index out of range";
            if (node.rule == DagRule::reduction && !node.children.empty())
                return where + "reduction with children";
            if (node.rule != DagRule::reduction)
            {
                std::vector<OccCopy> expected, actual;
                int width = static_cast<int>(p.matrix.clause(node.partner.clause).size());
                for (int l = 0; l < width; ++l)
                    if (l != node.partner.literal)
                        expected.push_back({node.partner.clause, l, node.partner.copy});
                for (int c : node.children)
                    actual.push_back(dag.nodes[static_cast<std::size_t>(c)].goal);
                if (expected != actual)
                    return where + "children are not the remaining literals of the entered copy";
            }
            if (node.rule == DagRule::factorization)
            {
                auto first = std::find_if(dag.nodes.begin(), dag.nodes.end(), [&](const DagNode &o)
                                          { return o.rule == DagRule::extension && o.partner == node.partner; });
                if (first == dag.nodes.end())
                    return where + "factorization without an extension into the shared copy";
                if (first->children != node.children)
                    return where + "factorization does not share the entered copy's subproofs";
                if (apply_subst(p.substitution, am.literal(first->goal)) != apply_subst(p.substitution, am.literal(node.goal)))
                    return where + "factorized instances differ";
            }
        }

        // Topological order from the roots; detects cycles and unreachable nodes.
        std::vector<int> color(static_cast<std::size_t>(n), 0), order;
        std::function<bool(int)> visit = [&](int id) -> bool
        {
            int &c = color[static_cast<std::size_t>(id)];
            if (c == 1)
                return false;
            if (c == 2)
                return true;
            c = 1;
            for (int child : dag.nodes[static_cast<std::size_t>(id)].children)
                if (!visit(child))
                    return false;
            c = 2;
            order.push_back(id);
            return true;
        };
        for (int r : dag.roots)
            if (!visit(r))
                return "derivation has a cycle";
        if (static_cast<int>(order.size()) != n)
            return "unreachable node in derivation";
        std::reverse(order.begin(), order.end());

        // Goals guaranteed on every branch above each node.
        std::vector<std::optional<std::set<OccCopy>>> above(static_cast<std::size_t>(n));
        for (int r : dag.roots)
            above[static_cast<std::size_t>(r)] = std::set<OccCopy>{};
        for (int id : order)
        {
            const DagNode &node = dag.nodes[static_cast<std::size_t>(id)];
            std::set<OccCopy> mine = *above[static_cast<std::size_t>(id)];
            if (node.rule == DagRule::reduction && !mine.count(node.partner))
                return "node " + std::to_string(id) + ": reduction partner is not on every branch";
            mine.insert(node.goal);
            for (int child : node.children)
            {
                auto &slot = above[static_cast<std::size_t>(child)];
                if (!slot)
                    slot = mine;
                else
                {
                    std::set<OccCopy> both;
                    std::set_intersection(slot->begin(), slot->end(), mine.begin(), mine.end(),
                                          std::inserter(both, both.begin()));
                    slot = std::move(both);
                }
            }
        }
        return std::nullopt;
    }

} // namespace fcm
