#include "engine.hpp"

#include <algorithm>

namespace fcm::detail
{

    Engine::Engine(const Matrix &m, EngineOptions opts, const Substitution &initial)
        : m_(m), opts_(std::move(opts)), store_(initial)
    {
        if (static_cast<int>(opts_.copies.size()) != m_.size())
            throw std::invalid_argument("copy bounds must cover every clause");
        variants_.resize(static_cast<std::size_t>(m_.size()));
        copies_.resize(static_cast<std::size_t>(m_.size()));
        allocated_.assign(static_cast<std::size_t>(m_.size()), 0);
        for (int c = 0; c < m_.size(); ++c)
        {
            int bound = opts_.copies[static_cast<std::size_t>(c)];
            for (int k = 1; k <= bound; ++k)
                variants_[static_cast<std::size_t>(c)].push_back(fresh_variant(m_.clause(c), k));
            copies_[static_cast<std::size_t>(c)].resize(static_cast<std::size_t>(bound));
            if (opts_.mode == EngineOptions::Mode::replay)
                allocated_[static_cast<std::size_t>(c)] = bound;
        }
    }

    const Literal &Engine::literal(OccCopy o)
    {
        return variants_[static_cast<std::size_t>(o.clause)][static_cast<std::size_t>(o.copy - 1)]
                        [static_cast<std::size_t>(o.literal)];
    }

    Engine::CopyState &Engine::state(int clause, int copy)
    {
        return copies_[static_cast<std::size_t>(clause)][static_cast<std::size_t>(copy - 1)];
    }

    bool Engine::ground_unit(int clause) const
    {
        const Clause &c = m_.clause(clause);
        return c.size() == 1 && is_ground(c);
    }

    int Engine::total_allocated() const
    {
        int t = 0;
        for (int a : allocated_)
            t += a;
        return t;
    }

    bool Engine::connect_allowed(OccCopy a, OccCopy b) const
    {
        return opts_.allowed == nullptr || opts_.allowed->count(Connection::make(a, b)) > 0;
    }

    Engine::Mark Engine::mark() const
    {
        return {store_.mark(), conns_.size(), nodes_state_.size(), undo_.size(), allocated_};
    }

    void Engine::restore(const Mark &mk)
    {
        store_.undo(mk.store);
        conns_.resize(mk.conns);
        nodes_state_.erase(nodes_state_.begin() + static_cast<long>(mk.nodes), nodes_state_.end());
        while (undo_.size() > mk.undo)
        {
            auto &[key, saved] = undo_.back();
            state(key.first, key.second) = std::move(saved);
            undo_.pop_back();
        }
        allocated_ = mk.allocated;
    }

    void Engine::save_copy(int clause, int copy)
    {
        undo_.push_back({{clause, copy}, state(clause, copy)});
    }

    Engine::Result Engine::run(const std::function<bool(Solution &&)> &on_solution)
    {
        on_solution_ = &on_solution;
        for (int s = 0; s < m_.size(); ++s)
        {
            const Clause &clause = m_.clause(s);
            bool negative = std::none_of(clause.begin(), clause.end(), [](const Literal &l)
                                         { return l.positive; });
            if (!negative || clause.empty())
                continue;
            int last_copy = opts_.mode == EngineOptions::Mode::replay ? opts_.copies[static_cast<std::size_t>(s)] : 1;
            for (int k = 1; k <= last_copy; ++k)
            {
                if (opts_.mode == EngineOptions::Mode::search &&
                    (opts_.copy_limit < 1 || opts_.copies[static_cast<std::size_t>(s)] < 1))
                {
                    cut_ = true;
                    continue;
                }
                Mark mk = mark();
                if (opts_.mode == EngineOptions::Mode::search)
                    allocated_[static_cast<std::size_t>(s)] = 1;
                save_copy(s, k);
                state(s, k).active = true;
                state(s, k).entry = -1;
                start_clause_ = s;
                start_copy_ = k;
                roots_.clear();
                std::vector<int> ids;
                for (int l = 0; l < static_cast<int>(clause.size()); ++l)
                {
                    ids.push_back(static_cast<int>(nodes_state_.size()));
                    nodes_state_.push_back({DagNode{{s, l, k}, DagRule::extension, {}, {}}, {}});
                }
                roots_ = ids;
                List goals;
                for (int l = static_cast<int>(clause.size()) - 1; l >= 0; --l)
                    goals = std::make_shared<const Item>(Item{false, {s, l, k}, nullptr, ids[static_cast<std::size_t>(l)], goals});
                bool stop = solve(goals);
                restore(mk);
                if (stop)
                    return budget_hit_ ? Result::budget : Result::stopped;
            }
        }
        return Result::exhausted;
    }

    bool Engine::solve(const List &goals)
    {
        if (budget_hit_)
            return true;
        if (++nodes_ > opts_.node_budget)
        {
            budget_hit_ = true;
            return true;
        }
        if (!goals)
            return emit();

        const Item &it = *goals;
        if (it.complete)
        {
            Mark mk = mark();
            save_copy(it.occ.clause, it.occ.copy);
            CopyState &cs = state(it.occ.clause, it.occ.copy);
            cs.solved = true;
            cs.active = false;
            std::set<OccCopy> deps;
            for (int child : cs.child_nodes)
                if (child >= 0)
                    deps.insert(nodes_state_[static_cast<std::size_t>(child)].deps.begin(),
                                nodes_state_[static_cast<std::size_t>(child)].deps.end());
            NodeState &parent = nodes_state_[static_cast<std::size_t>(it.node)];
            deps.erase(parent.node.goal);
            parent.deps = std::move(deps);
            bool r = solve(it.next);
            if (!r)
                restore(mk);
            return r;
        }

        const Literal lit = literal(it.occ);
        const Literal wanted = lit.negated();

        for (const PathCell *p = it.path.get(); p; p = p->up.get())
        {
            const Literal &pl = literal(p->occ);
            if (!lit.complementary_shape(pl) || !connect_allowed(it.occ, p->occ))
                continue;
            Mark mk = mark();
            ++unifications_;
            if (store_.unify(wanted, pl))
            {
                if (try_close(it, it.next, p->occ, DagRule::reduction))
                    return true;
            }
            restore(mk);
        }

        int depth = it.path ? it.path->length : 0;
        if (depth >= opts_.max_depth)
        {
            cut_ = true;
            return false;
        }

        const bool replay = opts_.mode == EngineOptions::Mode::replay;
        for (int c = 0; c < m_.size(); ++c)
        {
            const Clause &clause = m_.clause(c);
            for (int e = 0; e < static_cast<int>(clause.size()); ++e)
            {
                if (!lit.complementary_shape(clause[static_cast<std::size_t>(e)]))
                    continue;
                const bool unit = ground_unit(c);
                const int have = allocated_[static_cast<std::size_t>(c)];
                if (opts_.share && !unit)
                {
                    for (int k = 1; k <= have; ++k)
                    {
                        const CopyState &cs = state(c, k);
                        if (cs.solved && cs.entry == e && connect_allowed(it.occ, {c, e, k}) &&
                            share_copy(it, it.next, c, e, k))
                            return true;
                    }
                }
                if (replay)
                {
                    for (int k = 1; k <= have; ++k)
                    {
                        if ((state(c, k).active && !unit) || !connect_allowed(it.occ, {c, e, k}))
                            continue;
                        if (enter_copy(it, it.next, c, e, k, false))
                            return true;
                    }
                    continue;
                }
                if (unit && have >= 1)
                {
                    if (enter_copy(it, it.next, c, e, 1, false))
                        return true;
                    continue;
                }
                if (have < opts_.copies[static_cast<std::size_t>(c)] && total_allocated() < opts_.copy_limit)
                {
                    if (enter_copy(it, it.next, c, e, have + 1, true))
                        return true;
                }
                else
                    cut_ = true;
                if (budget_hit_)
                    return true;
            }
        }
        return false;
    }

    bool Engine::try_close(const Item &goal, const List &rest, OccCopy partner, DagRule rule)
    {
        conns_.push_back(Connection::make(goal.occ, partner));
        NodeState &ns = nodes_state_[static_cast<std::size_t>(goal.node)];
        ns.node = DagNode{goal.occ, rule, partner, {}};
        ns.deps = {partner};
        return solve(rest);
    }

    bool Engine::enter_copy(const Item &goal, const List &rest, int clause, int entry, int copy, bool fresh)
    {
        Mark mk = mark();
        if (fresh)
            allocated_[static_cast<std::size_t>(clause)] = copy;
        ++unifications_;
        if (!store_.unify(literal(goal.occ).negated(), literal({clause, entry, copy})))
        {
            restore(mk);
            return false;
        }
        const int width = static_cast<int>(m_.clause(clause).size());
        save_copy(clause, copy);
        {
            CopyState &cs = state(clause, copy);
            cs.entry = entry;
            cs.active = true;
            cs.solved = false;
            cs.child_nodes.assign(static_cast<std::size_t>(width), -1);
        }
        conns_.push_back(Connection::make(goal.occ, {clause, entry, copy}));

        std::vector<int> children;
        for (int l = 0; l < width; ++l)
        {
            if (l == entry)
                continue;
            int id = static_cast<int>(nodes_state_.size());
            nodes_state_.push_back({DagNode{{clause, l, copy}, DagRule::extension, {}, {}}, {}});
            state(clause, copy).child_nodes[static_cast<std::size_t>(l)] = id;
            children.push_back(id);
        }
        NodeState &ns = nodes_state_[static_cast<std::size_t>(goal.node)];
        ns.node = DagNode{goal.occ, DagRule::extension, {clause, entry, copy}, children};
        ns.deps.clear();

        auto path = std::make_shared<const PathCell>(
            PathCell{goal.occ, goal.path, (goal.path ? goal.path->length : 0) + 1});
        List tail = std::make_shared<const Item>(Item{true, {clause, entry, copy}, nullptr, goal.node, rest});
        for (int l = width - 1; l >= 0; --l)
        {
            if (l == entry)
                continue;
            tail = std::make_shared<const Item>(
                Item{false, {clause, l, copy}, path, state(clause, copy).child_nodes[static_cast<std::size_t>(l)], tail});
        }
        bool r = solve(tail);
        if (!r)
            restore(mk);
        return r;
    }

    bool Engine::share_copy(const Item &goal, const List &rest, int clause, int entry, int copy)
    {
        const CopyState &cs = state(clause, copy);
        std::set<OccCopy> deps;
        std::vector<int> children;
        for (int child : cs.child_nodes)
        {
            if (child < 0)
                continue;
            children.push_back(child);
            const auto &d = nodes_state_[static_cast<std::size_t>(child)].deps;
            deps.insert(d.begin(), d.end());
        }
        // Reductions inside the shared subproofs must still find their partners.
        for (const auto &d : deps)
        {
            if (d == goal.occ)
                continue;
            bool on_path = false;
            for (const PathCell *p = goal.path.get(); p && !on_path; p = p->up.get())
                on_path = p->occ == d;
            if (!on_path)
                return false;
        }
        Mark mk = mark();
        ++unifications_;
        if (!store_.unify(literal(goal.occ).negated(), literal({clause, entry, copy})))
        {
            restore(mk);
            return false;
        }
        conns_.push_back(Connection::make(goal.occ, {clause, entry, copy}));
        NodeState &ns = nodes_state_[static_cast<std::size_t>(goal.node)];
        ns.node = DagNode{goal.occ, DagRule::factorization, {clause, entry, copy}, children};
        deps.erase(goal.occ);
        ns.deps = std::move(deps);
        bool r = solve(rest);
        if (!r)
            restore(mk);
        return r;
    }

    bool Engine::emit()
    {
        Solution s;
        for (int c = 0; c < m_.size(); ++c)
            s.multiplicity.push_back(std::max(1, allocated_[static_cast<std::size_t>(c)]));
        s.connections = conns_;
        std::sort(s.connections.begin(), s.connections.end());
        s.connections.erase(std::unique(s.connections.begin(), s.connections.end()), s.connections.end());
        std::set<Var> domain;
        for (int c = 0; c < m_.size(); ++c)
            for (int k = 1; k <= s.multiplicity[static_cast<std::size_t>(c)]; ++k)
                collect_variables(fresh_variant(m_.clause(c), k), domain);
        s.substitution = store_.to_substitution(domain);
        s.dag.start_clause = start_clause_;
        s.dag.start_copy = start_copy_;
        s.dag.roots = roots_;
        for (const auto &ns : nodes_state_)
            s.dag.nodes.push_back(ns.node);
        return (*on_solution_)(std::move(s));
    }

} // namespace fcm::detail
