#include "fcm/bridge.hpp"

#include "fcm/factorization.hpp"
#include "fcm/search.hpp"

#include <algorithm>
#include <set>

namespace fcm
{

    std::string to_string(Direction d)
    {
        return d == Direction::cm_to_resolution ? "cm-to-resolution" : "resolution-to-cm";
    }

    namespace
    {
        // ---------- connection proof -> resolution ----------

        // A derived clause with the copy literal each of its literals descends from.
        struct Tagged
        {
            int step = -1;
            std::vector<OccCopy> tags;
        };

        class ToResolution
        {
        public:
            ToResolution(const ConnectionProof &p, const DerivationDag &dag) : p_(p), dag_(dag)
            {
                out_.matrix = p.matrix;
            }

            ResolutionProof run()
            {
                Tagged cur = input_copy(dag_.start_clause, dag_.start_copy);
                for (int r : dag_.roots)
                {
                    const DagNode &node = dag_.nodes.at(static_cast<std::size_t>(r));
                    if (node.rule == DagRule::reduction)
                        throw TranslationError("reduction at the root of the derivation");
                    cur = resolve_on(cur, node.goal, derive(r), node.partner);
                }
                if (!out_.steps.back().clause.empty())
                    throw TranslationError("derivation does not end in the empty clause");
                return std::move(out_);
            }

        private:
            // Clause proved by the subtree of a node: its entry literal plus
            // literals still waiting for a reduction partner.
            Tagged derive(int index)
            {
                const DagNode &node = dag_.nodes.at(static_cast<std::size_t>(index));
                auto key = std::make_pair(node.partner, node.children);
                if (auto it = memo_.find(key); it != memo_.end())
                    return it->second;
                Tagged cur = input_copy(node.partner.clause, node.partner.copy);
                for (int c : node.children)
                {
                    const DagNode &child = dag_.nodes.at(static_cast<std::size_t>(c));
                    if (child.rule == DagRule::reduction)
                    {
                        reduced_to_[child.goal] = child.partner;
                        continue;
                    }
                    cur = resolve_on(cur, child.goal, derive(c), child.partner);
                }
                for (std::size_t i = 0; i < cur.tags.size();)
                {
                    auto r = reduced_to_.find(cur.tags[i]);
                    if (r != reduced_to_.end() && r->second == node.goal)
                        cur = factor_on(cur, node.partner, cur.tags[i]);
                    else
                        ++i;
                }
                memo_.emplace(key, cur);
                return cur;
            }

            Tagged input_copy(int clause, int copy)
            {
                auto [it, fresh] = input_step_.try_emplace(clause, static_cast<int>(out_.steps.size()));
                if (fresh)
                    out_.steps.push_back(ResStep{ResKind::input, clause, {}, {}, {}, p_.matrix.clause(clause)});
                Tagged t{it->second, {}};
                for (int l = 0; l < static_cast<int>(p_.matrix.clause(clause).size()); ++l)
                    t.tags.push_back({clause, l, copy});
                return t;
            }

            static int position(const Tagged &t, const OccCopy &tag)
            {
                auto it = std::find(t.tags.begin(), t.tags.end(), tag);
                if (it == t.tags.end())
                    throw TranslationError("literal lost during translation");
                return static_cast<int>(it - t.tags.begin());
            }

            const Clause &clause_of(const Tagged &t) const
            {
                return out_.steps[static_cast<std::size_t>(t.step)].clause;
            }

            Tagged resolve_on(const Tagged &a, const OccCopy &ta, const Tagged &b, const OccCopy &tb)
            {
                int ia = position(a, ta), ib = position(b, tb);
                auto step = resolve(clause_of(a), ia, clause_of(b), ib);
                if (!step)
                    throw TranslationError("connected literals do not resolve");
                step->parents = {a.step, b.step};
                Tagged out{static_cast<int>(out_.steps.size()), {}};
                for (int i = 0; i < static_cast<int>(a.tags.size()); ++i)
                    if (i != ia)
                        out.tags.push_back(a.tags[static_cast<std::size_t>(i)]);
                for (int i = 0; i < static_cast<int>(b.tags.size()); ++i)
                    if (i != ib)
                        out.tags.push_back(b.tags[static_cast<std::size_t>(i)]);
                out_.steps.push_back(std::move(*step));
                return out;
            }

            Tagged factor_on(const Tagged &a, const OccCopy &keep, const OccCopy &remove)
            {
                int ik = position(a, keep), ir = position(a, remove);
                auto step = factor(clause_of(a), ik, ir);
                if (!step)
                    throw TranslationError("reduction literals do not factor");
                step->parents = {a.step};
                Tagged out{static_cast<int>(out_.steps.size()), a.tags};
                out.tags.erase(out.tags.begin() + ir);
                out_.steps.push_back(std::move(*step));
                return out;
            }

            const ConnectionProof &p_;
            const DerivationDag &dag_;
            ResolutionProof out_;
            std::map<int, int> input_step_;
            std::map<OccCopy, OccCopy> reduced_to_;
            std::map<std::pair<OccCopy, std::vector<int>>, Tagged> memo_;
        };

        // ---------- resolution -> connection proof ----------

        enum class Sharing
        {
            all,
            ground,
            none,
        };

        class ToConnections
        {
        public:
            ToConnections(const ResolutionProof &rp, Sharing sharing)
                : rp_(rp), sharing_(sharing), mu_(static_cast<std::size_t>(rp.matrix.size()), 0)
            {
            }

            ConnectionProof run()
            {
                build(static_cast<int>(rp_.steps.size()) - 1);
                ConnectionProof p;
                p.matrix = rp_.matrix;
                p.multiplicity = mu_;
                for (auto &k : p.multiplicity)
                    k = std::max(k, 1);
                p.connections.assign(connections_.begin(), connections_.end());
                p.normalize();
                return p;
            }

        private:
            using Tags = std::vector<std::set<OccCopy>>;

            Tags build(int index)
            {
                const ResStep &s = rp_.steps.at(static_cast<std::size_t>(index));
                if (s.kind == ResKind::input)
                {
                    int copy = ++mu_.at(static_cast<std::size_t>(s.source));
                    Tags t(s.clause.size());
                    for (int l = 0; l < static_cast<int>(t.size()); ++l)
                        t[static_cast<std::size_t>(l)].insert({s.source, l, copy});
                    return t;
                }
                bool share = sharing_ == Sharing::all || (sharing_ == Sharing::ground && is_ground(s.clause));
                if (share)
                    if (auto it = memo_.find(index); it != memo_.end())
                        return it->second;
                Tags out;
                if (s.kind == ResKind::factoring)
                {
                    out = build(s.parents.at(0));
                    auto keep = static_cast<std::size_t>(s.positions.at(0));
                    auto remove = static_cast<std::size_t>(s.positions.at(1));
                    out.at(keep).insert(out.at(remove).begin(), out.at(remove).end());
                    out.erase(out.begin() + static_cast<long>(remove));
                }
                else
                {
                    Tags a = build(s.parents.at(0));
                    Tags b = build(s.parents.at(1));
                    auto ia = static_cast<std::size_t>(s.positions.at(0));
                    auto ib = static_cast<std::size_t>(s.positions.at(1));
                    for (const auto &x : a.at(ia))
                        for (const auto &y : b.at(ib))
                            connections_.insert(Connection::make(x, y));
                    for (std::size_t i = 0; i < a.size(); ++i)
                        if (i != ia)
                            out.push_back(a[i]);
                    for (std::size_t i = 0; i < b.size(); ++i)
                        if (i != ib)
                            out.push_back(b[i]);
                }
                if (share)
                    memo_.emplace(index, out);
                return out;
            }

            const ResolutionProof &rp_;
            Sharing sharing_;
            Multiplicity mu_;
            std::set<Connection> connections_;
            std::map<int, Tags> memo_;
        };

        std::optional<Substitution> joint_unifier(const ConnectionProof &p)
        {
            AmplifiedMatrix am(p.matrix, p.multiplicity);
            BindingStore store;
            for (const auto &c : p.connections)
                if (!store.unify(am.literal(c.first), am.literal(c.second).negated()))
                    return std::nullopt;
            return store.to_substitution(am.variables());
        }

        ResolutionProof pruned(const ResolutionProof &rp)
        {
            std::vector<bool> keep(rp.steps.size(), false);
            std::vector<int> stack{static_cast<int>(rp.steps.size()) - 1};
            while (!stack.empty())
            {
                int i = stack.back();
                stack.pop_back();
                if (keep[static_cast<std::size_t>(i)])
                    continue;
                keep[static_cast<std::size_t>(i)] = true;
                for (int q : rp.steps[static_cast<std::size_t>(i)].parents)
                    stack.push_back(q);
            }
            ResolutionProof out{rp.matrix, {}};
            std::vector<int> renumber(rp.steps.size(), -1);
            for (std::size_t i = 0; i < rp.steps.size(); ++i)
            {
                if (!keep[i])
                    continue;
                renumber[i] = static_cast<int>(out.steps.size());
                ResStep s = rp.steps[i];
                for (int &q : s.parents)
                    q = renumber[static_cast<std::size_t>(q)];
                out.steps.push_back(std::move(s));
            }
            return out;
        }
    } // namespace

    ResolutionProof cm_to_resolution(const ConnectionProof &p, std::uint64_t replay_budget)
    {
        std::optional<DerivationDag> dag = p.dag;
        if (!dag)
            dag = replay_dag(p, replay_budget);
        if (!dag)
            throw TranslationError("no derivation DAG could be replayed for the proof");
        ResolutionProof rp = ToResolution(p, *dag).run();
        auto verdict = check_resolution_proof(rp);
        if (!verdict.accepted)
            throw TranslationError("translated proof rejected at step " + std::to_string(verdict.failed_step) +
                                   ": " + verdict.reason);
        return rp;
    }

    ConnectionProof resolution_to_cm(const ResolutionProof &rp)
    {
        auto verdict = check_resolution_proof(rp);
        if (!verdict.accepted)
            throw TranslationError("input resolution proof does not check: " + verdict.reason);
        ResolutionProof proof = pruned(rp);
        std::string last_failure = "no unifier";
        for (Sharing sharing : {Sharing::all, Sharing::ground, Sharing::none})
        {
            ConnectionProof p = ToConnections(proof, sharing).run();
            auto sigma = joint_unifier(p);
            if (!sigma)
                continue;
            p.substitution = std::move(*sigma);
            ProofVerdict v = check_proof(p);
            if (!v.accepted())
            {
                last_failure = v.reason + (v.open_path ? " on path " + v.open_path->to_string() : "");
                continue;
            }
            ConnectionProof merged = factorize_to_fixpoint(p).proof;
            ProofVerdict mv = check_proof(merged);
            if (!mv.accepted())
                throw TranslationError("factorized translation rejected: " + mv.reason);
            return merged;
        }
        throw TranslationError("translated connection proof rejected: " + last_failure);
    }

    LinearitySummary measure_linearity(const std::vector<LinearityItem> &corpus)
    {
        LinearitySummary out;
        auto record = [&](TranslationReport r)
        {
            if (r.input_size > 0)
                r.ratio = static_cast<double>(r.output_size) / r.input_size;
            if (r.accepted)
            {
                auto key = std::make_pair(r.group, r.direction);
                auto [it, fresh] = out.max_ratio.try_emplace(key, r.ratio);
                if (!fresh)
                    it->second = std::max(it->second, r.ratio);
            }
            out.reports.push_back(std::move(r));
        };
        for (const auto &item : corpus)
        {
            if (item.cm)
            {
                TranslationReport r;
                r.instance = item.instance;
                r.group = item.group;
                r.direction = Direction::cm_to_resolution;
                r.input_size = item.cm->connection_count();
                try
                {
                    ResolutionProof rp = cm_to_resolution(*item.cm);
                    r.output_size = rp.step_count();
                    r.factoring_steps = rp.factoring_steps();
                    auto v = check_resolution_proof(rp);
                    r.accepted = v.accepted;
                    r.reason = v.reason;
                }
                catch (const TranslationError &e)
                {
                    r.reason = e.what();
                }
                record(std::move(r));
            }
            if (item.resolution)
            {
                TranslationReport r;
                r.instance = item.instance;
                r.group = item.group;
                r.direction = Direction::resolution_to_cm;
                r.input_size = item.resolution->step_count();
                try
                {
                    ConnectionProof cp = resolution_to_cm(*item.resolution);
                    r.output_size = cp.connection_count();
                    auto v = check_proof(cp);
                    r.accepted = v.accepted();
                    r.reason = v.reason;
                }
                catch (const TranslationError &e)
                {
                    r.reason = e.what();
                }
                record(std::move(r));
            }
        }
        return out;
    }

} // namespace fcm
