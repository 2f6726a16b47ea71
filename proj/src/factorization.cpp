#include "fcm/factorization.hpp"

#include "fcm/search.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace fcm
{

    FactorMap FactorMap::identity(const Multiplicity &mu)
    {
        FactorMap phi;
        for (int count : mu)
        {
            std::vector<std::vector<int>> groups;
            for (int k = 1; k <= count; ++k)
                groups.push_back({k});
            phi.groups.push_back(std::move(groups));
        }
        return phi;
    }

    bool FactorMap::is_identity() const
    {
        for (const auto &clause : groups)
            for (const auto &g : clause)
                if (g.size() != 1)
                    return false;
        return true;
    }

    namespace
    {
        // Instance of copy k of clause c, its own unbound variables renamed canonically.
        Clause normalized_instance(const ConnectionProof &p, int c, int k)
        {
            Clause inst = apply_subst(p.substitution, fresh_variant(p.matrix.clause(c), k));
            std::set<Var> own;
            collect_variables(fresh_variant(p.matrix.clause(c), k), own);
            Substitution rename;
            int next = 0;
            std::set<Var> seen;
            for (const auto &lit : inst)
            {
                std::function<void(const Term &)> walk = [&](const Term &t)
                {
                    if (t.is_variable())
                    {
                        if (own.count(t.var()) && seen.insert(t.var()).second)
                            rename.bind(t.var(), Term::variable("_", ++next));
                        return;
                    }
                    for (const auto &a : t.args())
                        walk(a);
                };
                for (const auto &a : lit.args)
                    walk(a);
            }
            return apply_subst(rename, inst);
        }

        void validate_shape(const ConnectionProof &p, const FactorMap &phi)
        {
            if (static_cast<int>(phi.groups.size()) != p.matrix.size() ||
                static_cast<int>(p.multiplicity.size()) != p.matrix.size())
                throw std::invalid_argument("factor map does not cover every clause");
            for (int c = 0; c < p.matrix.size(); ++c)
            {
                std::vector<int> all;
                for (const auto &g : phi.groups[static_cast<std::size_t>(c)])
                {
                    if (g.empty() || !std::is_sorted(g.begin(), g.end()))
                        throw std::invalid_argument("factor groups must be nonempty and sorted");
                    all.insert(all.end(), g.begin(), g.end());
                }
                std::sort(all.begin(), all.end());
                std::vector<int> expected;
                for (int k = 1; k <= p.multiplicity[static_cast<std::size_t>(c)]; ++k)
                    expected.push_back(k);
                if (all != expected)
                    throw std::invalid_argument("factor groups of clause " + std::to_string(c) +
                                                " do not partition its copies");
            }
        }
    } // namespace

    FactorMap find_factorizations(const ConnectionProof &p)
    {
        FactorMap phi;
        for (int c = 0; c < p.matrix.size(); ++c)
        {
            std::map<Clause, std::vector<int>> by_instance;
            std::vector<Clause> order;
            for (int k = 1; k <= p.multiplicity[static_cast<std::size_t>(c)]; ++k)
            {
                Clause key = normalized_instance(p, c, k);
                auto [it, fresh] = by_instance.try_emplace(key);
                if (fresh)
                    order.push_back(key);
                it->second.push_back(k);
            }
            std::vector<std::vector<int>> groups;
            for (const auto &key : order)
                groups.push_back(by_instance[key]);
            phi.groups.push_back(std::move(groups));
        }
        return phi;
    }

    ConnectionProof apply_factorization(const ConnectionProof &p, const FactorMap &phi)
    {
        validate_shape(p, phi);
        const int clauses = p.matrix.size();

        // Old copy index -> new dense index, and the variable renaming that goes with it.
        std::vector<std::vector<int>> target(static_cast<std::size_t>(clauses));
        Substitution rename;
        std::set<Var> representatives;
        Multiplicity mu;
        for (int c = 0; c < clauses; ++c)
        {
            auto groups = phi.groups[static_cast<std::size_t>(c)];
            std::sort(groups.begin(), groups.end());
            target[static_cast<std::size_t>(c)].assign(static_cast<std::size_t>(p.multiplicity[static_cast<std::size_t>(c)]) + 1, 0);
            std::set<Var> base;
            collect_variables(p.matrix.clause(c), base);
            for (std::size_t g = 0; g < groups.size(); ++g)
            {
                const int rep = groups[g].front();
                const Clause rep_instance = normalized_instance(p, c, rep);
                for (int k : groups[g])
                {
                    if (normalized_instance(p, c, k) != rep_instance)
                        throw FactorizationError("clause " + std::to_string(c) + " copies " + std::to_string(rep) +
                                                     " and " + std::to_string(k) + " have different instances: " +
                                                     to_string(apply_subst(p.substitution, fresh_variant(p.matrix.clause(c), rep))) +
                                                     " vs " +
                                                     to_string(apply_subst(p.substitution, fresh_variant(p.matrix.clause(c), k))),
                                                 c, rep, k);
                    target[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] = static_cast<int>(g) + 1;
                    for (const auto &v : base)
                        rename.bind(Var{v.name, k}, Term::variable(v.name, static_cast<int>(g) + 1));
                }
                for (const auto &v : base)
                    representatives.insert(Var{v.name, rep});
            }
            mu.push_back(static_cast<int>(groups.size()));
        }

        auto remap = [&](OccCopy o)
        {
            o.copy = target[static_cast<std::size_t>(o.clause)][static_cast<std::size_t>(o.copy)];
            return o;
        };

        ConnectionProof out;
        out.matrix = p.matrix;
        out.multiplicity = mu;
        for (const auto &conn : p.connections)
        {
            OccCopy a = remap(conn.first), b = remap(conn.second);
            // Both ends inside one copy can never lie on a common path.
            if (a.clause == b.clause && a.copy == b.copy)
                continue;
            out.connections.push_back(Connection::make(a, b));
        }
        out.normalize();

        // Keep bindings of representatives only, renamed to their new copy index.
        for (const auto &[v, t] : p.substitution.bindings())
            if (representatives.count(v))
                out.substitution.bind(rename.find(v)->var(), apply_subst(rename, t));
        return out;
    }

    FixpointResult factorize_to_fixpoint(const ConnectionProof &p)
    {
        FixpointResult r{p, 0};
        const int bound = total_multiplicity(p.multiplicity);
        for (int i = 0; i <= bound; ++i)
        {
            FactorMap phi = find_factorizations(r.proof);
            if (phi.is_identity())
                return r;
            r.proof = apply_factorization(r.proof, phi);
            ++r.iterations;
        }
        throw std::logic_error("factorization did not reach a fixpoint");
    }

    SizeReport size_report(const ConnectionProof &p)
    {
        std::optional<DerivationDag> dag = p.dag;
        if (!dag)
            dag = replay_dag(p);
        if (!dag)
            throw std::runtime_error("could not rebuild a derivation for the proof");

        SizeReport r;
        r.connections = p.connection_count();
        r.total_multiplicity = total_multiplicity(p.multiplicity);
        r.dag_nodes = dag->nodes.size();
        for (const auto &n : dag->nodes)
            r.factorization_edges += n.rule == DagRule::factorization;

        constexpr std::uint64_t top = std::numeric_limits<std::uint64_t>::max();
        std::vector<std::optional<std::uint64_t>> memo(dag->nodes.size());
        std::function<std::uint64_t(int)> unfold = [&](int id) -> std::uint64_t
        {
            auto &slot = memo[static_cast<std::size_t>(id)];
            if (slot)
                return *slot;
            std::uint64_t total = 1;
            for (int child : dag->nodes[static_cast<std::size_t>(id)].children)
            {
                std::uint64_t sub = unfold(child);
                total = sub > top - total ? top : total + sub;
            }
            slot = total;
            return total;
        };
        for (int root : dag->roots)
        {
            std::uint64_t sub = unfold(root);
            r.tree_nodes = sub > top - r.tree_nodes ? top : r.tree_nodes + sub;
        }

        std::function<int(const Term &)> count = [&](const Term &t)
        {
            int n = 1;
            for (const auto &a : t.args())
                n += count(a);
            return n;
        };
        for (int c = 0; c < p.matrix.size(); ++c)
            for (int k = 1; k <= p.multiplicity[static_cast<std::size_t>(c)]; ++k)
                for (const auto &lit : apply_subst(p.substitution, fresh_variant(p.matrix.clause(c), k)))
                {
                    r.symbols += 1;
                    for (const auto &a : lit.args)
                        r.symbols += count(a);
                }
        return r;
    }

} // namespace fcm
