#include "fcm/search.hpp"

#include "engine.hpp"

#include <algorithm>
#include <chrono>

namespace fcm
{

    namespace detail
    {
        Multiplicity copy_bounds(const Matrix &m, int max_mult);
        int total_bound(const Matrix &m, const SearchConfig &cfg);
    } // namespace detail

    namespace
    {
        struct Budget
        {
            std::uint64_t limit;
            std::uint64_t used = 0;
            bool hit = false;

            bool spend()
            {
                if (++used > limit)
                    hit = true;
                return !hit;
            }
        };

        // Lexicographic rank: connection count, then the sorted connection list.
        bool better(const std::vector<Connection> &a, const std::vector<Connection> &b)
        {
            if (a.size() != b.size())
                return a.size() < b.size();
            return a < b;
        }

        /**
         * Smallest spanning, unifiable connection set for one amplified
         * matrix. Branches on the connections lying on an open path; a
         * candidate rejected in one branch is excluded from its later
         * siblings, so each set is reached at most once.
         */
        class SpanningSearch
        {
        public:
            SpanningSearch(const AmplifiedMatrix &am, Budget &budget, std::uint64_t path_cap)
                : am_(am), budget_(budget), path_cap_(path_cap) {}

            std::optional<std::pair<std::vector<Connection>, Substitution>> run()
            {
                dfs();
                if (!best_)
                    return std::nullopt;
                return std::make_pair(*best_, best_sigma_);
            }

        private:
            void dfs()
            {
                if (!budget_.spend())
                    return;
                if (best_ && chosen_.size() > best_->size())
                    return;
                auto open = find_open_path(am_, chosen_, path_cap_);
                if (!open)
                {
                    std::vector<Connection> sorted = chosen_;
                    std::sort(sorted.begin(), sorted.end());
                    if (!best_ || better(sorted, *best_))
                    {
                        best_ = sorted;
                        best_sigma_ = store_.to_substitution(am_.variables());
                    }
                    return;
                }
                if (best_ && chosen_.size() >= best_->size())
                    return;

                std::vector<OccCopy> on_path;
                const Matrix &m = am_.matrix();
                for (int c = 0; c < m.size(); ++c)
                    for (int k = 1; k <= am_.multiplicity()[static_cast<std::size_t>(c)]; ++k)
                        on_path.push_back({c, open->choice[static_cast<std::size_t>(c)][static_cast<std::size_t>(k - 1)], k});
                std::vector<Connection> candidates;
                for (std::size_t i = 0; i < on_path.size(); ++i)
                    for (std::size_t j = i + 1; j < on_path.size(); ++j)
                        if (am_.literal(on_path[i]).complementary_shape(am_.literal(on_path[j])))
                        {
                            Connection c = Connection::make(on_path[i], on_path[j]);
                            if (!excluded_.count(c))
                                candidates.push_back(c);
                        }
                std::sort(candidates.begin(), candidates.end());

                std::vector<Connection> added;
                for (const auto &c : candidates)
                {
                    std::size_t m0 = store_.mark();
                    if (store_.unify(am_.literal(c.first).negated(), am_.literal(c.second)))
                    {
                        chosen_.push_back(c);
                        dfs();
                        chosen_.pop_back();
                        store_.undo(m0);
                    }
                    if (budget_.hit)
                        break;
                    excluded_.insert(c);
                    added.push_back(c);
                }
                for (const auto &c : added)
                    excluded_.erase(c);
            }

            const AmplifiedMatrix &am_;
            Budget &budget_;
            std::uint64_t path_cap_;
            BindingStore store_;
            std::vector<Connection> chosen_;
            std::set<Connection> excluded_;
            std::optional<std::vector<Connection>> best_;
            Substitution best_sigma_;
        };

        // Calls f on every multiplicity with the given total, in lexicographic order.
        template <class F>
        bool for_each_multiplicity(const Multiplicity &bounds, const std::vector<bool> &fixed, int total, F &&f)
        {
            Multiplicity mu(bounds.size(), 1);
            int free_total = total - static_cast<int>(bounds.size());
            if (free_total < 0)
                return true;
            std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int left) -> bool
            {
                if (i == bounds.size())
                    return left == 0 ? f(mu) : true;
                int most = fixed[i] ? 0 : std::min(left, bounds[i] - 1);
                for (int extra = 0; extra <= most; ++extra)
                {
                    mu[i] = 1 + extra;
                    if (!rec(i + 1, left - extra))
                        return false;
                }
                mu[i] = 1;
                return true;
            };
            return rec(0, free_total);
        }

        SearchOutcome unrestricted(const Matrix &m, const SearchConfig &cfg)
        {
            SearchOutcome out;
            Budget budget{cfg.node_budget};
            Multiplicity bounds = detail::copy_bounds(m, cfg.max_multiplicity);
            std::vector<bool> fixed;
            bool any_free = false;
            // Copies of a ground clause are identical and merge without loss.
            for (const auto &c : m.clauses())
            {
                fixed.push_back(is_ground(c));
                any_free = any_free || !is_ground(c);
            }
            const int limit = detail::total_bound(m, cfg);
            for (int total = m.size(); total <= limit && !out.proof && !budget.hit; ++total)
            {
                ++out.stats.rounds;
                std::optional<ConnectionProof> best;
                for_each_multiplicity(bounds, fixed, total, [&](const Multiplicity &mu)
                                      {
                    AmplifiedMatrix am(m, mu);
                    SpanningSearch search(am, budget, cfg.path_cap);
                    auto found = search.run();
                    if (budget.hit)
                        return false;
                    if (found && (!best || better(found->first, best->connections)))
                    {
                        ConnectionProof p;
                        p.matrix = m;
                        p.multiplicity = mu;
                        p.connections = found->first;
                        p.substitution = found->second;
                        best = std::move(p);
                    }
                    return true; });
                if (best && check_proof(*best, cfg.path_cap).accepted())
                    out.proof = std::move(best);
                if (!any_free)
                    break;
            }
            out.stats.nodes = std::min(budget.used, budget.limit);
            if (out.proof)
                out.status = SearchStatus::proved;
            else if (budget.hit)
                out.status = SearchStatus::budget_exhausted;
            else
                out.status = any_free ? SearchStatus::bounds_exhausted : SearchStatus::space_exhausted;
            return out;
        }

        SearchOutcome tree_realizable(const Matrix &m, const SearchConfig &cfg)
        {
            SearchOutcome out;
            const Multiplicity bounds = detail::copy_bounds(m, cfg.max_multiplicity);
            const int limit = detail::total_bound(m, cfg);
            bool cut_everywhere = true;
            for (int t = 1; t <= limit; ++t)
            {
                detail::EngineOptions opts;
                opts.copy_limit = t;
                opts.max_depth = cfg.max_depth;
                opts.copies = bounds;
                opts.node_budget = cfg.node_budget - out.stats.nodes;
                detail::Engine engine(m, opts);
                auto result = engine.run([&](detail::Solution &&s)
                                         {
                    ConnectionProof p;
                    p.matrix = m;
                    p.multiplicity = std::move(s.multiplicity);
                    p.connections = std::move(s.connections);
                    p.substitution = std::move(s.substitution);
                    p.dag = std::move(s.dag);
                    p.normalize();
                    if (out.proof)
                    {
                        int a = total_multiplicity(p.multiplicity), b = total_multiplicity(out.proof->multiplicity);
                        if (a > b || (a == b && !better(p.connections, out.proof->connections)))
                            return false;
                    }
                    if (check_proof(p, cfg.path_cap).accepted())
                        out.proof = std::move(p);
                    return false; });
                out.stats.nodes += std::min(engine.nodes(), opts.node_budget);
                out.stats.unifications += engine.unifications();
                out.stats.rounds = t;
                if (result == detail::Engine::Result::budget)
                {
                    out.status = SearchStatus::budget_exhausted;
                    return out;
                }
                cut_everywhere = engine.was_cut();
                // Tableaux still undiscovered use more than t copies.
                if (out.proof && total_multiplicity(out.proof->multiplicity) <= t)
                    break;
                if (!cut_everywhere)
                    break;
            }
            if (out.proof)
                out.status = SearchStatus::proved;
            else
                out.status = cut_everywhere ? SearchStatus::bounds_exhausted : SearchStatus::space_exhausted;
            return out;
        }
    } // namespace

    SearchOutcome minimal_proof(const Matrix &m, const SearchConfig &cfg, MinimalMode mode)
    {
        if (m.empty())
            throw std::invalid_argument("cannot search an empty matrix");
        auto t0 = std::chrono::steady_clock::now();
        SearchOutcome out = mode == MinimalMode::unrestricted ? unrestricted(m, cfg) : tree_realizable(m, cfg);
        out.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

} // namespace fcm
