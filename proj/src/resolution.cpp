#include "fcm/resolution.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <tuple>

namespace fcm
{

    std::string to_string(ResKind k)
    {
        switch (k)
        {
        case ResKind::input: return "input";
        case ResKind::resolution: return "resolution";
        case ResKind::factoring: return "factoring";
        }
        return "unknown";
    }

    std::string to_string(ResolutionStatus s)
    {
        switch (s)
        {
        case ResolutionStatus::refuted: return "refuted";
        case ResolutionStatus::saturated: return "saturated";
        case ResolutionStatus::budget_exhausted: return "budget-exhausted";
        }
        return "unknown";
    }

    int ResolutionProof::resolution_steps() const
    {
        return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const ResStep &s)
                                              { return s.kind == ResKind::resolution; }));
    }

    int ResolutionProof::factoring_steps() const
    {
        return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const ResStep &s)
                                              { return s.kind == ResKind::factoring; }));
    }

    int ResolutionProof::step_count() const { return resolution_steps() + factoring_steps(); }

    Clause normalize_variables(const Clause &c)
    {
        Substitution rename;
        int next = 0;
        std::function<void(const Term &)> walk = [&](const Term &t)
        {
            if (t.is_variable())
            {
                if (!rename.binds(t.var()))
                    rename.bind(t.var(), Term::variable("V" + std::to_string(next++)));
                return;
            }
            for (const auto &a : t.args())
                walk(a);
        };
        for (const auto &l : c)
            for (const auto &a : l.args)
                walk(a);
        return apply_subst(rename, c);
    }

    namespace
    {
        Clause without(const Clause &c, int index)
        {
            Clause out;
            for (int i = 0; i < static_cast<int>(c.size()); ++i)
                if (i != index)
                    out.push_back(c[static_cast<std::size_t>(i)]);
            return out;
        }

        bool in_range(const Clause &c, int i)
        {
            return i >= 0 && i < static_cast<int>(c.size());
        }

        bool tautology(const Clause &c)
        {
            for (std::size_t i = 0; i < c.size(); ++i)
                for (std::size_t j = i + 1; j < c.size(); ++j)
                    if (c[i] == c[j].negated())
                        return true;
            return false;
        }

        Clause resolvent_under(const Substitution &u, const Clause &a, int ia, const Clause &b, int ib)
        {
            Clause out = apply_subst(u, without(a, ia));
            Clause rest = apply_subst(u, without(b, ib));
            out.insert(out.end(), rest.begin(), rest.end());
            return normalize_variables(out);
        }

        // Keeps ancestors of the last step and renumbers them.
        ResolutionProof prune(const Matrix &m, const std::vector<ResStep> &steps, int last)
        {
            std::vector<bool> keep(steps.size(), false);
            std::vector<int> stack{last};
            while (!stack.empty())
            {
                int s = stack.back();
                stack.pop_back();
                if (keep[static_cast<std::size_t>(s)])
                    continue;
                keep[static_cast<std::size_t>(s)] = true;
                for (int p : steps[static_cast<std::size_t>(s)].parents)
                    stack.push_back(p);
            }
            std::vector<int> index(steps.size(), -1);
            ResolutionProof rp;
            rp.matrix = m;
            for (std::size_t s = 0; s < steps.size(); ++s)
            {
                if (!keep[s])
                    continue;
                index[s] = static_cast<int>(rp.steps.size());
                ResStep step = steps[s];
                for (int &p : step.parents)
                    p = index[static_cast<std::size_t>(p)];
                rp.steps.push_back(std::move(step));
            }
            return rp;
        }
    } // namespace

    std::optional<ResStep> resolve(const Clause &a, int ia, const Clause &b, int ib)
    {
        if (!in_range(a, ia) || !in_range(b, ib))
            return std::nullopt;
        Clause ra = fresh_variant(a, 1), rb = fresh_variant(b, 2);
        const Literal &la = ra[static_cast<std::size_t>(ia)];
        const Literal &lb = rb[static_cast<std::size_t>(ib)];
        if (!la.complementary_shape(lb))
            return std::nullopt;
        auto u = unify(la, lb.negated());
        if (!u)
            return std::nullopt;
        ResStep s;
        s.kind = ResKind::resolution;
        s.positions = {ia, ib};
        s.clause = resolvent_under(*u.substitution, ra, ia, rb, ib);
        s.unifier = std::move(*u.substitution);
        return s;
    }

    std::optional<ResStep> factor(const Clause &c, int keep, int remove)
    {
        if (!in_range(c, keep) || !in_range(c, remove) || keep == remove)
            return std::nullopt;
        Clause rc = fresh_variant(c, 1);
        auto u = unify(rc[static_cast<std::size_t>(keep)], rc[static_cast<std::size_t>(remove)]);
        if (!u)
            return std::nullopt;
        ResStep s;
        s.kind = ResKind::factoring;
        s.positions = {keep, remove};
        s.clause = normalize_variables(apply_subst(*u.substitution, without(rc, remove)));
        s.unifier = std::move(*u.substitution);
        return s;
    }

    ResolutionVerdict check_resolution_proof(const ResolutionProof &rp)
    {
        auto fail = [](int step, std::string why)
        { return ResolutionVerdict{false, step, std::move(why)}; };
        if (rp.steps.empty())
            return fail(-1, "empty proof");
        for (int i = 0; i < static_cast<int>(rp.steps.size()); ++i)
        {
            const ResStep &s = rp.steps[static_cast<std::size_t>(i)];
            for (int p : s.parents)
                if (p < 0 || p >= i)
                    return fail(i, "parent does not precede the step");
            auto parent = [&](int k) -> const Clause &
            { return rp.steps[static_cast<std::size_t>(s.parents[static_cast<std::size_t>(k)])].clause; };
            switch (s.kind)
            {
            case ResKind::input:
                if (!s.parents.empty())
                    return fail(i, "input step with parents");
                if (s.source < 0 || s.source >= rp.matrix.size() || rp.matrix.clause(s.source) != s.clause)
                    return fail(i, "input clause is not in the matrix");
                break;
            case ResKind::resolution:
            {
                if (s.parents.size() != 2 || s.positions.size() != 2)
                    return fail(i, "resolution needs two parents and two positions");
                Clause a = fresh_variant(parent(0), 1), b = fresh_variant(parent(1), 2);
                int ia = s.positions[0], ib = s.positions[1];
                if (!in_range(a, ia) || !in_range(b, ib))
                    return fail(i, "position out of range");
                const Literal &la = a[static_cast<std::size_t>(ia)];
                const Literal &lb = b[static_cast<std::size_t>(ib)];
                if (!la.complementary_shape(lb))
                    return fail(i, "resolved literals are not complementary");
                if (apply_subst(s.unifier, la) != apply_subst(s.unifier, lb.negated()))
                    return fail(i, "recorded unifier does not unify the resolved literals");
                if (resolvent_under(s.unifier, a, ia, b, ib) != s.clause)
                    return fail(i, "clause differs from the resolvent under the recorded unifier");
                auto mgu = resolve(parent(0), ia, parent(1), ib);
                if (!mgu || mgu->clause != s.clause)
                    return fail(i, "clause is not the most general resolvent");
                break;
            }
            case ResKind::factoring:
            {
                if (s.parents.size() != 1 || s.positions.size() != 2)
                    return fail(i, "factoring needs one parent and two positions");
                Clause c = fresh_variant(parent(0), 1);
                int keep = s.positions[0], remove = s.positions[1];
                if (!in_range(c, keep) || !in_range(c, remove) || keep == remove)
                    return fail(i, "position out of range");
                if (apply_subst(s.unifier, c[static_cast<std::size_t>(keep)]) !=
                    apply_subst(s.unifier, c[static_cast<std::size_t>(remove)]))
                    return fail(i, "recorded unifier does not unify the factored literals");
                if (normalize_variables(apply_subst(s.unifier, without(c, remove))) != s.clause)
                    return fail(i, "clause differs from the factor under the recorded unifier");
                auto mgu = factor(parent(0), keep, remove);
                if (!mgu || mgu->clause != s.clause)
                    return fail(i, "clause is not the most general factor");
                break;
            }
            }
        }
        if (!rp.steps.back().clause.empty())
            return fail(static_cast<int>(rp.steps.size()) - 1, "last clause is not empty");
        return {true, -1, ""};
    }

    ResolutionOutcome saturate(const Matrix &m, const SaturationBudget &budget)
    {
        if (m.empty())
            throw std::invalid_argument("cannot saturate an empty matrix");
        auto t0 = std::chrono::steady_clock::now();
        ResolutionOutcome out;
        std::vector<ResStep> steps;
        std::set<Clause> seen;
        std::set<std::tuple<std::size_t, int>> lightest; // (literals, step)
        std::set<int> oldest;
        std::vector<int> active;

        auto finish = [&](ResolutionStatus status)
        {
            out.status = status;
            if (status == ResolutionStatus::refuted)
                out.proof = prune(m, steps, static_cast<int>(steps.size()) - 1);
            out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            return out;
        };
        // Returns true once the empty clause is recorded.
        auto add = [&](ResStep s) -> bool
        {
            if (tautology(s.clause) || !seen.insert(normalize_variables(s.clause)).second)
                return false;
            int id = static_cast<int>(steps.size());
            std::size_t weight = s.clause.size();
            steps.push_back(std::move(s));
            lightest.insert({weight, id});
            oldest.insert(id);
            return weight == 0;
        };

        for (int c = 0; c < m.size(); ++c)
        {
            ResStep s;
            s.kind = ResKind::input;
            s.source = c;
            s.clause = m.clause(c);
            if (add(std::move(s)))
                return finish(ResolutionStatus::refuted);
        }

        std::uint64_t picks = 0;
        while (!lightest.empty())
        {
            if (out.given >= budget.max_given)
                return finish(ResolutionStatus::budget_exhausted);
            ++picks;
            int g;
            if (budget.age_ratio > 0 && picks % static_cast<std::uint64_t>(budget.age_ratio) == 0)
                g = *oldest.begin();
            else
                g = std::get<1>(*lightest.begin());
            lightest.erase({steps[static_cast<std::size_t>(g)].clause.size(), g});
            oldest.erase(g);
            ++out.given;
            active.push_back(g);

            std::vector<ResStep> fresh;
            const Clause given = steps[static_cast<std::size_t>(g)].clause;
            for (int i = 0; i < static_cast<int>(given.size()); ++i)
                for (int j = i + 1; j < static_cast<int>(given.size()); ++j)
                    if (given[static_cast<std::size_t>(i)].positive == given[static_cast<std::size_t>(j)].positive)
                        if (auto f = factor(given, i, j))
                        {
                            f->parents = {g};
                            fresh.push_back(std::move(*f));
                        }
            for (int a : active)
            {
                const Clause other = steps[static_cast<std::size_t>(a)].clause;
                for (int i = 0; i < static_cast<int>(given.size()); ++i)
                    for (int j = 0; j < static_cast<int>(other.size()); ++j)
                        if (auto r = resolve(given, i, other, j))
                        {
                            r->parents = {g, a};
                            fresh.push_back(std::move(*r));
                        }
            }
            for (auto &s : fresh)
            {
                if (++out.generated > budget.max_generated)
                    return finish(ResolutionStatus::budget_exhausted);
                if (add(std::move(s)))
                    return finish(ResolutionStatus::refuted);
            }
        }
        return finish(ResolutionStatus::saturated);
    }

    namespace
    {
        using StepKey = std::tuple<int, std::string, int, std::string, int>;

        class ShortestSearch
        {
        public:
            ShortestSearch(const Matrix &m, std::uint64_t cap) : m_(m), cap_(cap)
            {
                for (int c = 0; c < m.size(); ++c)
                {
                    ResStep s;
                    s.kind = ResKind::input;
                    s.source = c;
                    s.clause = m.clause(c);
                    keys_.insert(normalize_variables(s.clause));
                    text_.push_back(to_string(s.clause));
                    step_keys_.push_back({0, text_.back(), 0, "", 0});
                    steps_.push_back(std::move(s));
                    uses_.push_back(1);
                }
                inputs_ = static_cast<int>(steps_.size());
            }

            bool search(int length)
            {
                length_ = length;
                return dfs(0, 0);
            }

            bool exhausted() const { return nodes_ > cap_; }
            std::uint64_t nodes() const { return nodes_; }
            ResolutionProof proof() const { return prune(m_, steps_, static_cast<int>(steps_.size()) - 1); }

        private:
            StepKey key_of(const ResStep &s) const
            {
                auto text = [&](int k)
                { return text_[static_cast<std::size_t>(s.parents[static_cast<std::size_t>(k)])]; };
                if (s.kind == ResKind::factoring)
                    return {1, text(0), s.positions[0], "", s.positions[1]};
                return {2, text(0), s.positions[0], text(1), s.positions[1]};
            }

            std::vector<ResStep> candidates() const
            {
                std::vector<ResStep> out;
                const int n = static_cast<int>(steps_.size());
                for (int x = 0; x < n; ++x)
                {
                    const Clause &cx = steps_[static_cast<std::size_t>(x)].clause;
                    for (int i = 0; i < static_cast<int>(cx.size()); ++i)
                        for (int j = i + 1; j < static_cast<int>(cx.size()); ++j)
                            if (cx[static_cast<std::size_t>(i)].positive == cx[static_cast<std::size_t>(j)].positive)
                                if (auto f = factor(cx, i, j))
                                {
                                    f->parents = {x};
                                    out.push_back(std::move(*f));
                                }
                    for (int y = x; y < n; ++y)
                    {
                        const Clause &cy = steps_[static_cast<std::size_t>(y)].clause;
                        for (int i = 0; i < static_cast<int>(cx.size()); ++i)
                            for (int j = 0; j < static_cast<int>(cy.size()); ++j)
                            {
                                if (x == y && j <= i)
                                    continue;
                                if (auto r = resolve(cx, i, cy, j))
                                {
                                    r->parents = {x, y};
                                    out.push_back(std::move(*r));
                                }
                            }
                    }
                }
                return out;
            }

            bool dfs(int depth, int unused)
            {
                if (++nodes_ > cap_)
                    return false;
                const int remaining = length_ - depth;
                for (auto &cand : candidates())
                {
                    const bool last = remaining == 1;
                    if (cand.clause.empty() != last)
                        continue;
                    if (keys_.count(normalize_variables(cand.clause)))
                        continue;
                    // Canonical order: a step precedes every later step it does not feed.
                    const StepKey key = key_of(cand);
                    bool canonical = true;
                    for (int t = static_cast<int>(steps_.size()) - 1; t >= inputs_ && canonical; --t)
                    {
                        if (std::find(cand.parents.begin(), cand.parents.end(), t) != cand.parents.end())
                            break;
                        canonical = step_keys_[static_cast<std::size_t>(t)] < key;
                    }
                    if (!canonical)
                        continue;
                    int consumed = 0;
                    std::vector<int> parents = cand.parents;
                    std::sort(parents.begin(), parents.end());
                    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
                    for (int p : parents)
                        consumed += uses_[static_cast<std::size_t>(p)] == 0;
                    const int unused_after = unused - consumed + 1;
                    // Each later step consumes at most two clauses and adds one.
                    if (unused_after > remaining)
                        continue;
                    // Each later step removes at most two literals from the unused clauses.
                    int literals_after = static_cast<int>(cand.clause.size());
                    for (int t = inputs_; t < static_cast<int>(steps_.size()); ++t)
                        if (uses_[static_cast<std::size_t>(t)] == 0 &&
                            std::find(parents.begin(), parents.end(), t) == parents.end())
                            literals_after += static_cast<int>(steps_[static_cast<std::size_t>(t)].clause.size());
                    if (literals_after > 2 * (remaining - 1))
                        continue;
                    if (last)
                    {
                        if (unused_after != 1)
                            continue;
                        steps_.push_back(std::move(cand));
                        return true;
                    }
                    for (int p : parents)
                        ++uses_[static_cast<std::size_t>(p)];
                    keys_.insert(normalize_variables(cand.clause));
                    text_.push_back(to_string(cand.clause));
                    step_keys_.push_back(key);
                    steps_.push_back(cand);
                    uses_.push_back(0);
                    if (dfs(depth + 1, unused_after))
                        return true;
                    steps_.pop_back();
                    uses_.pop_back();
                    text_.pop_back();
                    step_keys_.pop_back();
                    keys_.erase(normalize_variables(cand.clause));
                    for (int p : parents)
                        --uses_[static_cast<std::size_t>(p)];
                    if (nodes_ > cap_)
                        return false;
                }
                return false;
            }

            const Matrix &m_;
            std::uint64_t cap_;
            std::uint64_t nodes_ = 0;
            int length_ = 0;
            int inputs_ = 0;
            std::vector<ResStep> steps_;
            std::vector<int> uses_;
            std::vector<std::string> text_;
            std::vector<StepKey> step_keys_;
            std::set<Clause> keys_;
        };
    } // namespace

    ResolutionOutcome minimal_resolution_proof(const Matrix &m, int max_steps, std::uint64_t cap)
    {
        if (m.empty())
            throw std::invalid_argument("cannot search an empty matrix");
        auto t0 = std::chrono::steady_clock::now();
        ResolutionOutcome out;
        out.status = ResolutionStatus::budget_exhausted;
        for (const auto &c : m.clauses())
            if (c.empty())
            {
                // The empty clause is an input: a proof without inferences.
                out.status = ResolutionStatus::refuted;
                out.proof = ResolutionProof{m, {ResStep{ResKind::input, static_cast<int>(&c - &m.clauses()[0]), {}, {}, {}, c}}};
                return out;
            }
        ShortestSearch search(m, cap);
        for (int length = 1; length <= max_steps; ++length)
        {
            if (search.search(length))
            {
                out.status = ResolutionStatus::refuted;
                out.proof = search.proof();
                break;
            }
            if (search.exhausted())
                break;
        }
        out.generated = search.nodes();
        out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

} // namespace fcm
