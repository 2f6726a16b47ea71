#include "fcm/matrix.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace fcm
{

    Matrix::Matrix(std::vector<Clause> clauses) : clauses_(std::move(clauses))
    {
        for (int c = 0; c < size(); ++c)
        {
            clause_offset_.push_back(static_cast<int>(flat_to_occ_.size()));
            for (int l = 0; l < static_cast<int>(clauses_[static_cast<std::size_t>(c)].size()); ++l)
                flat_to_occ_.push_back({c, l});
        }
        std::set<Var> seen;
        for (const auto &clause : clauses_)
        {
            std::set<Var> vars;
            collect_variables(clause, vars);
            for (const auto &v : vars)
            {
                if (v.index != 0)
                    throw std::invalid_argument("matrix variable carries a copy index: " + v.to_string());
                if (!seen.insert(v).second)
                    throw std::invalid_argument("clauses share variable " + v.to_string());
            }
        }
    }

    int Matrix::flat_index(LiteralOcc o) const
    {
        if (o.clause < 0 || o.clause >= size() || o.literal < 0 ||
            o.literal >= static_cast<int>(clause(o.clause).size()))
            throw std::out_of_range("literal occurrence out of range");
        return clause_offset_[static_cast<std::size_t>(o.clause)] + o.literal;
    }

    LiteralOcc Matrix::occurrence(int flat) const
    {
        return flat_to_occ_.at(static_cast<std::size_t>(flat));
    }

    std::string Matrix::to_string() const
    {
        std::string out;
        for (int c = 0; c < size(); ++c)
            out += std::to_string(c) + ": " + fcm::to_string(clause(c)) + "\n";
        return out;
    }

    int total_multiplicity(const Multiplicity &mu)
    {
        return std::accumulate(mu.begin(), mu.end(), 0);
    }

    Multiplicity unit_multiplicity(const Matrix &m)
    {
        return Multiplicity(static_cast<std::size_t>(m.size()), 1);
    }

    Connection Connection::make(OccCopy a, OccCopy b)
    {
        if (b < a)
            std::swap(a, b);
        return {a, b};
    }

    // ---------- amplification ----------

    AmplifiedMatrix::AmplifiedMatrix(Matrix matrix, Multiplicity mu) : matrix_(std::move(matrix)), mu_(std::move(mu))
    {
        if (static_cast<int>(mu_.size()) != matrix_.size())
            throw std::invalid_argument("multiplicity must cover every clause (got " + std::to_string(mu_.size()) +
                                        " entries for " + std::to_string(matrix_.size()) + " clauses)");
        copies_.resize(mu_.size());
        for (int c = 0; c < matrix_.size(); ++c)
        {
            int k_max = mu_[static_cast<std::size_t>(c)];
            if (k_max < 1)
                throw std::invalid_argument("multiplicity of clause " + std::to_string(c) + " must be >= 1");
            for (int k = 1; k <= k_max; ++k)
                copies_[static_cast<std::size_t>(c)].push_back(fresh_variant(matrix_.clause(c), k));
        }
    }

    const Clause &AmplifiedMatrix::copy(int clause, int k) const
    {
        return copies_.at(static_cast<std::size_t>(clause)).at(static_cast<std::size_t>(k - 1));
    }

    const Literal &AmplifiedMatrix::literal(OccCopy o) const
    {
        return copy(o.clause, o.copy).at(static_cast<std::size_t>(o.literal));
    }

    int AmplifiedMatrix::copy_count() const { return total_multiplicity(mu_); }

    bool AmplifiedMatrix::contains(OccCopy o) const
    {
        return o.clause >= 0 && o.clause < matrix_.size() && o.copy >= 1 &&
               o.copy <= mu_[static_cast<std::size_t>(o.clause)] && o.literal >= 0 &&
               o.literal < static_cast<int>(matrix_.clause(o.clause).size());
    }

    std::set<Var> AmplifiedMatrix::variables() const
    {
        std::set<Var> out;
        for (const auto &per_clause : copies_)
            for (const auto &c : per_clause)
                collect_variables(c, out);
        return out;
    }

    AmplifiedMatrix amplify(const Matrix &m, const Multiplicity &mu) { return AmplifiedMatrix(m, mu); }

    // ---------- paths ----------

    bool Path::contains(OccCopy o) const
    {
        if (o.clause < 0 || o.clause >= static_cast<int>(choice.size()))
            return false;
        const auto &row = choice[static_cast<std::size_t>(o.clause)];
        if (o.copy < 1 || o.copy > static_cast<int>(row.size()))
            return false;
        return row[static_cast<std::size_t>(o.copy - 1)] == o.literal;
    }

    std::string Path::to_string() const
    {
        std::string out = "[";
        bool first = true;
        for (std::size_t c = 0; c < choice.size(); ++c)
            for (std::size_t k = 0; k < choice[c].size(); ++k)
            {
                if (!first)
                    out += ", ";
                first = false;
                out += std::to_string(c) + "." + std::to_string(choice[c][k]) + "^" + std::to_string(k + 1);
            }
        return out + "]";
    }

    TooManyPaths::TooManyPaths(std::uint64_t limit)
        : std::runtime_error("too many paths (cap " + std::to_string(limit) + ")")
    {
    }

    std::uint64_t path_count(const AmplifiedMatrix &am)
    {
        constexpr auto max = std::numeric_limits<std::uint64_t>::max();
        std::uint64_t n = 1;
        for (int c = 0; c < am.matrix().size(); ++c)
        {
            auto width = static_cast<std::uint64_t>(am.matrix().clause(c).size());
            for (int k = 0; k < am.multiplicity()[static_cast<std::size_t>(c)]; ++k)
            {
                if (width == 0)
                    return 0;
                if (n > max / width)
                    return max;
                n *= width;
            }
        }
        return n;
    }

    PathStream::PathStream(const AmplifiedMatrix &am, std::uint64_t cap) : am_(am)
    {
        if (path_count(am) > cap)
            throw TooManyPaths(cap);
        for (int c = 0; c < am.matrix().size(); ++c)
            current_.choice.emplace_back(static_cast<std::size_t>(am.multiplicity()[static_cast<std::size_t>(c)]), 0);
        done_ = path_count(am) == 0;
    }

    std::optional<Path> PathStream::next()
    {
        if (done_)
            return std::nullopt;
        if (!started_)
        {
            started_ = true;
            return current_;
        }
        for (int c = am_.matrix().size() - 1; c >= 0; --c)
        {
            auto &row = current_.choice[static_cast<std::size_t>(c)];
            int width = static_cast<int>(am_.matrix().clause(c).size());
            for (int k = static_cast<int>(row.size()) - 1; k >= 0; --k)
            {
                if (++row[static_cast<std::size_t>(k)] < width)
                    return current_;
                row[static_cast<std::size_t>(k)] = 0;
            }
        }
        done_ = true;
        return std::nullopt;
    }

    PathStream enumerate_paths(const AmplifiedMatrix &am, std::uint64_t cap) { return PathStream(am, cap); }

    // ---------- open path search ----------

    namespace
    {

        class OpenPathSearch
        {
        public:
            OpenPathSearch(const AmplifiedMatrix &am, const std::vector<Connection> &connections, std::uint64_t cap)
                : am_(am), cap_(cap)
            {
                const Matrix &m = am.matrix();
                for (int c = 0; c < m.size(); ++c)
                {
                    copy_base_.emplace_back();
                    for (int k = 1; k <= am.multiplicity()[static_cast<std::size_t>(c)]; ++k)
                    {
                        copy_base_.back().push_back(static_cast<int>(occ_of_.size()));
                        copies_.push_back({c, k});
                        for (int l = 0; l < static_cast<int>(m.clause(c).size()); ++l)
                            occ_of_.push_back({c, l, k});
                    }
                }
                partners_.resize(occ_of_.size());
                for (const auto &conn : connections)
                {
                    if (!am.contains(conn.first) || !am.contains(conn.second))
                        continue;
                    int a = id(conn.first), b = id(conn.second);
                    partners_[static_cast<std::size_t>(a)].push_back(b);
                    partners_[static_cast<std::size_t>(b)].push_back(a);
                }
                on_path_.assign(occ_of_.size(), 0);
                chosen_.assign(copies_.size(), -1);
            }

            std::optional<Path> run()
            {
                if (!search())
                    return std::nullopt;
                Path p;
                const Matrix &m = am_.matrix();
                for (int c = 0; c < m.size(); ++c)
                    p.choice.emplace_back(static_cast<std::size_t>(am_.multiplicity()[static_cast<std::size_t>(c)]), 0);
                for (std::size_t i = 0; i < copies_.size(); ++i)
                    p.choice[static_cast<std::size_t>(copies_[i].first)][static_cast<std::size_t>(copies_[i].second - 1)] =
                        chosen_[i];
                return p;
            }

        private:
            int id(OccCopy o) const
            {
                return copy_base_[static_cast<std::size_t>(o.clause)][static_cast<std::size_t>(o.copy - 1)] + o.literal;
            }

            int width(std::size_t copy_idx) const
            {
                return static_cast<int>(am_.matrix().clause(copies_[copy_idx].first).size());
            }

            int base(std::size_t copy_idx) const
            {
                const auto &[c, k] = copies_[copy_idx];
                return copy_base_[static_cast<std::size_t>(c)][static_cast<std::size_t>(k - 1)];
            }

            bool blocked(int occ) const
            {
                for (int p : partners_[static_cast<std::size_t>(occ)])
                    if (on_path_[static_cast<std::size_t>(p)])
                        return true;
                return false;
            }

            bool search()
            {
                if (++nodes_ > cap_)
                    throw TooManyPaths(cap_);
                // Most constrained unassigned copy first; a copy with no
                // unblocked literal means every extension is covered.
                std::size_t best = copies_.size();
                int best_free = std::numeric_limits<int>::max();
                for (std::size_t i = 0; i < copies_.size(); ++i)
                {
                    if (chosen_[i] >= 0)
                        continue;
                    int free = 0;
                    for (int l = 0; l < width(i); ++l)
                        free += blocked(base(i) + l) ? 0 : 1;
                    if (free < best_free)
                    {
                        best_free = free;
                        best = i;
                        if (free == 0)
                            return false;
                    }
                }
                if (best == copies_.size())
                    return true;
                for (int l = 0; l < width(best); ++l)
                {
                    int occ = base(best) + l;
                    if (blocked(occ))
                        continue;
                    chosen_[best] = l;
                    on_path_[static_cast<std::size_t>(occ)] = 1;
                    if (search())
                        return true;
                    on_path_[static_cast<std::size_t>(occ)] = 0;
                    chosen_[best] = -1;
                }
                return false;
            }

            const AmplifiedMatrix &am_;
            std::uint64_t cap_;
            std::uint64_t nodes_ = 0;
            std::vector<std::vector<int>> copy_base_;
            std::vector<std::pair<int, int>> copies_;
            std::vector<OccCopy> occ_of_;
            std::vector<std::vector<int>> partners_;
            std::vector<char> on_path_;
            std::vector<int> chosen_;
        };

    } // namespace

    std::optional<Path> find_open_path(const AmplifiedMatrix &am, const std::vector<Connection> &connections,
                                       std::uint64_t cap)
    {
        return OpenPathSearch(am, connections, cap).run();
    }

    void ConnectionProof::normalize()
    {
        for (auto &c : connections)
            c = Connection::make(c.first, c.second);
        std::sort(connections.begin(), connections.end());
        connections.erase(std::unique(connections.begin(), connections.end()), connections.end());
    }

    namespace
    {
        std::string occ_text(OccCopy o)
        {
            return "(" + std::to_string(o.clause) + "." + std::to_string(o.literal) + ")^" + std::to_string(o.copy);
        }

        ProofVerdict reject(std::string reason)
        {
            return {ProofVerdict::Status::rejected, std::move(reason), std::nullopt};
        }
    } // namespace

    ProofVerdict check_proof(const ConnectionProof &p, std::uint64_t cap)
    {
        if (p.matrix.empty())
            return reject("empty matrix");
        if (static_cast<int>(p.multiplicity.size()) != p.matrix.size())
            return reject("multiplicity does not cover every clause");
        for (std::size_t c = 0; c < p.multiplicity.size(); ++c)
            if (p.multiplicity[c] < 1)
                return reject("multiplicity of clause " + std::to_string(c) + " is below 1");
        if (!p.substitution.is_idempotent())
            return reject("substitution is not idempotent");

        AmplifiedMatrix am(p.matrix, p.multiplicity);
        auto vars = am.variables();
        for (const auto &[v, t] : p.substitution.bindings())
        {
            if (!vars.contains(v))
                return reject("substitution binds " + v.to_string() + " which is not in the amplified matrix");
            if (occurs_in(v, t))
                return reject("substitution binding for " + v.to_string() + " fails the occurs check");
        }

        for (const auto &conn : p.connections)
        {
            if (!am.contains(conn.first) || !am.contains(conn.second))
                return reject("connection endpoint outside the amplified matrix: " + occ_text(conn.first) + "-" +
                              occ_text(conn.second));
            if (conn.first == conn.second)
                return reject("connection joins an occurrence to itself: " + occ_text(conn.first));
            const Literal &a = am.literal(conn.first);
            const Literal &b = am.literal(conn.second);
            if (!a.complementary_shape(b))
                return reject("connection " + occ_text(conn.first) + "-" + occ_text(conn.second) +
                              " does not join complementary literals");
            if (apply_subst(p.substitution, a) != apply_subst(p.substitution, b).negated())
                return reject("connection " + occ_text(conn.first) + "-" + occ_text(conn.second) +
                              " is not unified: " + apply_subst(p.substitution, a).to_string() + " vs " +
                              apply_subst(p.substitution, b).to_string());
        }

        try
        {
            auto open = find_open_path(am, p.connections, cap);
            if (open)
                return {ProofVerdict::Status::rejected, "open path " + open->to_string(), open};
        }
        catch (const TooManyPaths &e)
        {
            return {ProofVerdict::Status::indeterminate, e.what(), std::nullopt};
        }
        return {ProofVerdict::Status::accepted, "", std::nullopt};
    }

    bool ground_unsat_oracle(const std::vector<Clause> &clauses, int max_atoms)
    {
        std::map<Literal, int> atom_id;
        std::vector<std::vector<std::pair<int, bool>>> encoded;
        for (const auto &c : clauses)
        {
            auto &row = encoded.emplace_back();
            for (const auto &l : c)
            {
                if (!l.is_ground())
                    throw std::invalid_argument("ground_unsat_oracle: non-ground literal " + l.to_string());
                Literal atom = l;
                atom.positive = true;
                auto [it, fresh] = atom_id.emplace(atom, static_cast<int>(atom_id.size()));
                if (fresh && static_cast<int>(atom_id.size()) > max_atoms)
                    throw AtomBudgetExceeded("more than " + std::to_string(max_atoms) + " distinct atoms");
                row.emplace_back(it->second, l.positive);
            }
        }
        const std::uint64_t assignments = std::uint64_t{1} << atom_id.size();
        for (std::uint64_t bits = 0; bits < assignments; ++bits)
        {
            bool all = true;
            for (const auto &row : encoded)
            {
                bool sat = false;
                for (const auto &[atom, pos] : row)
                    if ((((bits >> atom) & 1U) != 0) == pos)
                    {
                        sat = true;
                        break;
                    }
                if (!sat)
                {
                    all = false;
                    break;
                }
            }
            if (all)
                return false;
        }
        return true;
    }

    std::vector<Clause> ground_instances(const ConnectionProof &p)
    {
        AmplifiedMatrix am(p.matrix, p.multiplicity);
        std::vector<Clause> out;
        Substitution grounding;
        for (int c = 0; c < p.matrix.size(); ++c)
            for (int k = 1; k <= p.multiplicity[static_cast<std::size_t>(c)]; ++k)
                out.push_back(apply_subst(p.substitution, am.copy(c, k)));
        std::set<Var> rest;
        for (const auto &c : out)
            collect_variables(c, rest);
        for (const auto &v : rest)
            grounding.bind(v, Term::application("gnd"));
        for (auto &c : out)
            c = apply_subst(grounding, c);
        return out;
    }

} // namespace fcm
