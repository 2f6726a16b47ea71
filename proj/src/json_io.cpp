#include "fcm/json_io.hpp"

namespace fcm
{

    namespace
    {
        [[noreturn]] void bad(const std::string &what)
        {
            throw JsonFormatError(what);
        }

        const Json &field(const Json &j, const char *name)
        {
            if (!j.is_object() || !j.contains(name))
                bad(std::string("missing field \"") + name + "\"");
            return j.at(name);
        }

        template <class T>
        T get(const Json &j, const char *what)
        {
            try
            {
                return j.get<T>();
            }
            catch (const nlohmann::json::exception &)
            {
                bad(std::string("wrong type for ") + what);
            }
        }

        Json clause_json(const Clause &c)
        {
            Json out = Json::array();
            for (const auto &l : c)
                out.push_back(l.to_string());
            return out;
        }

        Clause clause_from(const Json &j)
        {
            if (!j.is_array())
                bad("clause must be an array of literals");
            Clause c;
            for (const auto &l : j)
            {
                try
                {
                    c.push_back(parse_literal(get<std::string>(l, "literal")));
                }
                catch (const ParseError &e)
                {
                    bad(std::string("bad literal: ") + e.what());
                }
            }
            return c;
        }

        Json subst_json(const Substitution &s)
        {
            Json out = Json::object();
            for (const auto &[v, t] : s.bindings())
                out[v.to_string()] = t.to_string();
            return out;
        }

        Substitution subst_from(const Json &j)
        {
            if (!j.is_object())
                bad("substitution must be an object");
            Substitution s;
            for (const auto &[name, term] : j.items())
            {
                try
                {
                    Term v = parse_term(name);
                    if (!v.is_variable())
                        bad("substitution key is not a variable: " + name);
                    s.bind(v.var(), parse_term(get<std::string>(term, "term")));
                }
                catch (const ParseError &e)
                {
                    bad(std::string("bad substitution entry: ") + e.what());
                }
            }
            return s;
        }

        Json occ_json(const OccCopy &o, const Matrix &m)
        {
            return Json::array({m.flat_index(o.occ()), o.copy});
        }

        OccCopy occ_from(const Json &j, const Matrix &m)
        {
            if (!j.is_array() || j.size() != 2)
                bad("occurrence must be [occurrence, copy]");
            int flat = get<int>(j[0], "occurrence");
            if (flat < 0 || flat >= m.occurrence_count())
                bad("occurrence index out of range: " + std::to_string(flat));
            LiteralOcc o = m.occurrence(flat);
            return {o.clause, o.literal, get<int>(j[1], "copy")};
        }

        std::string rule_name(DagRule r)
        {
            switch (r)
            {
            case DagRule::extension: return "extension";
            case DagRule::reduction: return "reduction";
            case DagRule::factorization: return "factorization";
            }
            return "extension";
        }

        DagRule rule_from(const std::string &s)
        {
            if (s == "extension")
                return DagRule::extension;
            if (s == "reduction")
                return DagRule::reduction;
            if (s == "factorization")
                return DagRule::factorization;
            bad("unknown dag rule: " + s);
        }

        ResKind kind_from(const std::string &s)
        {
            for (ResKind k : {ResKind::input, ResKind::resolution, ResKind::factoring})
                if (to_string(k) == s)
                    return k;
            bad("unknown step kind: " + s);
        }
    } // namespace

    Json to_json(const Matrix &m)
    {
        Json out = Json::array();
        for (const auto &c : m.clauses())
            out.push_back(clause_json(c));
        return out;
    }

    Matrix matrix_from_json(const Json &j)
    {
        if (!j.is_array())
            bad("matrix must be an array of clauses");
        std::vector<Clause> clauses;
        for (const auto &c : j)
            clauses.push_back(clause_from(c));
        try
        {
            return Matrix(std::move(clauses));
        }
        catch (const std::invalid_argument &e)
        {
            bad(std::string("invalid matrix: ") + e.what());
        }
    }

    Json to_json(const DerivationDag &dag, const Matrix &m)
    {
        Json nodes = Json::array();
        for (const auto &n : dag.nodes)
        {
            Json node;
            node["goal"] = occ_json(n.goal, m);
            node["rule"] = rule_name(n.rule);
            node["partner"] = occ_json(n.partner, m);
            node["children"] = n.children;
            nodes.push_back(std::move(node));
        }
        Json out;
        out["start"] = Json::array({dag.start_clause, dag.start_copy});
        out["roots"] = dag.roots;
        out["nodes"] = std::move(nodes);
        return out;
    }

    DerivationDag dag_from_json(const Json &j, const Matrix &m)
    {
        DerivationDag dag;
        const Json &start = field(j, "start");
        if (!start.is_array() || start.size() != 2)
            bad("dag start must be [clause, copy]");
        dag.start_clause = get<int>(start[0], "start clause");
        dag.start_copy = get<int>(start[1], "start copy");
        dag.roots = get<std::vector<int>>(field(j, "roots"), "roots");
        for (const auto &n : field(j, "nodes"))
        {
            DagNode node;
            node.goal = occ_from(field(n, "goal"), m);
            node.rule = rule_from(get<std::string>(field(n, "rule"), "rule"));
            node.partner = occ_from(field(n, "partner"), m);
            node.children = get<std::vector<int>>(field(n, "children"), "children");
            dag.nodes.push_back(std::move(node));
        }
        return dag;
    }

    Json to_json(const ConnectionProof &p)
    {
        Json conns = Json::array();
        for (const auto &c : p.connections)
            conns.push_back(Json::array({occ_json(c.first, p.matrix), occ_json(c.second, p.matrix)}));
        Json out;
        out["matrix"] = to_json(p.matrix);
        out["multiplicity"] = p.multiplicity;
        out["connections"] = std::move(conns);
        out["substitution"] = subst_json(p.substitution);
        if (p.dag)
            out["dag"] = to_json(*p.dag, p.matrix);
        return out;
    }

    ConnectionProof connection_proof_from_json(const Json &j)
    {
        ConnectionProof p;
        p.matrix = matrix_from_json(field(j, "matrix"));
        p.multiplicity = get<Multiplicity>(field(j, "multiplicity"), "multiplicity");
        if (static_cast<int>(p.multiplicity.size()) != p.matrix.size())
            bad("multiplicity length differs from the number of clauses");
        for (const auto &c : field(j, "connections"))
        {
            if (!c.is_array() || c.size() != 2)
                bad("connection must be a pair of occurrences");
            p.connections.push_back(Connection::make(occ_from(c[0], p.matrix), occ_from(c[1], p.matrix)));
        }
        p.substitution = subst_from(field(j, "substitution"));
        if (j.contains("dag"))
            p.dag = dag_from_json(j.at("dag"), p.matrix);
        p.normalize();
        return p;
    }

    Json to_json(const ResolutionProof &rp)
    {
        Json steps = Json::array();
        for (const auto &s : rp.steps)
        {
            Json step;
            step["kind"] = to_string(s.kind);
            if (s.kind == ResKind::input)
                step["source"] = s.source;
            else
            {
                step["parents"] = s.parents;
                step["positions"] = s.positions;
                step["unifier"] = subst_json(s.unifier);
            }
            step["clause"] = clause_json(s.clause);
            steps.push_back(std::move(step));
        }
        Json out;
        out["matrix"] = to_json(rp.matrix);
        out["steps"] = std::move(steps);
        return out;
    }

    ResolutionProof resolution_proof_from_json(const Json &j)
    {
        ResolutionProof rp;
        rp.matrix = matrix_from_json(field(j, "matrix"));
        for (const auto &s : field(j, "steps"))
        {
            ResStep step;
            step.kind = kind_from(get<std::string>(field(s, "kind"), "kind"));
            if (step.kind == ResKind::input)
                step.source = get<int>(field(s, "source"), "source");
            else
            {
                step.parents = get<std::vector<int>>(field(s, "parents"), "parents");
                step.positions = get<std::vector<int>>(field(s, "positions"), "positions");
                step.unifier = subst_from(field(s, "unifier"));
            }
            step.clause = clause_from(field(s, "clause"));
            rp.steps.push_back(std::move(step));
        }
        return rp;
    }

    Json to_json(const SearchStats &s, bool timings)
    {
        Json out;
        out["nodes"] = s.nodes;
        out["unifications"] = s.unifications;
        out["rounds"] = s.rounds;
        if (timings)
            out["wall_ms"] = s.wall_ms;
        return out;
    }

    Json to_json(const FactorMap &phi)
    {
        return Json(phi.groups);
    }

    Json to_json(const SizeReport &s)
    {
        Json out;
        out["connections"] = s.connections;
        out["total_multiplicity"] = s.total_multiplicity;
        out["tree_nodes"] = s.tree_nodes;
        out["dag_nodes"] = s.dag_nodes;
        out["factorization_edges"] = s.factorization_edges;
        out["symbols"] = s.symbols;
        return out;
    }

    Json to_json(const TranslationReport &r)
    {
        Json out;
        out["instance"] = r.instance;
        out["group"] = r.group;
        out["direction"] = to_string(r.direction);
        out["input_size"] = r.input_size;
        out["output_size"] = r.output_size;
        out["factoring_steps"] = r.factoring_steps;
        out["ratio"] = r.ratio;
        out["accepted"] = r.accepted;
        if (!r.reason.empty())
            out["reason"] = r.reason;
        return out;
    }

    Json to_json(const RunRow &row, bool timings)
    {
        auto prover = [&](const ProverColumn &c)
        {
            Json out;
            out["status"] = to_string(c.status);
            out["checked"] = c.checked;
            if (c.sizes)
                out["sizes"] = to_json(*c.sizes);
            out["stats"] = to_json(c.stats, timings);
            return out;
        };
        Json res;
        res["status"] = to_string(row.resolution.status);
        res["checked"] = row.resolution.checked;
        res["steps"] = row.resolution.steps;
        res["factoring_steps"] = row.resolution.factoring_steps;
        res["given"] = row.resolution.given;
        res["generated"] = row.resolution.generated;
        if (timings)
            res["wall_ms"] = row.resolution.wall_ms;
        Json translations = Json::array();
        for (const auto &t : row.translations)
            translations.push_back(to_json(t));

        Json out;
        out["instance"] = row.spec.name();
        out["family"] = to_string(row.spec.family);
        out["n"] = row.spec.n;
        out["theorem"] = row.theorem;
        out["off"] = prover(row.off);
        out["on"] = prover(row.on);
        out["resolution"] = std::move(res);
        out["translations"] = std::move(translations);
        out["errors"] = row.errors;
        return out;
    }

    bool is_resolution_proof_json(const Json &j)
    {
        return j.is_object() && j.contains("steps");
    }

    Json parse_json(std::string_view text)
    {
        try
        {
            return Json::parse(text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            bad(std::string("malformed JSON: ") + e.what());
        }
    }

} // namespace fcm
