// Command-line front end: parse, clausify, prove, check, translate, compare, gen.
// Exit status: 0 proved / accepted, 1 no proof within bounds / rejected, 2 usage or internal error.

#include "fcm/bridge.hpp"
#include "fcm/factorization.hpp"
#include "fcm/harness.hpp"
#include "fcm/json_io.hpp"
#include "fcm/matrix.hpp"
#include "fcm/resolution.hpp"
#include "fcm/search.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fcm;

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_no = 1;
    constexpr int exit_error = 2;

    struct Options
    {
        std::string input;
        std::string family;
        std::vector<std::string> families;
        std::string format = "text";
        std::string factorization = "off";
        std::string minimal = "none";
        bool resolution = false;
        bool fixpoint = false;
        bool report = false;
        bool timings = false;
        bool max_mult_given = false;
        int max_mult = SearchConfig{}.max_multiplicity;
        // Unshared doubling-chain proofs need 2^(n-1) copies of some clauses.
        int compare_max_mult = 64;
        int max_total = 0;
        int depth = SearchConfig{}.max_depth;
        std::uint64_t path_cap = default_path_cap;
        std::uint64_t budget = SearchConfig{}.node_budget;
        int max_steps = 12;
    };

    std::string read_input(const std::string &path)
    {
        if (path.empty() || path == "-")
        {
            std::ostringstream ss;
            ss << std::cin.rdbuf();
            return ss.str();
        }
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot read " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Formula input_formula(const Options &o)
    {
        if (!o.family.empty())
            return gen_family(parse_family_spec(o.family));
        return parse_formula(read_input(o.input));
    }

    SearchConfig search_config(const Options &o)
    {
        SearchConfig cfg;
        cfg.factorization = o.factorization == "on";
        cfg.max_multiplicity = o.max_mult;
        cfg.max_total_multiplicity = o.max_total;
        cfg.max_depth = o.depth;
        cfg.path_cap = o.path_cap;
        cfg.node_budget = o.budget;
        return cfg;
    }

    bool json_out(const Options &o) { return o.format == "json"; }

    void print_json(const Json &j, bool lines = false)
    {
        std::cout << (lines ? j.dump() : j.dump(2)) << "\n";
    }

    void print_connection_proof(std::ostream &os, const ConnectionProof &p)
    {
        os << "multiplicity:";
        for (int k : p.multiplicity)
            os << " " << k;
        os << "\nconnections: " << p.connection_count() << "\n";
        AmplifiedMatrix am(p.matrix, p.multiplicity);
        for (const auto &c : p.connections)
            os << "  " << am.literal(c.first).to_string() << " [" << c.first.clause << "." << c.first.literal
                      << "/" << c.first.copy << "]  --  " << am.literal(c.second).to_string() << " ["
                      << c.second.clause << "." << c.second.literal << "/" << c.second.copy << "]\n";
        os << "substitution: " << p.substitution.to_string() << "\n";
    }

    void print_resolution_proof(std::ostream &os, const ResolutionProof &rp)
    {
        for (std::size_t i = 0; i < rp.steps.size(); ++i)
        {
            const ResStep &s = rp.steps[i];
            os << i << ": " << to_string(s.clause) << "  " << to_string(s.kind);
            if (s.kind == ResKind::input)
                os << " " << s.source;
            else
            {
                os << " (";
                for (std::size_t k = 0; k < s.parents.size(); ++k)
                    os << (k ? "," : "") << s.parents[k] << ":" << s.positions[k];
                os << ")";
            }
            os << "\n";
        }
        os << "steps: " << rp.step_count() << " (" << rp.factoring_steps() << " factoring)\n";
    }

    int cmd_parse(const Options &o)
    {
        Formula f = input_formula(o);
        if (json_out(o))
            print_json(Json{{"formula", f.to_string()}});
        else
            std::cout << f.to_string() << "\n";
        return exit_ok;
    }

    int cmd_clausify(const Options &o)
    {
        Matrix m = clausify(input_formula(o));
        if (json_out(o))
            print_json(Json{{"matrix", to_json(m)}});
        else
            std::cout << m.to_string();
        return exit_ok;
    }

    int prove_resolution(const Options &o, const Matrix &m)
    {
        ResolutionOutcome out = o.minimal != "none" ? minimal_resolution_proof(m, o.max_steps, o.budget) : saturate(m);
        if (out.proof && !check_resolution_proof(*out.proof).accepted)
            throw std::runtime_error("internal error: resolution proof rejected by the checker");
        if (json_out(o))
        {
            Json j;
            j["status"] = to_string(out.status);
            if (out.proof)
                j["proof"] = to_json(*out.proof);
            j["given"] = out.given;
            j["generated"] = out.generated;
            if (o.timings)
                j["wall_ms"] = out.wall_ms;
            print_json(j);
        }
        else
        {
            std::cout << "status: " << to_string(out.status) << "\n";
            if (out.proof)
                print_resolution_proof(std::cout, *out.proof);
        }
        return out.proof ? exit_ok : exit_no;
    }

    int cmd_prove(const Options &o)
    {
        Matrix m = clausify(input_formula(o));
        if (o.resolution)
            return prove_resolution(o, m);
        SearchConfig cfg = search_config(o);
        SearchOutcome out;
        if (o.minimal == "tree")
            out = minimal_proof(m, cfg, MinimalMode::tree_realizable);
        else if (o.minimal == "unrestricted")
            out = minimal_proof(m, cfg, MinimalMode::unrestricted);
        else
            out = prove(m, cfg);

        std::optional<FactorMap> phi;
        if (out.proof)
        {
            phi = find_factorizations(*out.proof);
            if (o.fixpoint)
                out.proof = factorize_to_fixpoint(*out.proof).proof;
            if (!check_proof(*out.proof, o.path_cap).accepted())
                throw std::runtime_error("internal error: proof rejected by the checker");
        }
        if (json_out(o))
        {
            Json j;
            j["status"] = to_string(out.status);
            if (out.proof)
            {
                j["proof"] = to_json(*out.proof);
                j["factorization"] = to_json(*phi);
                j["sizes"] = to_json(size_report(*out.proof));
            }
            j["stats"] = to_json(out.stats, o.timings);
            print_json(j);
        }
        else
        {
            std::cout << "status: " << to_string(out.status) << "\n";
            if (out.proof)
                print_connection_proof(std::cout, *out.proof);
            std::cout << "search nodes: " << out.stats.nodes << "\n";
            if (o.timings)
                std::cout << "wall ms: " << out.stats.wall_ms << "\n";
        }
        return out.proof ? exit_ok : exit_no;
    }

    // Accepts a bare proof or the output of `prove --format json`.
    Json proof_object(const Json &j)
    {
        return j.is_object() && j.contains("proof") ? j.at("proof") : j;
    }

    int cmd_check(const Options &o)
    {
        Json j = proof_object(parse_json(read_input(o.input)));
        bool accepted;
        std::string reason;
        if (is_resolution_proof_json(j))
        {
            ResolutionVerdict v = check_resolution_proof(resolution_proof_from_json(j));
            accepted = v.accepted;
            if (!accepted)
                reason = "step " + std::to_string(v.failed_step) + ": " + v.reason;
        }
        else
        {
            ConnectionProof p = connection_proof_from_json(j);
            ProofVerdict v = check_proof(p, o.path_cap);
            if (v.status == ProofVerdict::Status::indeterminate)
                throw std::runtime_error("path cap exceeded: " + v.reason);
            accepted = v.accepted();
            reason = v.reason;
            if (v.open_path)
                reason += " open path " + v.open_path->to_string();
            if (accepted && p.dag)
                if (auto bad = dag_violation(p))
                {
                    accepted = false;
                    reason = "dag: " + *bad;
                }
        }
        if (json_out(o))
        {
            Json out{{"verdict", accepted ? "accepted" : "rejected"}};
            if (!reason.empty())
                out["reason"] = reason;
            print_json(out, true);
        }
        else
            std::cout << (accepted ? "accepted" : "rejected: " + reason) << "\n";
        return accepted ? exit_ok : exit_no;
    }

    int cmd_translate(const Options &o)
    {
        Json j = proof_object(parse_json(read_input(o.input)));
        LinearityItem item{o.input.empty() ? "-" : o.input, "cli", std::nullopt, std::nullopt};
        Json translated;
        std::ostringstream text;
        if (is_resolution_proof_json(j))
        {
            item.resolution = resolution_proof_from_json(j);
            if (!o.report)
            {
                ConnectionProof p = resolution_to_cm(*item.resolution);
                translated = to_json(p);
                print_connection_proof(text, p);
            }
        }
        else
        {
            item.cm = connection_proof_from_json(j);
            if (!o.report)
            {
                ResolutionProof rp = cm_to_resolution(*item.cm);
                translated = to_json(rp);
                print_resolution_proof(text, rp);
            }
        }
        if (o.report)
        {
            TranslationReport r = measure_linearity({item}).reports.at(0);
            if (json_out(o))
                print_json(to_json(r), true);
            else
                std::cout << to_string(r.direction) << ": " << r.input_size << " -> " << r.output_size
                          << " ratio " << r.ratio << (r.accepted ? " accepted" : " rejected: " + r.reason) << "\n";
            return r.accepted ? exit_ok : exit_no;
        }
        if (json_out(o))
            print_json(translated);
        else
            std::cout << text.str();
        return exit_ok;
    }

    // "name:n" or "name:a-b".
    std::vector<FamilySpec> expand_families(const std::vector<std::string> &args)
    {
        std::vector<FamilySpec> out;
        for (const auto &a : args)
        {
            auto colon = a.find(':');
            auto dash = a.find('-', colon == std::string::npos ? 0 : colon);
            if (colon == std::string::npos || dash == std::string::npos)
            {
                out.push_back(parse_family_spec(a));
                continue;
            }
            FamilySpec lo = parse_family_spec(a.substr(0, dash));
            FamilySpec hi = parse_family_spec(a.substr(0, colon + 1) + a.substr(dash + 1));
            for (int n = lo.n; n <= hi.n; ++n)
                out.push_back({lo.family, n});
        }
        return out;
    }

    std::string cell(const ProverColumn &c)
    {
        return c.sizes ? std::to_string(c.sizes->connections) : to_string(c.status);
    }

    int cmd_compare(const Options &o)
    {
        std::vector<std::string> fams = o.families;
        if (!o.family.empty())
            fams.push_back(o.family);
        if (fams.empty())
            throw CLI::ValidationError("compare needs at least one --family");
        CompareConfig cfg;
        cfg.search = search_config(o);
        if (!o.max_mult_given)
            cfg.search.max_multiplicity = o.compare_max_mult;
        RunReport report = run_compare(expand_families(fams), cfg);
        bool clean = true;
        for (const auto &row : report.rows)
        {
            clean = clean && row.errors.empty();
            if (json_out(o))
            {
                print_json(to_json(row, o.timings), true);
                continue;
            }
            std::cout << row.spec.name() << "  off=" << cell(row.off) << "  on=" << cell(row.on) << "  resolution="
                      << (row.resolution.checked ? std::to_string(row.resolution.steps)
                                                 : to_string(row.resolution.status));
            for (const auto &t : row.translations)
                std::cout << "  " << to_string(t.direction) << "=" << t.ratio;
            for (const auto &e : row.errors)
                std::cout << "  error: " << e;
            std::cout << "\n";
        }
        return clean ? exit_ok : exit_no;
    }

    int cmd_gen(const Options &o)
    {
        FamilySpec spec = parse_family_spec(o.family);
        if (json_out(o))
            print_json(Json{{"family", spec.name()}, {"formula", family_text(spec)}});
        else
            std::cout << family_text(spec) << "\n";
        return exit_ok;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Connection-method prover with proof factorization, resolution baseline and translators"};
    app.require_subcommand(1);
    Options o;

    auto add_format = [&](CLI::App *c)
    {
        c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        c->add_flag("--timings", o.timings, "Include wall-clock times");
    };
    auto add_input = [&](CLI::App *c)
    {
        c->add_option("input", o.input, "Input file, - for stdin");
    };
    auto add_family = [&](CLI::App *c)
    {
        return c->add_option("--family", o.family, "Generated instance, name:n");
    };
    auto add_search = [&](CLI::App *c)
    {
        c->add_option("--factorization", o.factorization, "Share solved copies")->check(CLI::IsMember({"on", "off"}));
        c->add_option("--max-mult", o.max_mult, "Copies per clause")->check(CLI::PositiveNumber);
        c->add_option("--max-total", o.max_total, "Total copies, 0 for the sum of per-clause bounds")
            ->check(CLI::NonNegativeNumber);
        c->add_option("--depth", o.depth, "Maximum tableau depth")->check(CLI::PositiveNumber);
        c->add_option("--budget", o.budget, "Search node budget")->check(CLI::PositiveNumber);
    };
    auto add_path_cap = [&](CLI::App *c)
    {
        c->add_option("--path-cap", o.path_cap, "Checker node cap")->check(CLI::PositiveNumber);
    };

    auto *parse = app.add_subcommand("parse", "Parse and print a formula");
    add_input(parse);
    add_family(parse);
    add_format(parse);

    auto *clausify_cmd = app.add_subcommand("clausify", "Print the clausal form of the negated formula");
    add_input(clausify_cmd);
    add_family(clausify_cmd);
    add_format(clausify_cmd);

    auto *prove_cmd = app.add_subcommand("prove", "Search for a proof");
    add_input(prove_cmd);
    add_family(prove_cmd);
    add_format(prove_cmd);
    add_search(prove_cmd);
    add_path_cap(prove_cmd);
    prove_cmd->add_option("--minimal", o.minimal, "Exhaustive minimum")->check(CLI::IsMember({"none", "tree", "unrestricted"}));
    prove_cmd->add_flag("--fixpoint", o.fixpoint, "Factorize the result to fixpoint");
    prove_cmd->add_flag("--resolution", o.resolution, "Use the resolution prover");
    prove_cmd->add_option("--max-steps", o.max_steps, "Step bound for --resolution --minimal")->check(CLI::PositiveNumber);

    auto *check = app.add_subcommand("check", "Check a proof JSON file");
    add_input(check);
    add_format(check);
    add_path_cap(check);

    auto *translate = app.add_subcommand("translate", "Translate a proof between the two calculi");
    add_input(translate);
    add_format(translate);
    translate->add_flag("--report", o.report, "Print the translation report instead of the proof");

    auto *compare = app.add_subcommand("compare", "Run both provers and translations over generated families");
    compare->add_option("--family", o.families, "name:n or name:a-b, repeatable")->required();
    add_format(compare);
    add_search(compare);
    add_path_cap(compare);

    auto *gen = app.add_subcommand("gen", "Print a generated formula");
    add_family(gen)->required();
    add_format(gen);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_error;
    }

    o.max_mult_given = compare->count("--max-mult") > 0;
    try
    {
        if (*parse)
            return cmd_parse(o);
        if (*clausify_cmd)
            return cmd_clausify(o);
        if (*prove_cmd)
            return cmd_prove(o);
        if (*check)
            return cmd_check(o);
        if (*translate)
            return cmd_translate(o);
        if (*compare)
            return cmd_compare(o);
        if (*gen)
            return cmd_gen(o);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
