#include "fcm/harness.hpp"

namespace fcm
{

    namespace
    {
        ProverColumn run_prover(const Matrix &m, SearchConfig cfg, bool factorization, RunRow &row,
                                std::optional<ConnectionProof> &proof)
        {
            cfg.factorization = factorization;
            SearchOutcome out = prove(m, cfg);
            ProverColumn col;
            col.status = out.status;
            col.stats = out.stats;
            if (!out.proof)
                return col;
            const char *label = factorization ? "factorization on" : "factorization off";
            ProofVerdict v = check_proof(*out.proof);
            if (!v.accepted())
            {
                row.errors.push_back(std::string(label) + ": proof rejected: " + v.reason);
                return col;
            }
            try
            {
                col.sizes = size_report(*out.proof);
            }
            catch (const std::exception &e)
            {
                row.errors.push_back(std::string(label) + ": " + e.what());
                return col;
            }
            col.checked = true;
            proof = std::move(out.proof);
            return col;
        }

        RunRow run_instance(const FamilySpec &spec, const CompareConfig &cfg)
        {
            RunRow row;
            row.spec = spec;
            row.theorem = spec.family != Family::nontheorem_chain;
            Matrix m = clausify(gen_family(spec));

            std::optional<ConnectionProof> off_proof, on_proof;
            row.off = run_prover(m, cfg.search, false, row, off_proof);
            row.on = run_prover(m, cfg.search, true, row, on_proof);

            ResolutionOutcome res = saturate(m, cfg.saturation);
            row.resolution.status = res.status;
            row.resolution.given = res.given;
            row.resolution.generated = res.generated;
            row.resolution.wall_ms = res.wall_ms;
            if (res.proof)
            {
                ResolutionVerdict v = check_resolution_proof(*res.proof);
                if (v.accepted)
                {
                    row.resolution.checked = true;
                    row.resolution.steps = res.proof->step_count();
                    row.resolution.factoring_steps = res.proof->factoring_steps();
                }
                else
                {
                    row.errors.push_back("resolution proof rejected at step " + std::to_string(v.failed_step) +
                                         ": " + v.reason);
                    res.proof.reset();
                }
            }

            LinearityItem item{spec.name(), to_string(spec.family), on_proof, res.proof};
            for (auto &r : measure_linearity({item}).reports)
            {
                if (!r.accepted)
                    row.errors.push_back(to_string(r.direction) + ": " + r.reason);
                row.translations.push_back(std::move(r));
            }

            bool any_proof = off_proof || on_proof || res.proof;
            if (!row.theorem && any_proof)
                row.errors.push_back("proof found for a nontheorem");
            return row;
        }
    } // namespace

    RunReport run_compare(const std::vector<FamilySpec> &specs, const CompareConfig &cfg)
    {
        RunReport report;
        for (const auto &spec : specs)
        {
            try
            {
                report.rows.push_back(run_instance(spec, cfg));
            }
            catch (const std::exception &e)
            {
                RunRow row;
                row.spec = spec;
                row.theorem = spec.family != Family::nontheorem_chain;
                row.errors.push_back(e.what());
                report.rows.push_back(std::move(row));
            }
        }
        return report;
    }

} // namespace fcm
