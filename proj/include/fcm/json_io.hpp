#pragma once

#include "fcm/bridge.hpp"
#include "fcm/factorization.hpp"
#include "fcm/harness.hpp"
#include "fcm/matrix.hpp"
#include "fcm/resolution.hpp"
#include "fcm/search.hpp"

#include <json.hpp>

#include <stdexcept>

namespace fcm
{

    using Json = nlohmann::ordered_json;

    class JsonFormatError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Terms and literals are strings in the formula syntax; copy variables print as NAME_k.
    // Occurrence copies are [flat occurrence index, copy].

    Json to_json(const Matrix &m);
    Matrix matrix_from_json(const Json &j);

    Json to_json(const DerivationDag &dag, const Matrix &m);
    DerivationDag dag_from_json(const Json &j, const Matrix &m);

    // Fields: matrix, multiplicity, connections, substitution and, when present, dag.
    Json to_json(const ConnectionProof &p);
    ConnectionProof connection_proof_from_json(const Json &j);

    Json to_json(const ResolutionProof &rp);
    ResolutionProof resolution_proof_from_json(const Json &j);

    // Wall time is included only when timings is set, so reports stay byte-stable.
    Json to_json(const SearchStats &s, bool timings);
    Json to_json(const FactorMap &phi);
    Json to_json(const SizeReport &s);
    Json to_json(const TranslationReport &r);
    // One report line per instance.
    Json to_json(const RunRow &row, bool timings);

    // Resolution proofs have "steps"; connection proofs have "connections".
    bool is_resolution_proof_json(const Json &j);

    Json parse_json(std::string_view text);

} // namespace fcm
