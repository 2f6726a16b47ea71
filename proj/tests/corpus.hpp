#pragma once

#include "fcm/harness.hpp"
#include "fcm/matrix.hpp"

#include <string>
#include <vector>

namespace corpus
{

    struct Entry
    {
        std::string name;
        std::string text;
        bool theorem;
    };

    inline std::vector<Entry> entries()
    {
        std::vector<Entry> out{
            {"identity", "p => p", true},
            {"modus-ponens", "p & (p => q) => q", true},
            {"instance", "(![X]: p(X)) => p(a)", true},
            {"two-instances", "p(a) & ![X]: (p(X) => q(X)) => q(a) & q(a)", true},
            {"drinker", "?[X]: (p(X) => ![Y]: p(Y))", true},
            {"case-split", "(![X]: (p(X) | q(X))) & ~q(a) => p(a)", true},
            {"skolem", "(![X]: ?[Y]: r(X,Y)) & (![X,Y]: (r(X,Y) => s(Y))) => ?[Z]: s(Z)", true},
            {"transitive", "r(a,b) & r(b,c) & (![X,Y,Z]: (r(X,Y) & r(Y,Z) => r(X,Z))) => r(a,c)", true},
            {"not-instance", "p(a) => p(b)", false},
            {"not-swap", "(?[X]: p(X)) => ![X]: p(X)", false},
            {"not-propositional", "p | q => p", false},
        };
        using fcm::Family;
        for (int n = 1; n <= 4; ++n)
            out.push_back({"linear-chain:" + std::to_string(n), fcm::family_text({Family::linear_chain, n}), true});
        for (int n = 1; n <= 3; ++n)
            out.push_back({"doubling-chain:" + std::to_string(n), fcm::family_text({Family::doubling_chain, n}), true});
        for (int n = 1; n <= 3; ++n)
            out.push_back({"nontheorem-chain:" + std::to_string(n), fcm::family_text({Family::nontheorem_chain, n}), false});
        return out;
    }

    inline fcm::Matrix matrix(const Entry &e)
    {
        return fcm::clausify(fcm::parse_formula(e.text));
    }

} // namespace corpus
