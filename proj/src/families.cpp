#include "fcm/harness.hpp"

#include <charconv>
#include <stdexcept>

namespace fcm
{

    std::string to_string(Family f)
    {
        switch (f)
        {
        case Family::linear_chain: return "linear-chain";
        case Family::doubling_chain: return "doubling-chain";
        case Family::nontheorem_chain: return "nontheorem-chain";
        }
        return "unknown";
    }

    std::string FamilySpec::name() const
    {
        return to_string(family) + ":" + std::to_string(n);
    }

    int family_max(Family f)
    {
        return f == Family::doubling_chain ? 16 : 64;
    }

    FamilySpec parse_family_spec(std::string_view text)
    {
        auto colon = text.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("family spec must look like name:n");
        std::string_view name = text.substr(0, colon), num = text.substr(colon + 1);
        FamilySpec spec;
        if (name == "linear-chain")
            spec.family = Family::linear_chain;
        else if (name == "doubling-chain")
            spec.family = Family::doubling_chain;
        else if (name == "nontheorem-chain")
            spec.family = Family::nontheorem_chain;
        else
            throw std::invalid_argument("unknown family: " + std::string(name));
        auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), spec.n);
        if (ec != std::errc{} || end != num.data() + num.size())
            throw std::invalid_argument("bad family parameter: " + std::string(num));
        if (spec.n < 1 || spec.n > family_max(spec.family))
            throw std::invalid_argument("parameter out of range for " + std::string(name) + ": " + std::string(num));
        return spec;
    }

    namespace
    {
        std::string iterate_f(int times)
        {
            std::string t = "zero";
            for (int i = 0; i < times; ++i)
                t = "f(" + t + ")";
            return t;
        }
    } // namespace

    std::string family_text(const FamilySpec &spec)
    {
        if (spec.n < 1 || spec.n > family_max(spec.family))
            throw std::invalid_argument("parameter out of range for " + to_string(spec.family) + ": " +
                                        std::to_string(spec.n));
        const int n = spec.n;
        switch (spec.family)
        {
        case Family::linear_chain:
        case Family::nontheorem_chain:
        {
            std::string premise = "![X]: (n(X) => n(f(X)))";
            if (spec.family == Family::linear_chain)
                premise = "n(zero) & " + premise;
            return premise + " => n(" + iterate_f(n) + ") & n(" + iterate_f(n - 1) + ")";
        }
        case Family::doubling_chain:
        {
            std::string axioms = "p0";
            for (int i = 0; i < n; ++i)
            {
                std::string a = std::to_string(i), b = std::to_string(i + 1);
                axioms += " & (p" + a + " => q" + a + ") & (p" + a + " => r" + a + ") & (q" + a + " & r" + a + " => p" + b + ")";
            }
            return "(" + axioms + ") => p" + std::to_string(n);
        }
        }
        throw std::invalid_argument("unknown family");
    }

    Formula gen_family(const FamilySpec &spec)
    {
        return parse_formula(family_text(spec));
    }

} // namespace fcm
