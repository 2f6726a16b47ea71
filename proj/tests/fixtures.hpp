#pragma once

#include "fcm/matrix.hpp"

#include <string>

namespace fixtures
{

    // N0 & forall x (Nx -> Nfx) -> Nff0 & Nf0
    inline const std::string f1_text = "n(zero) & ![X]: (n(X) => n(f(X))) => n(f(f(zero))) & n(f(zero))";

    inline fcm::Term zero() { return fcm::Term::application("zero"); }
    inline fcm::Term f(fcm::Term t) { return fcm::Term::application("f", {std::move(t)}); }
    inline fcm::Term x(int copy) { return fcm::Term::variable("X", copy); }

    inline fcm::Literal n(fcm::Term t, bool positive = true)
    {
        return fcm::Literal{positive, "n", {std::move(t)}};
    }

    // {N0}, {~Nx, Nfx}, {~Nff0, ~Nf0}
    inline fcm::Matrix f1_matrix()
    {
        using fcm::Clause;
        return fcm::Matrix({Clause{n(zero())},
                            Clause{n(fcm::Term::variable("X"), false), n(f(fcm::Term::variable("X")))},
                            Clause{n(f(f(zero())), false), n(f(zero()), false)}});
    }

    inline fcm::Connection conn(int c1, int l1, int k1, int c2, int l2, int k2)
    {
        return fcm::Connection::make({c1, l1, k1}, {c2, l2, k2});
    }

    // The five-connection proof with three copies of the recursive clause,
    // copies numbered so that x1 = 0, x2 = f0, x3 = 0.
    inline fcm::ConnectionProof f1_standard_proof()
    {
        fcm::ConnectionProof p;
        p.matrix = f1_matrix();
        p.multiplicity = {1, 3, 1};
        p.connections = {conn(0, 0, 1, 1, 0, 1), conn(0, 0, 1, 1, 0, 3), conn(1, 1, 1, 1, 0, 2),
                         conn(1, 1, 2, 2, 0, 1), conn(1, 1, 3, 2, 1, 1)};
        p.substitution.bind({"X", 1}, zero());
        p.substitution.bind({"X", 2}, f(zero()));
        p.substitution.bind({"X", 3}, zero());
        p.normalize();
        return p;
    }

    // Copies 1 and 3 merged: four connections, two copies.
    inline fcm::ConnectionProof f1_factorized_proof()
    {
        fcm::ConnectionProof p;
        p.matrix = f1_matrix();
        p.multiplicity = {1, 2, 1};
        p.connections = {conn(0, 0, 1, 1, 0, 1), conn(1, 1, 1, 1, 0, 2), conn(1, 1, 2, 2, 0, 1),
                         conn(1, 1, 1, 2, 1, 1)};
        p.substitution.bind({"X", 1}, zero());
        p.substitution.bind({"X", 2}, f(zero()));
        p.normalize();
        return p;
    }

} // namespace fixtures
