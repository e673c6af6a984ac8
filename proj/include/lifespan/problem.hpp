#pragma once

#include "lifespan/profiles.hpp"
#include "lifespan/rational.hpp"

namespace lifespan {

/// One instance of the half-space problem: dimension, nonlinearity exponent,
/// and initial data kappa * psi.
struct ProblemSpec {
    int N = 1;
    Exponent p;
    double kappa = 1.0;
    InitialProfile profile;

    /// Throws DomainError unless N >= 1, p > 1, kappa > 0.
    void validate() const {
        if (N < 1) throw DomainError("N must be >= 1");
        if (!(p.value > 1.0)) throw DomainError("p must be > 1");
        if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
    }
};

}  // namespace lifespan
