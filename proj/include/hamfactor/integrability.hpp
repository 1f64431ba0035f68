#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hamfactor/classifier.hpp"
#include "hamfactor/dsolver.hpp"
#include "hamfactor/jordan.hpp"
#include "hamfactor/matrix.hpp"

namespace hamfactor {

/// All matrices commuting with the realized spec: zero across distinct
/// eigenvalue descriptors, banded Toeplitz cells within.
struct CommutantFamily {
    ParamMatrix general;
    std::vector<std::pair<std::string, RatMatrix>> basis;
    int dim = 0;
};

CommutantFamily commutant(const JordanSpec& spec);

/// Independent check: exact kernel of X -> B*X - X*B over all m^2 entries.
CommutantFamily commutant_oracle(const RatMatrix& b);

/// Greedy block pairing inside a +/- eigenvalue group: both lists sorted
/// descending and zipped positionally; leftovers of the longer list stay
/// alone. Returned indices refer to the input lists.
struct Pairing {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> leftover_plus;
    std::vector<int> leftover_minus;
};

Pairing pair_blocks(const std::vector<int>& plus_sizes, const std::vector<int>& minus_sizes);

struct TranscriptCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Transcript {
    std::vector<TranscriptCheck> checks;

    bool all_passed() const;
    std::string failed_names() const;
    const TranscriptCheck* find(const std::string& name) const;
};

struct VectorField {
    RatMatrix c;           // the field u -> c*u
    RatMatrix hamiltonian; // symmetric S_i with (c*u, S_i*u) in L_(B, D0)
};

struct QuadraticIntegral {
    RatMatrix s; // symmetric; F = 1/2 u^t S u
    bool casimir = false;
};

struct LinearIntegral {
    RatMatrix covector; // F = c^t u, a Casimir of the structure
};

struct IntegrableSystem {
    JordanSpec spec; // canonical echo
    RatMatrix b;
    RatMatrix d0;
    int p = 0;
    int q = 0;
    std::vector<VectorField> fields; // fields[0].c == b
    std::vector<QuadraticIntegral> quadratic_integrals;
    std::vector<LinearIntegral> linear_integrals;
    StructureClass structure;
    Transcript transcript;
};

/// Exact re-verification of every system property: commutation, integral
/// annihilation, counts, seeded independence ranks, and the stacked-solve
/// memberships of fields and Casimirs.
Transcript verify_system(const IntegrableSystem& sys, std::uint64_t seed = 0);

/// Builds the canonical integrable system of the spec and verifies it.
/// A failed transcript is a bug and throws InternalError.
IntegrableSystem build_integrable(const JordanSpec& spec, std::uint64_t seed = 0);

} // namespace hamfactor
