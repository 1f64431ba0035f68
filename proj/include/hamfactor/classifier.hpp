#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamfactor/dsolver.hpp"
#include "hamfactor/jordan.hpp"
#include "hamfactor/matrix.hpp"

namespace hamfactor {

enum class Verdict { Symplectic, Presymplectic, Poisson, Dirac, ProperBigIsotropic, Trivial };

const char* verdict_name(Verdict v);

struct StructureClass {
    Verdict verdict = Verdict::Trivial;
    std::optional<RatMatrix> omega_sharp;    // D * B^-1 when B is invertible
    std::optional<RatMatrix> pi_sharp;       // B * D^-1 when D is invertible
    std::optional<RatMatrix> kernel_witness; // v != 0 with Bv = 0 and Dv = 0
};

/// Classifies the pair. Preconditions (d symmetric, d*b skew-symmetric) are
/// checked; a violation throws ContractError naming offending entries.
/// Verdict Trivial is reported exactly when d == 0.
StructureClass classify(const RatMatrix& b, const RatMatrix& d);

/// Type of the subbundle {(Bz, Dz)} regardless of whether the pairing d*b
/// vanishes: a zero Poisson or presymplectic structure keeps its name here.
/// Used for the structure attached to an integrable system.
StructureClass classify_subbundle(const RatMatrix& b, const RatMatrix& d);

struct Casimir {
    RatMatrix covector;       // c with H_c(u) = c^t u
    RatMatrix kernel_witness; // eta in ker B with c = D * eta
};

struct IsotropicField {
    RatMatrix direction; // xi in ker D \ ker B
    RatMatrix field;     // B * xi
};

struct ConservedReport {
    RatMatrix hamiltonian; // S with H(u) = 1/2 u^t S u; equals d
    std::vector<Casimir> casimirs;
    std::vector<IsotropicField> isotropic_fields;
};

ConservedReport conserved_report(const RatMatrix& b, const RatMatrix& d);

/// Evidence that no member of the zero-group family is invertible: after
/// peeling odd blocks and equal-size even pairs, the reduced multiset has a
/// largest even block with no partner, and the first column of that block
/// is identically zero in the reduced spec's parametric family.
struct ZeroBlockObstruction {
    std::vector<int> reduced_sizes;
    int block_size = 0;
    int column = 0; // 1-based column in the reduced family
};

struct InvertibleChoice {
    std::optional<std::pair<Assignment, RatMatrix>> choice; // assignment + zero-group D
    std::optional<ZeroBlockObstruction> obstruction;
};

/// Constructive invertibility for the zero-eigenvalue group of the family:
/// succeeds exactly when the nilpotent blocks are all odd-sized or even
/// sizes pair up. The assignment uses the family's parameter names (other
/// groups' parameters are simply absent, i.e. zero).
InvertibleChoice invertible_choice(const JordanSpec& spec, const DFamily& family);

} // namespace hamfactor
