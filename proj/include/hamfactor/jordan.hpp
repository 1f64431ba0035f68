#pragma once

#include <vector>

#include "hamfactor/matrix.hpp"
#include "hamfactor/rational.hpp"

namespace hamfactor {

enum class BlockKind { Zero, RealPair, RealSingle, Imaginary, ComplexQuad, ComplexSingle };

const char* block_kind_name(BlockKind k);

/// One eigenvalue group of the canonical form. Sizes are counted in real
/// coordinates for the real kinds and in 2x2 cells for the complex kinds
/// (Imaginary, ComplexQuad, ComplexSingle). Size-1 entries encode the
/// non-degenerate eigenvalues of the group.
struct BlockSpec {
    BlockKind kind = BlockKind::Zero;
    Rat lambda;                          // RealPair (> 0), RealSingle (!= 0)
    Rat a;                               // ComplexQuad (> 0), ComplexSingle (!= 0)
    Rat b;                               // Imaginary / ComplexQuad / ComplexSingle (> 0)
    std::vector<int> sizes;              // Zero, RealSingle, Imaginary, ComplexSingle
    std::vector<int> sizes_plus;         // RealPair, ComplexQuad
    std::vector<int> sizes_minus;        // RealPair, ComplexQuad

    /// Realized dimension over the reals.
    int dim() const;
};

struct JordanSpec {
    std::vector<BlockSpec> blocks;

    int dim() const;
};

/// Checks every block constraint and eigenvalue disjointness, returns the
/// canonical form: sizes ascending within each list, groups ordered zero,
/// real, imaginary, complex. Throws ValidationError.
JordanSpec validate(const JordanSpec& spec);

/// Placement of one Jordan block inside the realized matrix; `size` counts
/// cells for cell-valued groups, scalars otherwise.
struct JBlock {
    int size = 0;
    int offset = 0; // scalar offset into the full matrix
};

struct Group {
    BlockKind kind = BlockKind::Zero;
    Rat lambda, a, b;
    std::vector<JBlock> blocks; // pair kinds: plus blocks then minus blocks
    int plus_count = 0;         // pair kinds only; otherwise blocks.size()
    int offset = 0;             // scalar offset of the group
    int dim = 0;                // scalar dimension of the group
    int index = 0;              // 1-based position, used in parameter prefixes

    bool cells() const {
        return kind == BlockKind::Imaginary || kind == BlockKind::ComplexQuad ||
               kind == BlockKind::ComplexSingle;
    }
    int scalar_size(const JBlock& blk) const { return cells() ? 2 * blk.size : blk.size; }
    std::string prefix() const { return "g" + std::to_string(index) + "."; }
};

/// Group layout of a canonical spec (runs validate internally).
std::vector<Group> layout(const JordanSpec& spec);

/// Canonical block-diagonal matrix of the spec. Deterministic: identical
/// specs produce identical matrices.
RatMatrix realize(const JordanSpec& spec);

/// Invertible change of basis with a verified inverse.
class Conjugation {
public:
    Conjugation(RatMatrix t, RatMatrix t_inv);
    static Conjugation from(const RatMatrix& t);

    const RatMatrix& t() const { return t_; }
    const RatMatrix& t_inv() const { return t_inv_; }
    Conjugation inverse() const { return Conjugation(t_inv_, t_); }

private:
    RatMatrix t_, t_inv_;
};

/// T^-1 * b * T.
RatMatrix conjugate(const RatMatrix& b, const Conjugation& c);

/// T^t * d * T; pairs with `conjugate` so symmetry of d and skewness of
/// d*b are preserved.
ParamMatrix pushforward_D(const ParamMatrix& d, const Conjugation& c);
RatMatrix pushforward_D(const RatMatrix& d, const Conjugation& c);

/// Accept an arbitrary matrix only with a witness: T^-1 * b * T must equal
/// realize(spec) exactly.
bool matches_spec(const RatMatrix& b, const JordanSpec& spec, const Conjugation& c);

} // namespace hamfactor
