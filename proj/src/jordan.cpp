#include "hamfactor/jordan.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "hamfactor/errors.hpp"

namespace hamfactor {

const char* block_kind_name(BlockKind k) {
    switch (k) {
    case BlockKind::Zero: return "zero";
    case BlockKind::RealPair: return "real_pair";
    case BlockKind::RealSingle: return "real_single";
    case BlockKind::Imaginary: return "imaginary";
    case BlockKind::ComplexQuad: return "complex_quad";
    case BlockKind::ComplexSingle: return "complex_single";
    }
    return "?";
}

int BlockSpec::dim() const {
    auto total = [](const std::vector<int>& v) {
        int s = 0;
        for (int x : v)
            s += x;
        return s;
    };
    switch (kind) {
    case BlockKind::Zero:
    case BlockKind::RealSingle:
        return total(sizes);
    case BlockKind::RealPair:
        return total(sizes_plus) + total(sizes_minus);
    case BlockKind::Imaginary:
    case BlockKind::ComplexSingle:
        return 2 * total(sizes);
    case BlockKind::ComplexQuad:
        return 2 * (total(sizes_plus) + total(sizes_minus));
    }
    return 0;
}

int JordanSpec::dim() const {
    int s = 0;
    for (const auto& b : blocks)
        s += b.dim();
    return s;
}

namespace {

void check_sizes(const std::vector<int>& sizes, const std::string& where) {
    if (sizes.empty())
        throw ValidationError(where + ": empty size list");
    for (int s : sizes)
        if (s < 1)
            throw ValidationError(where + ": block size must be >= 1");
}

int kind_order(BlockKind k) {
    switch (k) {
    case BlockKind::Zero: return 0;
    case BlockKind::RealPair:
    case BlockKind::RealSingle: return 1;
    case BlockKind::Imaginary: return 2;
    case BlockKind::ComplexQuad:
    case BlockKind::ComplexSingle: return 3;
    }
    return 4;
}

} // namespace

JordanSpec validate(const JordanSpec& spec) {
    if (spec.blocks.empty())
        throw ValidationError("spec has no blocks");

    JordanSpec out = spec;
    int zero_groups = 0;
    // Eigenvalue descriptors, folded so that opposite values collide:
    // reals by |lambda|, complex by (|a|, b); a zero `a` marks imaginary.
    std::map<Rat, int> real_seen;
    std::map<std::pair<Rat, Rat>, int> complex_seen;

    for (std::size_t bi = 0; bi < out.blocks.size(); ++bi) {
        BlockSpec& blk = out.blocks[bi];
        const std::string where = "block " + std::to_string(bi + 1) + " (" +
                                  block_kind_name(blk.kind) + ")";
        switch (blk.kind) {
        case BlockKind::Zero:
            check_sizes(blk.sizes, where);
            if (++zero_groups > 1)
                throw ValidationError(where + ": more than one zero group");
            std::sort(blk.sizes.begin(), blk.sizes.end());
            break;
        case BlockKind::RealPair:
            if (blk.lambda <= 0)
                throw ValidationError(where + ": lambda must be > 0");
            check_sizes(blk.sizes_plus, where);
            check_sizes(blk.sizes_minus, where);
            std::sort(blk.sizes_plus.begin(), blk.sizes_plus.end());
            std::sort(blk.sizes_minus.begin(), blk.sizes_minus.end());
            if (real_seen[abs(blk.lambda)]++)
                throw ValidationError(where + ": eigenvalue clashes with another block");
            break;
        case BlockKind::RealSingle:
            if (blk.lambda == 0)
                throw ValidationError(where + ": lambda must be nonzero");
            check_sizes(blk.sizes, where);
            std::sort(blk.sizes.begin(), blk.sizes.end());
            if (real_seen[abs(blk.lambda)]++)
                throw ValidationError(where + ": eigenvalue clashes with another block");
            break;
        case BlockKind::Imaginary:
            if (blk.b <= 0)
                throw ValidationError(where + ": b must be > 0");
            check_sizes(blk.sizes, where);
            std::sort(blk.sizes.begin(), blk.sizes.end());
            if (complex_seen[{Rat(0), blk.b}]++)
                throw ValidationError(where + ": eigenvalue clashes with another block");
            break;
        case BlockKind::ComplexQuad:
            if (blk.a <= 0)
                throw ValidationError(where + ": a must be > 0");
            if (blk.b <= 0)
                throw ValidationError(where + ": b must be > 0");
            check_sizes(blk.sizes_plus, where);
            check_sizes(blk.sizes_minus, where);
            std::sort(blk.sizes_plus.begin(), blk.sizes_plus.end());
            std::sort(blk.sizes_minus.begin(), blk.sizes_minus.end());
            if (complex_seen[{abs(blk.a), blk.b}]++)
                throw ValidationError(where + ": eigenvalue clashes with another block");
            break;
        case BlockKind::ComplexSingle:
            if (blk.a == 0)
                throw ValidationError(where + ": a must be nonzero");
            if (blk.b <= 0)
                throw ValidationError(where + ": b must be > 0");
            check_sizes(blk.sizes, where);
            std::sort(blk.sizes.begin(), blk.sizes.end());
            if (complex_seen[{abs(blk.a), blk.b}]++)
                throw ValidationError(where + ": eigenvalue clashes with another block");
            break;
        }
    }

    std::stable_sort(out.blocks.begin(), out.blocks.end(),
                     [](const BlockSpec& x, const BlockSpec& y) {
                         auto key = [](const BlockSpec& s) {
                             return std::tuple<int, Rat, Rat>(
                                 kind_order(s.kind),
                                 s.kind == BlockKind::RealPair || s.kind == BlockKind::RealSingle
                                     ? abs(s.lambda)
                                     : abs(s.a),
                                 s.b);
                         };
                         return key(x) < key(y);
                     });
    return out;
}

std::vector<Group> layout(const JordanSpec& spec) {
    const JordanSpec canon = validate(spec);
    std::vector<Group> groups;
    int offset = 0;
    int index = 1;
    for (const BlockSpec& blk : canon.blocks) {
        Group g;
        g.kind = blk.kind;
        g.lambda = blk.lambda;
        g.a = blk.a;
        g.b = blk.b;
        g.offset = offset;
        g.index = index++;
        const int unit = g.cells() ? 2 : 1;
        int local = 0;
        auto push = [&](const std::vector<int>& sizes) {
            for (int s : sizes) {
                g.blocks.push_back({s, offset + local});
                local += unit * s;
            }
        };
        if (blk.kind == BlockKind::RealPair || blk.kind == BlockKind::ComplexQuad) {
            push(blk.sizes_plus);
            g.plus_count = int(g.blocks.size());
            push(blk.sizes_minus);
        } else {
            push(blk.sizes);
            g.plus_count = int(g.blocks.size());
        }
        g.dim = local;
        offset += local;
        groups.push_back(std::move(g));
    }
    return groups;
}

namespace {

// J_s(lambda): lambda on the diagonal, ones on the superdiagonal.
RatMatrix real_jordan_block(const Rat& lambda, int s) {
    RatMatrix m(s, s);
    for (int i = 0; i < s; ++i) {
        m(i, i) = lambda;
        if (i + 1 < s)
            m(i, i + 1) = 1;
    }
    return m;
}

// Cell-level block: rotation cells [[a,b],[-b,a]] on the diagonal,
// identity cells on the superdiagonal. The negative branch of a quadruple
// uses cell [[-a,b],[-b,-a]], keeping b positive.
RatMatrix complex_jordan_block(const Rat& a, const Rat& b, int cells) {
    RatMatrix m(2 * cells, 2 * cells);
    for (int i = 0; i < cells; ++i) {
        m(2 * i, 2 * i) = a;
        m(2 * i, 2 * i + 1) = b;
        m(2 * i + 1, 2 * i) = -b;
        m(2 * i + 1, 2 * i + 1) = a;
        if (i + 1 < cells) {
            m(2 * i, 2 * (i + 1)) = 1;
            m(2 * i + 1, 2 * (i + 1) + 1) = 1;
        }
    }
    return m;
}

} // namespace

RatMatrix realize(const JordanSpec& spec) {
    const auto groups = layout(spec);
    int m = 0;
    for (const auto& g : groups)
        m += g.dim;
    RatMatrix out(m, m);
    for (const auto& g : groups) {
        for (std::size_t bi = 0; bi < g.blocks.size(); ++bi) {
            const JBlock& blk = g.blocks[bi];
            const bool minus = int(bi) >= g.plus_count;
            switch (g.kind) {
            case BlockKind::Zero:
                set_block(out, blk.offset, blk.offset, real_jordan_block(Rat(0), blk.size));
                break;
            case BlockKind::RealPair:
                set_block(out, blk.offset, blk.offset,
                          real_jordan_block(minus ? Rat(-g.lambda) : g.lambda, blk.size));
                break;
            case BlockKind::RealSingle:
                set_block(out, blk.offset, blk.offset, real_jordan_block(g.lambda, blk.size));
                break;
            case BlockKind::Imaginary:
                set_block(out, blk.offset, blk.offset,
                          complex_jordan_block(Rat(0), g.b, blk.size));
                break;
            case BlockKind::ComplexQuad:
                set_block(out, blk.offset, blk.offset,
                          complex_jordan_block(minus ? Rat(-g.a) : g.a, g.b, blk.size));
                break;
            case BlockKind::ComplexSingle:
                set_block(out, blk.offset, blk.offset,
                          complex_jordan_block(g.a, g.b, blk.size));
                break;
            }
        }
    }
    return out;
}

Conjugation::Conjugation(RatMatrix t, RatMatrix t_inv) : t_(std::move(t)), t_inv_(std::move(t_inv)) {
    if (t_.rows() != t_.cols() || t_inv_.rows() != t_inv_.cols() || t_.rows() != t_inv_.rows())
        throw ShapeError("conjugation: matrices must be square of equal size");
    if (t_ * t_inv_ != RatMatrix::identity(t_.rows()))
        throw ValidationError("conjugation: t * t_inv != identity");
}

Conjugation Conjugation::from(const RatMatrix& t) {
    auto inv = hamfactor::inverse(t);
    if (!inv)
        throw ValidationError("conjugation: matrix is singular");
    return Conjugation(t, *inv);
}

RatMatrix conjugate(const RatMatrix& b, const Conjugation& c) {
    if (b.rows() != b.cols() || b.rows() != c.t().rows())
        throw ShapeError("conjugate: shape mismatch");
    return c.t_inv() * b * c.t();
}

ParamMatrix pushforward_D(const ParamMatrix& d, const Conjugation& c) {
    if (d.rows() != d.cols() || d.rows() != c.t().rows())
        throw ShapeError("pushforward_D: shape mismatch");
    return transpose(c.t()) * (d * c.t());
}

RatMatrix pushforward_D(const RatMatrix& d, const Conjugation& c) {
    if (d.rows() != d.cols() || d.rows() != c.t().rows())
        throw ShapeError("pushforward_D: shape mismatch");
    return transpose(c.t()) * d * c.t();
}

bool matches_spec(const RatMatrix& b, const JordanSpec& spec, const Conjugation& c) {
    return conjugate(b, c) == realize(spec);
}

} // namespace hamfactor
