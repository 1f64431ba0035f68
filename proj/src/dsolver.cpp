#include "hamfactor/dsolver.hpp"

#include <algorithm>

#include "hamfactor/errors.hpp"

namespace hamfactor {

DFamily family_from_parametric(ParamMatrix general) {
    DFamily fam;
    fam.general = std::move(general);
    for (const std::string& name : fam.general.params())
        fam.basis.emplace_back(name, coefficient_matrix(fam.general, name));
    fam.dim = int(fam.basis.size());
    return fam;
}

namespace {

std::string slot_name(const char* stem, int row1, int col1) {
    return std::string(stem) + "_" + std::to_string(row1) + "_" + std::to_string(col1);
}

// Scalar anti-diagonal band: entries (top_row + t, top_col - t), t = 0..w,
// alternating in sign, all equal to +/- the band's parameter. `mirror`
// additionally writes the transposed positions (cross blocks).
void fill_scalar_band(ParamMatrix& d, int row0, int col0, int w, const LinForm& p, bool mirror) {
    for (int t = 0; t <= w; ++t) {
        const int r = row0 + t, c = col0 - t;
        const LinForm v = (t % 2) ? -p : p;
        d(r, c) = v;
        if (mirror)
            d(c, r) = v;
    }
}

// Diagonal block of the zero group: zero above the anti-diagonal, only the
// even bands survive the symmetry constraint, each determined by its last
// column entry.
void fill_zero_diag_block(ParamMatrix& d, int off, int s, const std::string& prefix) {
    for (int w = 0; w < s; w += 2) {
        const LinForm p = LinForm::param(prefix + slot_name("d", off + s - w, off + s));
        fill_scalar_band(d, off + s - w - 1, off + s - 1, w, p, false);
    }
}

// Cross block between blocks of sizes sa (rows, offset ra) and sb (cols,
// offset ca). All min(sa, sb) bands are free. When sa > sb the pattern is
// the transpose of the (sb, sa) pattern.
void fill_scalar_cross_block(ParamMatrix& d, int ra, int sa, int ca, int sb,
                             const std::string& prefix) {
    if (sa <= sb) {
        for (int w = 0; w < sa; ++w) {
            const LinForm p = LinForm::param(prefix + slot_name("d", ra + sa - w, ca + sb));
            fill_scalar_band(d, ra + sa - w - 1, ca + sb - 1, w, p, true);
        }
    } else {
        for (int w = 0; w < sb; ++w) {
            const LinForm p = LinForm::param(prefix + slot_name("d", ra + sa, ca + sb - w));
            for (int t = 0; t <= w; ++t) {
                const int r = ra + sa - 1 - t, c = ca + sb - w - 1 + t;
                const LinForm v = (t % 2) ? -p : p;
                d(r, c) = v;
                d(c, r) = v;
            }
        }
    }
}

// --- cell-valued groups ---------------------------------------------------

// Writes the 2x2 cell alpha*I + beta*J at scalar position (2*rc, 2*cc) and,
// when mirror is set, its transpose at the reflected position. Scalar
// mirroring realizes the cell transpose.
void put_cell(ParamMatrix& d, int rc, int cc, const LinForm& alpha, const LinForm& beta,
              bool mirror) {
    const int r = 2 * rc, c = 2 * cc;
    d(r, c) = alpha;
    d(r, c + 1) = beta;
    d(r + 1, c) = -beta;
    d(r + 1, c + 1) = alpha;
    if (mirror) {
        d(c, r) = alpha;
        d(c, r + 1) = -beta;
        d(c + 1, r) = beta;
        d(c + 1, r + 1) = alpha;
    }
}

// Diagonal cell block: even bands are multiples of I, odd bands multiples
// of the rotation generator J; the t-loop covers both triangles and the
// alternation makes the result symmetric.
void fill_cell_diag_block(ParamMatrix& d, int cell_off, int s, const std::string& prefix) {
    for (int w = 0; w < s; ++w) {
        const bool even = (w % 2 == 0);
        const char* stem = s == 1 ? "d" : (even ? "alpha" : "beta");
        const LinForm p = LinForm::param(prefix + slot_name(stem, cell_off + s - w, cell_off + s));
        for (int t = 0; t <= w; ++t) {
            const LinForm v = (t % 2) ? -p : p;
            const int rc = cell_off + s - w - 1 + t, cc = cell_off + s - 1 - t;
            if (even)
                put_cell(d, rc, cc, v, LinForm(), false);
            else
                put_cell(d, rc, cc, LinForm(), v, false);
        }
    }
}

// Cross cell block: every band carries a full rotation cell (two
// parameters); transposed placement when sa > sb.
void fill_cell_cross_block(ParamMatrix& d, int ra_cell, int sa, int ca_cell, int sb,
                           const std::string& prefix) {
    auto band = [&](int rc0, int cc0, int w, int dr, int dc, const LinForm& alpha,
                    const LinForm& beta) {
        for (int t = 0; t <= w; ++t) {
            const LinForm va = (t % 2) ? -alpha : alpha;
            const LinForm vb = (t % 2) ? -beta : beta;
            put_cell(d, rc0 + t * dr, cc0 + t * dc, va, vb, true);
        }
    };
    if (sa <= sb) {
        for (int w = 0; w < sa; ++w) {
            const std::string ra = std::to_string(ra_cell + sa - w);
            const std::string cb = std::to_string(ca_cell + sb);
            const LinForm alpha = LinForm::param(prefix + "alpha_" + ra + "_" + cb);
            const LinForm beta = LinForm::param(prefix + "beta_" + ra + "_" + cb);
            band(ra_cell + sa - w - 1, ca_cell + sb - 1, w, 1, -1, alpha, beta);
        }
    } else {
        for (int w = 0; w < sb; ++w) {
            const std::string ra = std::to_string(ra_cell + sa);
            const std::string cb = std::to_string(ca_cell + sb - w);
            const LinForm alpha = LinForm::param(prefix + "alpha_" + ra + "_" + cb);
            const LinForm beta = LinForm::param(prefix + "beta_" + ra + "_" + cb);
            band(ra_cell + sa - 1, ca_cell + sb - w - 1, w, -1, 1, alpha, beta);
        }
    }
}

std::vector<int> sorted(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<int> offsets_of(const std::vector<int>& sizes, int start = 0) {
    std::vector<int> off;
    int o = start;
    for (int s : sizes) {
        off.push_back(o);
        o += s;
    }
    return off;
}

} // namespace

ParamMatrix build_zero_block(std::vector<int> sizes, const std::string& prefix) {
    sizes = sorted(std::move(sizes));
    const auto off = offsets_of(sizes);
    int dim = 0;
    for (int s : sizes)
        dim += s;
    ParamMatrix d(dim, dim);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        fill_zero_diag_block(d, off[i], sizes[i], prefix);
        for (std::size_t j = i + 1; j < sizes.size(); ++j)
            fill_scalar_cross_block(d, off[i], sizes[i], off[j], sizes[j], prefix);
    }
    return d;
}

ParamMatrix build_real_pair_block(const Rat& lambda, std::vector<int> sizes_plus,
                                  std::vector<int> sizes_minus, const std::string& prefix) {
    if (lambda == 0)
        throw InputError("real pair block: lambda must be nonzero");
    sizes_plus = sorted(std::move(sizes_plus));
    sizes_minus = sorted(std::move(sizes_minus));
    int dp = 0;
    for (int s : sizes_plus)
        dp += s;
    int dm = 0;
    for (int s : sizes_minus)
        dm += s;
    const auto offp = offsets_of(sizes_plus);
    const auto offm = offsets_of(sizes_minus, dp);
    ParamMatrix d(dp + dm, dp + dm);
    // Same-sign blocks vanish; only plus x minus couplings carry parameters.
    for (std::size_t i = 0; i < sizes_plus.size(); ++i)
        for (std::size_t j = 0; j < sizes_minus.size(); ++j)
            fill_scalar_cross_block(d, offp[i], sizes_plus[i], offm[j], sizes_minus[j], prefix);
    return d;
}

ParamMatrix build_imaginary_block(const Rat& b, std::vector<int> sizes,
                                  const std::string& prefix) {
    if (b <= 0)
        throw InputError("imaginary block: b must be > 0");
    sizes = sorted(std::move(sizes));
    const auto off = offsets_of(sizes); // cell offsets
    int cells = 0;
    for (int s : sizes)
        cells += s;
    ParamMatrix d(2 * cells, 2 * cells);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        fill_cell_diag_block(d, off[i], sizes[i], prefix);
        for (std::size_t j = i + 1; j < sizes.size(); ++j)
            fill_cell_cross_block(d, off[i], sizes[i], off[j], sizes[j], prefix);
    }
    return d;
}

ParamMatrix build_complex_block(const Rat& a, const Rat& b, std::vector<int> sizes_plus,
                                std::vector<int> sizes_minus, const std::string& prefix) {
    if (a == 0)
        throw InputError("complex block: a must be nonzero");
    if (b <= 0)
        throw InputError("complex block: b must be > 0");
    sizes_plus = sorted(std::move(sizes_plus));
    sizes_minus = sorted(std::move(sizes_minus));
    int cp = 0;
    for (int s : sizes_plus)
        cp += s;
    int cm = 0;
    for (int s : sizes_minus)
        cm += s;
    const auto offp = offsets_of(sizes_plus);
    const auto offm = offsets_of(sizes_minus, cp);
    ParamMatrix d(2 * (cp + cm), 2 * (cp + cm));
    for (std::size_t i = 0; i < sizes_plus.size(); ++i)
        for (std::size_t j = 0; j < sizes_minus.size(); ++j)
            fill_cell_cross_block(d, offp[i], sizes_plus[i], offm[j], sizes_minus[j], prefix);
    return d;
}

DFamily solve_family(const JordanSpec& spec) {
    const auto groups = layout(spec);
    int m = 0;
    for (const auto& g : groups)
        m += g.dim;
    ParamMatrix general(m, m);
    for (const auto& g : groups) {
        std::vector<int> plus, minus, all;
        for (std::size_t i = 0; i < g.blocks.size(); ++i) {
            if (int(i) < g.plus_count)
                plus.push_back(g.blocks[i].size);
            else
                minus.push_back(g.blocks[i].size);
            all.push_back(g.blocks[i].size);
        }
        ParamMatrix part;
        switch (g.kind) {
        case BlockKind::Zero:
            part = build_zero_block(all, g.prefix());
            break;
        case BlockKind::RealPair:
            part = build_real_pair_block(g.lambda, plus, minus, g.prefix());
            break;
        case BlockKind::RealSingle:
            part = build_real_pair_block(g.lambda, all, {}, g.prefix());
            break;
        case BlockKind::Imaginary:
            part = build_imaginary_block(g.b, all, g.prefix());
            break;
        case BlockKind::ComplexQuad:
            part = build_complex_block(g.a, g.b, plus, minus, g.prefix());
            break;
        case BlockKind::ComplexSingle:
            part = build_complex_block(g.a, g.b, all, {}, g.prefix());
            break;
        }
        std::vector<int> idx(g.dim);
        for (int i = 0; i < g.dim; ++i)
            idx[i] = g.offset + i;
        scatter(general, idx, part);
    }

    // The closed form is checked symbolically against its defining
    // constraints before anything downstream may use it.
    if (!is_symmetric(general))
        throw InternalError("solve_family: parametric D not symmetric");
    const RatMatrix b = realize(spec);
    const ParamMatrix skew = general * b + transpose(b) * general;
    if (!is_zero(skew))
        throw InternalError("solve_family: parametric D*B not skew-symmetric");
    return family_from_parametric(std::move(general));
}

DFamily oracle_family(const RatMatrix& b) {
    if (b.rows() != b.cols())
        throw ShapeError("oracle_family: matrix not square");
    const int m = b.rows();
    const int n = m * (m + 1) / 2;
    // Unknowns: upper triangle of D (symmetry built in). Constraints: the
    // upper triangle of D*B + B^t*D, which is itself symmetric.
    auto unknown_index = [m](int i, int j) {
        // row-major upper triangle, 0-based, i <= j
        return i * (2 * m - i - 1) / 2 + j;
    };
    RatMatrix sys(n, n);
    int row = 0;
    for (int r = 0; r < m; ++r) {
        for (int c = r; c < m; ++c) {
            // (D*B)_{rc} + (B^t*D)_{rc} = sum_k D_{rk} B_{kc} + sum_k B_{kr} D_{kc}
            for (int k = 0; k < m; ++k) {
                if (b(k, c) != 0) {
                    const int col = unknown_index(std::min(r, k), std::max(r, k));
                    sys(row, col) += b(k, c);
                }
                if (b(k, r) != 0) {
                    const int col = unknown_index(std::min(k, c), std::max(k, c));
                    sys(row, col) += b(k, r);
                }
            }
            ++row;
        }
    }

    const auto kernel = kernel_basis(sys);
    ParamMatrix general(m, m);
    int qi = 0;
    for (const RatMatrix& v : kernel) {
        const LinForm p = LinForm::param("q" + std::to_string(qi++));
        int k = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                if (v(k, 0) != 0) {
                    general(i, j) += p * v(k, 0);
                    if (i != j)
                        general(j, i) += p * v(k, 0);
                }
                ++k;
            }
    }
    return family_from_parametric(std::move(general));
}

} // namespace hamfactor
