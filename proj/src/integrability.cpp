#include "hamfactor/integrability.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "hamfactor/errors.hpp"

namespace hamfactor {

namespace {

// n x n matrix with ones on the k-th superdiagonal; k = 0 gives the identity.
RatMatrix shift_power(int n, int k) {
    RatMatrix m(n, n);
    for (int i = 0; i + k < n; ++i)
        m(i, i + k) = 1;
    return m;
}

// 2s x 2s cell matrix with alpha*I + beta*J in every cell of the k-th cell
// superdiagonal, J = [[0,1],[-1,0]].
RatMatrix cell_shift(int s, int k, const Rat& alpha, const Rat& beta) {
    RatMatrix m(2 * s, 2 * s);
    for (int i = 0; i + k < s; ++i) {
        const int r = 2 * i, c = 2 * (i + k);
        m(r, c) = alpha;
        m(r, c + 1) = beta;
        m(r + 1, c) = -beta;
        m(r + 1, c + 1) = alpha;
    }
    return m;
}

RatMatrix restrict_idx(const RatMatrix& m, const std::vector<int>& idx) {
    RatMatrix r(int(idx.size()), int(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            r(int(i), int(j)) = m(idx[i], idx[j]);
    return r;
}

RatMatrix embed_idx(int m, const std::vector<int>& idx, const RatMatrix& local) {
    RatMatrix r(m, m);
    scatter(r, idx, local);
    return r;
}

RatMatrix embed_col(int m, const std::vector<int>& idx, const RatMatrix& local) {
    RatMatrix r(m, 1);
    for (std::size_t i = 0; i < idx.size(); ++i)
        r(idx[i], 0) = local(int(i), 0);
    return r;
}

RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
    set_block(r, 0, 0, a);
    set_block(r, a.rows(), a.cols(), b);
    return r;
}

} // namespace

// --- commutant --------------------------------------------------------------

namespace {

// Upper-corner Toeplitz cell of the commutant between two blocks of the same
// eigenvalue descriptor. Scalar mode writes plain bands; cell mode writes
// alpha*I + beta*J cells.
void fill_commutant_cell(ParamMatrix& c, const Group& g, int bi, int bj, bool cells) {
    const JBlock& pa = g.blocks[bi];
    const JBlock& pb = g.blocks[bj];
    const int sa = pa.size, sb = pb.size;
    const int mn = std::min(sa, sb);
    const int shift = std::max(0, sb - sa);
    const std::string tag =
        "_" + std::to_string(bi + 1) + "_" + std::to_string(bj + 1) + "_";
    for (int w = 0; w < mn; ++w) {
        if (!cells) {
            const LinForm p = LinForm::param(g.prefix() + "c" + tag + std::to_string(w));
            for (int i = 0; i + w < mn; ++i)
                c(pa.offset + i, pb.offset + shift + i + w) = p;
        } else {
            const LinForm pa_ = LinForm::param(g.prefix() + "ca" + tag + std::to_string(w));
            const LinForm pb_ = LinForm::param(g.prefix() + "cb" + tag + std::to_string(w));
            for (int i = 0; i + w < mn; ++i) {
                const int r = pa.offset + 2 * i;
                const int col = pb.offset + 2 * (shift + i + w);
                c(r, col) = pa_;
                c(r, col + 1) = pb_;
                c(r + 1, col) = -pb_;
                c(r + 1, col + 1) = pa_;
            }
        }
    }
}

} // namespace

CommutantFamily commutant(const JordanSpec& spec) {
    const auto groups = layout(spec);
    int m = 0;
    for (const auto& g : groups)
        m += g.dim;
    ParamMatrix general(m, m);
    for (const Group& g : groups) {
        const bool cells = g.cells();
        const bool split = g.kind == BlockKind::RealPair || g.kind == BlockKind::ComplexQuad;
        const int n = int(g.blocks.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (split) {
                    const bool pi = i < g.plus_count, pj = j < g.plus_count;
                    if (pi != pj)
                        continue; // opposite eigenvalues never couple
                }
                fill_commutant_cell(general, g, i, j, cells);
            }
    }

    const RatMatrix b = realize(spec);
    const ParamMatrix comm = general * b + Rat(-1) * (b * general);
    if (!is_zero(comm))
        throw InternalError("commutant: closed form does not commute with B");

    CommutantFamily fam;
    fam.general = std::move(general);
    for (const std::string& name : fam.general.params())
        fam.basis.emplace_back(name, coefficient_matrix(fam.general, name));
    fam.dim = int(fam.basis.size());
    return fam;
}

CommutantFamily commutant_oracle(const RatMatrix& b) {
    if (b.rows() != b.cols())
        throw ShapeError("commutant_oracle: matrix not square");
    const int m = b.rows();
    RatMatrix sys(m * m, m * m);
    auto var = [m](int r, int c) { return r * m + c; };
    int row = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            // (B*X - X*B)_{ij} = 0
            for (int k = 0; k < m; ++k) {
                if (b(i, k) != 0)
                    sys(row, var(k, j)) += b(i, k);
                if (b(k, j) != 0)
                    sys(row, var(i, k)) -= b(k, j);
            }
            ++row;
        }
    ParamMatrix general(m, m);
    int qi = 0;
    for (const RatMatrix& v : kernel_basis(sys)) {
        const LinForm p = LinForm::param("q" + std::to_string(qi++));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (v(var(i, j), 0) != 0)
                    general(i, j) += p * v(var(i, j), 0);
    }
    CommutantFamily fam;
    fam.general = std::move(general);
    for (const std::string& name : fam.general.params())
        fam.basis.emplace_back(name, coefficient_matrix(fam.general, name));
    fam.dim = int(fam.basis.size());
    return fam;
}

Pairing pair_blocks(const std::vector<int>& plus_sizes, const std::vector<int>& minus_sizes) {
    auto order = [](const std::vector<int>& sizes) {
        std::vector<int> idx(sizes.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return sizes[a] > sizes[b]; });
        return idx;
    };
    const auto op = order(plus_sizes);
    const auto om = order(minus_sizes);
    Pairing pr;
    const std::size_t k = std::min(op.size(), om.size());
    for (std::size_t i = 0; i < k; ++i)
        pr.pairs.emplace_back(op[i], om[i]);
    for (std::size_t i = k; i < op.size(); ++i)
        pr.leftover_plus.push_back(op[i]);
    for (std::size_t i = k; i < om.size(); ++i)
        pr.leftover_minus.push_back(om[i]);
    return pr;
}

// --- transcript -------------------------------------------------------------

bool Transcript::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const TranscriptCheck& c) { return c.pass; });
}

std::string Transcript::failed_names() const {
    std::string s;
    for (const auto& c : checks)
        if (!c.pass)
            s += (s.empty() ? "" : ", ") + c.name;
    return s;
}

const TranscriptCheck* Transcript::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

// --- verification -----------------------------------------------------------

Transcript verify_system(const IntegrableSystem& sys, std::uint64_t seed) {
    Transcript tr;
    auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
        tr.checks.push_back({name, ok, detail});
    };

    const RatMatrix& b = sys.b;
    const RatMatrix& d0 = sys.d0;
    const int m = b.rows();

    check("structure_contract", is_symmetric(d0) && is_skew_symmetric(d0 * b),
          "D0 symmetric and D0*B skew-symmetric");

    const int q_count = int(sys.quadratic_integrals.size() + sys.linear_integrals.size());
    check("type_counts",
          sys.p == int(sys.fields.size()) && sys.q == q_count && sys.p + sys.q == m && sys.p >= 1,
          "p = " + std::to_string(sys.p) + ", q = " + std::to_string(sys.q) +
              ", m = " + std::to_string(m));

    check("first_field_is_b", !sys.fields.empty() && sys.fields[0].c == b);

    {
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; ok && i < sys.fields.size(); ++i)
            for (std::size_t j = i + 1; ok && j < sys.fields.size(); ++j)
                if (sys.fields[i].c * sys.fields[j].c != sys.fields[j].c * sys.fields[i].c) {
                    ok = false;
                    detail = "[C" + std::to_string(i + 1) + ", C" + std::to_string(j + 1) + "] != 0";
                }
        check("fields_commute", ok, detail);
    }

    {
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; ok && i < sys.fields.size(); ++i)
            if (!is_symmetric(sys.fields[i].hamiltonian)) {
                ok = false;
                detail = "S" + std::to_string(i + 1) + " not symmetric";
            }
        check("hamiltonians_symmetric", ok, detail);
    }

    {
        bool ok = true;
        std::string detail;
        for (std::size_t j = 0; ok && j < sys.quadratic_integrals.size(); ++j) {
            if (!is_symmetric(sys.quadratic_integrals[j].s)) {
                ok = false;
                detail = "integral " + std::to_string(j + 1) + " not symmetric";
                break;
            }
            for (std::size_t i = 0; ok && i < sys.fields.size(); ++i)
                if (!is_skew_symmetric(sys.quadratic_integrals[j].s * sys.fields[i].c)) {
                    ok = false;
                    detail = "S" + std::to_string(j + 1) + "*C" + std::to_string(i + 1) +
                             " not skew-symmetric";
                }
        }
        check("quadratic_integrals_annihilated", ok, detail);
    }

    {
        bool ok = true;
        std::string detail;
        for (std::size_t j = 0; ok && j < sys.linear_integrals.size(); ++j)
            for (std::size_t i = 0; ok && i < sys.fields.size(); ++i)
                if (!is_zero(transpose(sys.linear_integrals[j].covector) * sys.fields[i].c)) {
                    ok = false;
                    detail = "c" + std::to_string(j + 1) + "^t * C" + std::to_string(i + 1) + " != 0";
                }
        check("linear_integrals_annihilated", ok, detail);
    }

    // Membership in L_(B, D0) by stacked exact solve.
    const RatMatrix stacked = vstack(b, d0);
    {
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; ok && i < sys.fields.size(); ++i) {
            const auto z = solve_linear(stacked, vstack(sys.fields[i].c, sys.fields[i].hamiltonian));
            if (!z) {
                ok = false;
                detail = "no Z with B*Z = C" + std::to_string(i + 1) + ", D0*Z = S" + std::to_string(i + 1);
            }
        }
        check("field_membership", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        const RatMatrix zero_m(m, m);
        for (std::size_t j = 0; ok && j < sys.quadratic_integrals.size(); ++j) {
            if (!sys.quadratic_integrals[j].casimir)
                continue;
            if (!solve_linear(stacked, vstack(zero_m, sys.quadratic_integrals[j].s))) {
                ok = false;
                detail = "quadratic Casimir " + std::to_string(j + 1) + " not a member";
            }
        }
        const RatMatrix zero_v(m, 1);
        for (std::size_t j = 0; ok && j < sys.linear_integrals.size(); ++j) {
            if (!solve_linear(stacked, vstack(zero_v, sys.linear_integrals[j].covector))) {
                ok = false;
                detail = "linear Casimir " + std::to_string(j + 1) + " not a member";
            }
        }
        check("casimir_membership", ok, detail);
    }

    // Independence at a seeded rational point, with resampling.
    {
        RatRng rng(seed);
        const bool degenerate = sys.p == 1 && is_zero(b);
        bool ok = degenerate;
        std::string detail = degenerate ? "zero dynamics, single zero field allowed" : "";
        for (int attempt = 0; !ok && attempt < 4; ++attempt) {
            const RatMatrix u0 = random_vector(rng, m);
            RatMatrix fld(m, sys.p);
            for (int i = 0; i < sys.p; ++i) {
                const RatMatrix v = sys.fields[i].c * u0;
                for (int r = 0; r < m; ++r)
                    fld(r, i) = v(r, 0);
            }
            RatMatrix grd(m, sys.q);
            int col = 0;
            for (const auto& qi : sys.quadratic_integrals) {
                const RatMatrix v = qi.s * u0;
                for (int r = 0; r < m; ++r)
                    grd(r, col) = v(r, 0);
                ++col;
            }
            for (const auto& li : sys.linear_integrals) {
                for (int r = 0; r < m; ++r)
                    grd(r, col) = li.covector(r, 0);
                ++col;
            }
            if (rank(fld) == sys.p && rank(grd) == sys.q) {
                ok = true;
                detail = attempt ? "passed after resampling" : "";
            }
        }
        check("independence_ranks", ok, ok ? detail : "rank deficiency at 4 seeded points");
    }

    // Fields span an isotropic set for omega0 = D0*B^-1 when B is invertible.
    if (const auto b_inv = inverse(b)) {
        const RatMatrix omega = d0 * *b_inv;
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; ok && i < sys.fields.size(); ++i)
            for (std::size_t j = i; ok && j < sys.fields.size(); ++j)
                if (!is_skew_symmetric(transpose(sys.fields[i].c) * omega * sys.fields[j].c)) {
                    ok = false;
                    detail = "C" + std::to_string(i + 1) + "^t omega C" + std::to_string(j + 1) +
                             " not skew-symmetric";
                }
        check("omega_isotropy", ok, detail);
    }

    return tr;
}

// --- system construction ----------------------------------------------------

namespace {

struct Subunit {
    std::vector<int> idx;                      // global coordinates
    std::vector<std::string> band_params;      // family parameters set to one
    // filled in the second pass:
    RatMatrix b_local, d_local;
    std::vector<RatMatrix> fields_local;       // first entry = b_local when nonempty
    std::vector<RatMatrix> hams_local;
    std::vector<std::pair<RatMatrix, bool>> quads_local; // (S, casimir)
    std::vector<int> linear_coords_local;      // 1-based local coordinates of linear Casimirs
    // construction recipe:
    enum Kind {
        ZeroRPart,
        ZeroOdd,
        ZeroEvenPair,
        ZeroLoneEven,
        RealPaired,
        RealLeftover,
        ImagCellBlock, // includes cell size 1
        ComplexPaired,
        ComplexLeftover
    } kind = ZeroRPart;
    int s1 = 0, s2 = 0; // sizes (cells for cell kinds); paired: plus, minus
};

std::vector<int> block_coords(const Group& g, const JBlock& blk) {
    std::vector<int> idx(g.scalar_size(blk));
    std::iota(idx.begin(), idx.end(), blk.offset);
    return idx;
}

std::string local_name(const Group& g, const char* stem, int row1, int col1) {
    return g.prefix() + stem + "_" + std::to_string(row1) + "_" + std::to_string(col1);
}

// Parameter names of the anti-diagonal bands of the cross block between two
// blocks of the group, in the naming scheme of the family builders. Scalar
// mode: one name per band; cell mode: alpha then beta per band.
std::vector<std::string> cross_band_names(const Group& g, const JBlock& ba, const JBlock& bb,
                                          bool cells) {
    const int unit = cells ? 2 : 1;
    const int la = (ba.offset - g.offset) / unit; // 0-based local block offset
    const int lb = (bb.offset - g.offset) / unit;
    const int sa = ba.size, sb = bb.size;
    std::vector<std::string> names;
    auto push = [&](int r1, int c1) {
        if (!cells) {
            names.push_back(local_name(g, "d", r1, c1));
        } else {
            names.push_back(local_name(g, "alpha", r1, c1));
            names.push_back(local_name(g, "beta", r1, c1));
        }
    };
    if (sa <= sb)
        for (int w = 0; w < sa; ++w)
            push(la + sa - w, lb + sb);
    else
        for (int w = 0; w < sb; ++w)
            push(la + sa, lb + sb - w);
    return names;
}

// Name of one diagonal band of a block (zero group or imaginary group).
std::string diag_band_name(const Group& g, const JBlock& blk, int w, bool cells) {
    const int unit = cells ? 2 : 1;
    const int lo = (blk.offset - g.offset) / unit;
    const int s = blk.size;
    const char* stem = !cells ? "d" : (s == 1 ? "d" : (w % 2 == 0 ? "alpha" : "beta"));
    return local_name(g, stem, lo + s - w, lo + s);
}

} // namespace

IntegrableSystem build_integrable(const JordanSpec& spec, std::uint64_t seed) {
    IntegrableSystem sys;
    sys.spec = validate(spec);
    const auto groups = layout(sys.spec);
    sys.b = realize(sys.spec);
    const int m = sys.b.rows();
    const DFamily family = solve_family(sys.spec);

    // Pass 1: plan subunits and collect the D0 assignment.
    std::vector<Subunit> subs;
    Assignment d0_assign;
    auto assign_one = [&](const std::string& name) { d0_assign[name] = 1; };

    for (const Group& g : groups) {
        switch (g.kind) {
        case BlockKind::Zero: {
            Subunit rpart;
            rpart.kind = Subunit::ZeroRPart;
            std::map<int, const JBlock*> pending_even;
            for (const JBlock& blk : g.blocks) {
                if (blk.size == 1) {
                    rpart.idx.push_back(blk.offset);
                    const std::string name = diag_band_name(g, blk, 0, false);
                    rpart.band_params.push_back(name);
                    assign_one(name);
                } else if (blk.size % 2 == 1) {
                    Subunit su;
                    su.kind = Subunit::ZeroOdd;
                    su.s1 = blk.size;
                    su.idx = block_coords(g, blk);
                    const std::string name = diag_band_name(g, blk, blk.size - 1, false);
                    su.band_params.push_back(name);
                    assign_one(name);
                    subs.push_back(std::move(su));
                } else {
                    auto it = pending_even.find(blk.size);
                    if (it == pending_even.end()) {
                        pending_even[blk.size] = &blk;
                    } else {
                        Subunit su;
                        su.kind = Subunit::ZeroEvenPair;
                        su.s1 = su.s2 = blk.size;
                        su.idx = block_coords(g, *it->second);
                        const auto more = block_coords(g, blk);
                        su.idx.insert(su.idx.end(), more.begin(), more.end());
                        const auto names = cross_band_names(g, *it->second, blk, false);
                        const std::string top = names.back(); // band w = size-1
                        su.band_params.push_back(top);
                        assign_one(top);
                        pending_even.erase(it);
                        subs.push_back(std::move(su));
                    }
                }
            }
            for (const auto& [size, blk] : pending_even) {
                (void)size;
                Subunit su;
                su.kind = Subunit::ZeroLoneEven;
                su.s1 = blk->size;
                su.idx = block_coords(g, *blk);
                const std::string name = diag_band_name(g, *blk, blk->size - 2, false);
                su.band_params.push_back(name);
                assign_one(name);
                subs.push_back(std::move(su));
            }
            if (!rpart.idx.empty())
                subs.push_back(std::move(rpart));
            break;
        }
        case BlockKind::RealPair:
        case BlockKind::ComplexQuad: {
            const bool cells = g.cells();
            std::vector<int> plus_sizes, minus_sizes;
            for (int i = 0; i < int(g.blocks.size()); ++i)
                (i < g.plus_count ? plus_sizes : minus_sizes).push_back(g.blocks[i].size);
            const Pairing pr = pair_blocks(plus_sizes, minus_sizes);
            for (const auto& [pi, mi] : pr.pairs) {
                const JBlock& bp = g.blocks[pi];
                const JBlock& bm = g.blocks[g.plus_count + mi];
                Subunit su;
                su.kind = cells ? Subunit::ComplexPaired : Subunit::RealPaired;
                su.s1 = bp.size;
                su.s2 = bm.size;
                su.idx = block_coords(g, bp);
                const auto more = block_coords(g, bm);
                su.idx.insert(su.idx.end(), more.begin(), more.end());
                su.band_params = cross_band_names(g, bp, bm, cells);
                for (const std::string& name : su.band_params)
                    assign_one(name);
                subs.push_back(std::move(su));
            }
            auto leftover = [&](int block_index) {
                const JBlock& blk = g.blocks[block_index];
                Subunit su;
                su.kind = cells ? Subunit::ComplexLeftover : Subunit::RealLeftover;
                su.s1 = blk.size;
                su.idx = block_coords(g, blk);
                subs.push_back(std::move(su));
            };
            for (int i : pr.leftover_plus)
                leftover(i);
            for (int i : pr.leftover_minus)
                leftover(g.plus_count + i);
            break;
        }
        case BlockKind::RealSingle:
        case BlockKind::ComplexSingle: {
            for (const JBlock& blk : g.blocks) {
                Subunit su;
                su.kind = g.cells() ? Subunit::ComplexLeftover : Subunit::RealLeftover;
                su.s1 = blk.size;
                su.idx = block_coords(g, blk);
                subs.push_back(std::move(su));
            }
            break;
        }
        case BlockKind::Imaginary: {
            for (const JBlock& blk : g.blocks) {
                Subunit su;
                su.kind = Subunit::ImagCellBlock;
                su.s1 = blk.size;
                su.idx = block_coords(g, blk);
                for (int w = 0; w < blk.size; ++w) {
                    const std::string name = diag_band_name(g, blk, w, true);
                    su.band_params.push_back(name);
                    assign_one(name);
                }
                subs.push_back(std::move(su));
            }
            break;
        }
        }
    }

    // Keep the subunit order aligned with the coordinate layout.
    std::stable_sort(subs.begin(), subs.end(), [](const Subunit& a, const Subunit& b) {
        return a.idx.front() < b.idx.front();
    });

    // D0: the chosen bands of the family, all other parameters zero.
    Assignment full = d0_assign;
    for (const std::string& name : family.general.params())
        if (!full.count(name))
            full[name] = 0;
    sys.d0 = substitute(family.general, full);

    std::map<std::string, const RatMatrix*> basis_by_name;
    for (const auto& [name, mat] : family.basis)
        basis_by_name[name] = &mat;
    auto band_matrix = [&](const Subunit& su, const std::string& name) {
        auto it = basis_by_name.find(name);
        if (it == basis_by_name.end())
            throw InternalError("build_integrable: unknown band parameter " + name);
        return restrict_idx(*it->second, su.idx);
    };

    // Pass 2: per-subunit fields, Hamiltonians and integrals.
    for (Subunit& su : subs) {
        su.b_local = restrict_idx(sys.b, su.idx);
        su.d_local = restrict_idx(sys.d0, su.idx);
        const int n = int(su.idx.size());

        auto invertible_ham = [&](const RatMatrix& c) {
            const auto bi = inverse(su.b_local);
            if (!bi)
                throw InternalError("build_integrable: expected invertible block");
            return su.d_local * (*bi * c);
        };

        switch (su.kind) {
        case Subunit::ZeroRPart:
            for (int i = 1; i <= n; ++i)
                su.linear_coords_local.push_back(i);
            break;

        case Subunit::ZeroOdd: {
            const int s = su.s1, k = (s - 1) / 2;
            for (int i = 1; i <= k; ++i) {
                su.fields_local.push_back(shift_power(s, 2 * i - 1));
                su.hams_local.push_back(su.d_local * shift_power(s, 2 * i - 2));
            }
            for (int i = 1; i <= k; ++i)
                su.quads_local.emplace_back(su.d_local * shift_power(s, 2 * i - 2), false);
            su.quads_local.emplace_back(su.d_local * shift_power(s, 2 * k), true);
            break;
        }

        case Subunit::ZeroLoneEven: {
            const int s = su.s1, t = s / 2;
            for (int i = 1; i <= t; ++i) {
                su.fields_local.push_back(shift_power(s, 2 * i - 1));
                const RatMatrix ham = su.d_local * shift_power(s, 2 * i - 2);
                su.hams_local.push_back(ham);
                su.quads_local.emplace_back(ham, false);
            }
            break;
        }

        case Subunit::ZeroEvenPair: {
            const int s = su.s1, t = s / 2;
            auto diag2 = [&](int k) { return block_diag(shift_power(s, k), shift_power(s, k)); };
            auto anti2 = [&](int k) {
                RatMatrix r(2 * s, 2 * s);
                set_block(r, 0, s, shift_power(s, k));
                set_block(r, s, 0, shift_power(s, k));
                return r;
            };
            for (int i = 1; i <= t; ++i) {
                su.fields_local.push_back(diag2(2 * i - 1));
                const RatMatrix ham = su.d_local * diag2(2 * i - 2);
                su.hams_local.push_back(ham);
                su.quads_local.emplace_back(ham, false);
            }
            for (int j = 1; j <= t - 1; ++j) {
                su.fields_local.push_back(anti2(2 * j));
                const RatMatrix ham = su.d_local * anti2(2 * j - 1);
                su.hams_local.push_back(ham);
                su.quads_local.emplace_back(ham, false);
            }
            su.linear_coords_local.push_back(s);
            su.linear_coords_local.push_back(2 * s);
            break;
        }

        case Subunit::RealPaired: {
            const int xi = su.s1, chi = su.s2;
            const int mx = std::max(xi, chi);
            su.fields_local.push_back(su.b_local);
            for (int j = 1; j < mx; ++j) {
                const Rat sp = chi >= xi ? Rat((j % 2) ? 1 : -1) : Rat(1);
                const Rat sm = chi >= xi ? Rat(1) : Rat((j % 2) ? 1 : -1);
                su.fields_local.push_back(
                    block_diag(sp * shift_power(xi, j), sm * shift_power(chi, j)));
            }
            for (const RatMatrix& c : su.fields_local)
                su.hams_local.push_back(invertible_ham(c));
            for (const std::string& name : su.band_params)
                su.quads_local.emplace_back(band_matrix(su, name), false);
            break;
        }

        case Subunit::RealLeftover: {
            const int s = su.s1;
            su.fields_local.push_back(su.b_local);
            for (int j = 1; j < s; ++j)
                su.fields_local.push_back(shift_power(s, j));
            for (std::size_t i = 0; i < su.fields_local.size(); ++i)
                su.hams_local.push_back(RatMatrix(n, n));
            break;
        }

        case Subunit::ImagCellBlock: {
            const int s = su.s1;
            su.fields_local.push_back(su.b_local);
            for (int j = 1; j < s; ++j) {
                if (j % 2 == 0)
                    su.fields_local.push_back(cell_shift(s, j, 0, 1)); // J * shift^j
                else
                    su.fields_local.push_back(cell_shift(s, j, 1, 0)); // shift^j
            }
            for (const RatMatrix& c : su.fields_local)
                su.hams_local.push_back(invertible_ham(c));
            for (const std::string& name : su.band_params)
                su.quads_local.emplace_back(band_matrix(su, name), false);
            break;
        }

        case Subunit::ComplexPaired: {
            const int xi = su.s1, chi = su.s2;
            const int mx = std::max(xi, chi);
            su.fields_local.push_back(su.b_local);
            auto pair_field = [&](int j, bool beta) {
                // alpha fields: shorter side scaled by (-1)^(j+1);
                // beta fields: shorter side scaled by (-1)^j.
                const Rat shorter = beta ? Rat((j % 2) ? -1 : 1) : Rat((j % 2) ? 1 : -1);
                const Rat sp = chi >= xi ? shorter : Rat(1);
                const Rat sm = chi >= xi ? Rat(1) : shorter;
                const Rat ap = beta ? Rat(0) : sp, bp = beta ? sp : Rat(0);
                const Rat am = beta ? Rat(0) : sm, bm = beta ? sm : Rat(0);
                return block_diag(cell_shift(xi, j, ap, bp), cell_shift(chi, j, am, bm));
            };
            for (int j = 1; j < mx; ++j)
                su.fields_local.push_back(pair_field(j, false));
            for (int j = 0; j < mx; ++j)
                su.fields_local.push_back(pair_field(j, true));
            for (const RatMatrix& c : su.fields_local)
                su.hams_local.push_back(invertible_ham(c));
            for (const std::string& name : su.band_params)
                su.quads_local.emplace_back(band_matrix(su, name), false);
            break;
        }

        case Subunit::ComplexLeftover: {
            const int s = su.s1;
            su.fields_local.push_back(su.b_local);
            su.fields_local.push_back(cell_shift(s, 0, 0, 1));
            for (int j = 1; j < s; ++j) {
                su.fields_local.push_back(cell_shift(s, j, 1, 0));
                su.fields_local.push_back(cell_shift(s, j, 0, 1));
            }
            for (std::size_t i = 0; i < su.fields_local.size(); ++i)
                su.hams_local.push_back(RatMatrix(n, n));
            break;
        }
        }
    }

    // Assemble: C1 = B with Hamiltonian D0; then per subunit its generator
    // (skipped for the first subunit with dynamics, whose direction C1 covers)
    // followed by the remaining fields.
    sys.fields.push_back({sys.b, sys.d0});
    bool first_dynamic_seen = false;
    for (const Subunit& su : subs) {
        if (su.fields_local.empty())
            continue;
        if (first_dynamic_seen)
            sys.fields.push_back(
                {embed_idx(m, su.idx, su.fields_local[0]), embed_idx(m, su.idx, su.hams_local[0])});
        else
            first_dynamic_seen = true;
        for (std::size_t i = 1; i < su.fields_local.size(); ++i)
            sys.fields.push_back(
                {embed_idx(m, su.idx, su.fields_local[i]), embed_idx(m, su.idx, su.hams_local[i])});
    }
    for (const Subunit& su : subs) {
        for (const auto& [s_local, casimir] : su.quads_local)
            sys.quadratic_integrals.push_back({embed_idx(m, su.idx, s_local), casimir});
        for (int coord : su.linear_coords_local) {
            RatMatrix e(int(su.idx.size()), 1);
            e(coord - 1, 0) = 1;
            sys.linear_integrals.push_back({embed_col(m, su.idx, e)});
        }
    }

    if (!first_dynamic_seen) {
        // B == 0: the zero field still heads the system and one Casimir is
        // dropped so that p + q = m.
        if (!sys.linear_integrals.empty())
            sys.linear_integrals.pop_back();
    }

    sys.p = int(sys.fields.size());
    sys.q = int(sys.quadratic_integrals.size() + sys.linear_integrals.size());
    sys.structure = classify_subbundle(sys.b, sys.d0);
    sys.transcript = verify_system(sys, seed);
    if (!sys.transcript.all_passed())
        throw InternalError("build_integrable: verification failed: " +
                            sys.transcript.failed_names());
    return sys;
}

} // namespace hamfactor
