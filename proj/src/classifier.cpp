#include "hamfactor/classifier.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hamfactor/errors.hpp"

namespace hamfactor {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Symplectic: return "symplectic";
    case Verdict::Presymplectic: return "presymplectic";
    case Verdict::Poisson: return "poisson";
    case Verdict::Dirac: return "dirac";
    case Verdict::ProperBigIsotropic: return "proper_big_isotropic";
    case Verdict::Trivial: return "trivial";
    }
    return "?";
}

namespace {

void check_pair_contract(const RatMatrix& b, const RatMatrix& d) {
    if (b.rows() != b.cols() || d.rows() != d.cols() || b.rows() != d.rows())
        throw ShapeError("classify: b and d must be square of equal size");
    std::ostringstream bad;
    int count = 0;
    for (int i = 0; i < d.rows() && count < 4; ++i)
        for (int j = i + 1; j < d.cols() && count < 4; ++j)
            if (d(i, j) != d(j, i)) {
                bad << " D(" << i + 1 << "," << j + 1 << ")!=D(" << j + 1 << "," << i + 1 << ")";
                ++count;
            }
    if (count)
        throw ContractError("d is not symmetric:" + bad.str());
    const RatMatrix db = d * b;
    const RatMatrix sym = db + transpose(db);
    for (int i = 0; i < sym.rows() && count < 4; ++i)
        for (int j = i; j < sym.cols() && count < 4; ++j)
            if (sym(i, j) != 0) {
                bad << " (DB+(DB)^t)(" << i + 1 << "," << j + 1 << ")=" << rat_str(sym(i, j));
                ++count;
            }
    if (count)
        throw ContractError("d*b is not skew-symmetric:" + bad.str());
}

// Nonzero vector in ker(b) /\ ker(d), if any.
std::optional<RatMatrix> kernel_intersection(const RatMatrix& b, const RatMatrix& d) {
    const RatMatrix stacked = vstack(b, d);
    const auto basis = kernel_basis(stacked);
    if (basis.empty())
        return std::nullopt;
    return basis.front();
}

} // namespace

namespace {

StructureClass classify_by_kernels(const RatMatrix& b, const RatMatrix& d) {
    StructureClass sc;
    const auto b_inv = inverse(b);
    const auto d_inv = inverse(d);
    if (b_inv)
        sc.omega_sharp = d * *b_inv;
    if (d_inv)
        sc.pi_sharp = b * *d_inv;

    if (b_inv && d_inv)
        sc.verdict = Verdict::Symplectic;
    else if (b_inv)
        sc.verdict = Verdict::Presymplectic;
    else if (d_inv)
        sc.verdict = Verdict::Poisson;
    else if (auto w = kernel_intersection(b, d)) {
        sc.verdict = Verdict::ProperBigIsotropic;
        sc.kernel_witness = *w;
    } else {
        sc.verdict = Verdict::Dirac;
    }
    return sc;
}

} // namespace

StructureClass classify(const RatMatrix& b, const RatMatrix& d) {
    check_pair_contract(b, d);
    if (is_zero(d)) {
        // No Hamiltonian content at all: every pairing is with H = 0.
        StructureClass sc;
        sc.verdict = Verdict::Trivial;
        return sc;
    }
    return classify_by_kernels(b, d);
}

StructureClass classify_subbundle(const RatMatrix& b, const RatMatrix& d) {
    check_pair_contract(b, d);
    return classify_by_kernels(b, d);
}

ConservedReport conserved_report(const RatMatrix& b, const RatMatrix& d) {
    check_pair_contract(b, d);
    ConservedReport rep;
    rep.hamiltonian = d;

    // Casimirs: images D*eta over ker B, thinned left-to-right so the
    // covectors stay linearly independent.
    std::vector<RatMatrix> chosen;
    for (const RatMatrix& eta : kernel_basis(b)) {
        const RatMatrix c = d * eta;
        if (is_zero(c))
            continue;
        std::vector<RatMatrix> trial = chosen;
        trial.push_back(c);
        if (span_rank(trial) == int(trial.size())) {
            chosen.push_back(c);
            rep.casimirs.push_back({c, eta});
        }
    }

    for (const RatMatrix& xi : kernel_basis(d)) {
        const RatMatrix f = b * xi;
        if (!is_zero(f))
            rep.isotropic_fields.push_back({xi, f});
    }
    return rep;
}

namespace {

const Group* find_zero_group(const std::vector<Group>& groups) {
    for (const Group& g : groups)
        if (g.kind == BlockKind::Zero)
            return &g;
    return nullptr;
}

} // namespace

InvertibleChoice invertible_choice(const JordanSpec& spec, const DFamily& family) {
    const auto groups = layout(spec);
    const Group* zg = find_zero_group(groups);
    InvertibleChoice out;
    if (!zg) {
        out.choice = {Assignment{}, RatMatrix(0, 0)};
        return out;
    }

    // Even sizes must pair up exactly; odd blocks are always fine.
    std::map<int, int> even_count;
    for (const JBlock& blk : zg->blocks)
        if (blk.size % 2 == 0)
            ++even_count[blk.size];
    const bool constructible = std::all_of(even_count.begin(), even_count.end(),
                                           [](const auto& kv) { return kv.second % 2 == 0; });

    if (constructible) {
        Assignment asg;
        const std::string prefix = zg->prefix();
        auto local = [&](const JBlock& blk, int row_in_block) {
            return blk.offset - zg->offset + row_in_block;
        };
        std::map<int, const JBlock*> pending_even;
        for (const JBlock& blk : zg->blocks) {
            if (blk.size % 2 == 1) {
                // top band of the diagonal block: alternating anti-diagonal
                asg[prefix + "d_" + std::to_string(local(blk, 1)) + "_" +
                    std::to_string(local(blk, blk.size))] = 1;
            } else {
                auto it = pending_even.find(blk.size);
                if (it == pending_even.end()) {
                    pending_even[blk.size] = &blk;
                } else {
                    // top band of the cross block between the pair
                    const JBlock* first = it->second;
                    asg[prefix + "d_" + std::to_string(local(*first, 1)) + "_" +
                        std::to_string(local(blk, blk.size))] = 1;
                    pending_even.erase(it);
                }
            }
        }
        // Evaluate only the zero group's part of the family.
        Assignment full = asg;
        for (const std::string& name : family.general.params())
            if (!full.count(name))
                full[name] = 0;
        const RatMatrix d_full = substitute(family.general, full);
        RatMatrix dz(zg->dim, zg->dim);
        for (int i = 0; i < zg->dim; ++i)
            for (int j = 0; j < zg->dim; ++j)
                dz(i, j) = d_full(zg->offset + i, zg->offset + j);
        if (rank(dz) != zg->dim)
            throw InternalError("invertible_choice: constructed D is singular");
        out.choice = {asg, dz};
        return out;
    }

    // Peel from the largest block: odd sizes go, equal-size even pairs go.
    // The first unpairable even block is the obstruction; in the reduced
    // spec it is the largest block, so the first column of its band is
    // identically zero in the reduced family.
    std::vector<int> sizes;
    for (const JBlock& blk : zg->blocks)
        sizes.push_back(blk.size);
    std::sort(sizes.begin(), sizes.end());
    for (;;) {
        if (sizes.empty())
            throw InternalError("invertible_choice: peeling exhausted a non-constructible multiset");
        const int top = sizes.back();
        if (top % 2 == 1) {
            sizes.pop_back();
            continue;
        }
        const auto same = std::count(sizes.begin(), sizes.end(), top);
        if (same >= 2) {
            sizes.erase(std::find(sizes.rbegin(), sizes.rend(), top).base() - 1);
            sizes.erase(std::find(sizes.rbegin(), sizes.rend(), top).base() - 1);
            continue;
        }
        ZeroBlockObstruction ob;
        ob.reduced_sizes = sizes;
        ob.block_size = top;
        int col = 1;
        for (int s : sizes)
            if (s != top)
                col += s;
            else
                break;
        ob.column = col;
        out.obstruction = ob;
        return out;
    }
}

} // namespace hamfactor
