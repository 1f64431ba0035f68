#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "hamfactor/dsolver.hpp"
#include "hamfactor/errors.hpp"
#include "testutil.hpp"

using namespace hamfactor;
using hftest::mat;

namespace {

LinForm p(const std::string& name) {
    return LinForm::param(name);
}

std::vector<std::string> names_of(const DFamily& fam) {
    std::vector<std::string> out;
    for (const auto& [name, m] : fam.basis)
        out.push_back(name);
    return out;
}

std::vector<RatMatrix> basis_of(const DFamily& fam) {
    std::vector<RatMatrix> out;
    for (const auto& [name, m] : fam.basis)
        out.push_back(m);
    return out;
}

// dim equality plus exact two-sided span containment
void check_family_equivalence(const DFamily& closed, const DFamily& oracle) {
    CHECK(closed.dim == oracle.dim);
    const auto cb = basis_of(closed);
    const auto ob = basis_of(oracle);
    CHECK(span_rank(cb) == closed.dim);
    for (const auto& m : cb)
        CHECK(in_span(ob, m));
    for (const auto& m : ob)
        CHECK(in_span(cb, m));
}

Assignment zero_assignment(const ParamMatrix& pm) {
    Assignment asg;
    for (const auto& name : pm.params())
        asg[name] = 0;
    return asg;
}

JordanSpec zero_spec(std::vector<int> sizes) {
    JordanSpec s;
    BlockSpec b;
    b.kind = BlockKind::Zero;
    b.sizes = std::move(sizes);
    s.blocks.push_back(std::move(b));
    return s;
}

} // namespace

TEST_SUITE("zero_group_builder") {
    TEST_CASE("single block of size 4") {
        const ParamMatrix d = build_zero_block({4});
        CHECK(d.params() == std::vector<std::string>{"d_2_4", "d_4_4"});
        CHECK(d(0, 0).is_zero());
        CHECK(d(1, 3) == p("d_2_4"));
        CHECK(d(2, 2) == -p("d_2_4"));
        CHECK(d(3, 3) == p("d_4_4"));
        CHECK(d(0, 3).is_zero()); // odd band vanishes
        CHECK(is_symmetric(d));
    }

    TEST_CASE("single block of size 5") {
        const ParamMatrix d = build_zero_block({5});
        CHECK(d.params() == std::vector<std::string>{"d_1_5", "d_3_5", "d_5_5"});
        CHECK(d(0, 4) == p("d_1_5"));
        CHECK(d(1, 3) == -p("d_1_5"));
        CHECK(d(2, 2) == p("d_1_5"));
        CHECK(d(2, 4) == p("d_3_5"));
        CHECK(d(3, 3) == -p("d_3_5"));
        CHECK(d(4, 4) == p("d_5_5"));
    }

    TEST_CASE("cross block of a (4,5) pair") {
        const ParamMatrix d = build_zero_block({4, 5});
        const auto params = d.params();
        for (const char* name : {"d_1_9", "d_2_9", "d_3_9", "d_4_9"}) {
            CAPTURE(name);
            CHECK(std::find(params.begin(), params.end(), name) != params.end());
        }
        CHECK(d(0, 8) == p("d_1_9"));
        CHECK(d(1, 7) == -p("d_1_9"));
        CHECK(d(2, 6) == p("d_1_9"));
        CHECK(d(3, 5) == -p("d_1_9"));
        CHECK(d(3, 8) == p("d_4_9"));
        CHECK(is_symmetric(d));
    }

    TEST_CASE("free counts per block follow the ceil(s/2) and min rule") {
        for (int s = 1; s <= 6; ++s)
            CHECK(int(build_zero_block({s}).params().size()) == (s + 1) / 2);
        for (int s1 = 1; s1 <= 4; ++s1)
            for (int s2 = s1; s2 <= 4; ++s2) {
                const int expect = (s1 + 1) / 2 + (s2 + 1) / 2 + std::min(s1, s2);
                CHECK(int(build_zero_block({s1, s2}).params().size()) == expect);
            }
    }
}

TEST_SUITE("real_pair_builder") {
    TEST_CASE("two expanding directions against one contracting block") {
        const ParamMatrix d = build_real_pair_block(rat(1), {1, 1}, {2});
        CHECK(d.params() == std::vector<std::string>{"d_1_4", "d_2_4"});
        for (int j = 0; j < 4; ++j)
            CHECK(d(2, j).is_zero()); // third row identically zero
        CHECK(d(0, 3) == p("d_1_4"));
        CHECK(d(1, 3) == p("d_2_4"));
        CHECK(is_symmetric(d));
    }

    TEST_CASE("unpaired eigenvalue forces the zero family") {
        CHECK(build_real_pair_block(rat(1), {1}, {}).params().empty());
        CHECK(build_real_pair_block(rat(2), {3, 2}, {}).params().empty());
    }

    TEST_CASE("nondegenerate pair couples through one off-diagonal entry") {
        const ParamMatrix d = build_real_pair_block(rat(1), {1}, {1});
        CHECK(d.params().size() == 1);
        CHECK(d(0, 1) == p("d_1_2"));
        CHECK(d(1, 0) == p("d_1_2"));
        CHECK(d(0, 0).is_zero());
        CHECK(d(1, 1).is_zero());
    }

    TEST_CASE("transposed placement when the plus block is larger") {
        const ParamMatrix d = build_real_pair_block(rat(1), {2}, {1});
        CHECK(d.params() == std::vector<std::string>{"d_2_3"});
        for (int j = 0; j < 3; ++j)
            CHECK(d(0, j).is_zero());
        CHECK(d(1, 2) == p("d_2_3"));
        CHECK(is_symmetric(d));
    }
}

TEST_SUITE("imaginary_builder") {
    TEST_CASE("single rotation cell is a multiple of the identity") {
        const ParamMatrix d = build_imaginary_block(rat(1), {1});
        CHECK(d.params() == std::vector<std::string>{"d_1_1"});
        CHECK(d(0, 0) == p("d_1_1"));
        CHECK(d(1, 1) == p("d_1_1"));
        CHECK(d(0, 1).is_zero());
        CHECK(d(1, 0).is_zero());
    }

    TEST_CASE("cell block of size 4 alternates identity and rotation bands") {
        const ParamMatrix d = build_imaginary_block(rat(1), {4});
        CHECK(d.params() ==
              std::vector<std::string>{"alpha_2_4", "alpha_4_4", "beta_1_4", "beta_3_4"});
        // top band (w = 3, odd): rotation cells with alternating sign
        CHECK(d(0, 7) == p("beta_1_4"));
        CHECK(d(0, 6).is_zero());
        CHECK(d(1, 6) == -p("beta_1_4"));
        CHECK(d(2, 5) == -p("beta_1_4")); // cell (2,3) = -beta*J, scalar (3,6)
        // w = 2 band: identity cells with alternating sign
        CHECK(d(2, 6) == p("alpha_2_4"));
        CHECK(d(3, 7) == p("alpha_2_4"));
        CHECK(d(4, 4) == -p("alpha_2_4"));
        CHECK(d(6, 2) == p("alpha_2_4"));
        // bottom-right corner cell
        CHECK(d(6, 6) == p("alpha_4_4"));
        CHECK(is_symmetric(d));
    }

    TEST_CASE("cell block of size 5 frees five bands") {
        const ParamMatrix d = build_imaginary_block(rat(1), {5});
        CHECK(d.params() == std::vector<std::string>{"alpha_1_5", "alpha_3_5", "alpha_5_5",
                                                     "beta_2_5", "beta_4_5"});
    }
}

TEST_SUITE("complex_builder") {
    TEST_CASE("nondegenerate quadruple couples through one rotation cell") {
        const ParamMatrix d = build_complex_block(rat(1), rat(1), {1}, {1});
        CHECK(d.params() == std::vector<std::string>{"alpha_1_2", "beta_1_2"});
        CHECK(d(0, 2) == p("alpha_1_2"));
        CHECK(d(0, 3) == p("beta_1_2"));
        CHECK(d(1, 2) == -p("beta_1_2"));
        CHECK(d(1, 3) == p("alpha_1_2"));
        CHECK(is_symmetric(d));
    }

    TEST_CASE("one-sided quadruple has no family") {
        CHECK(build_complex_block(rat(1), rat(1), {1}, {}).params().empty());
        CHECK(build_complex_block(rat(-2), rat(1), {2, 1}, {}).params().empty());
    }

    TEST_CASE("matched cell blocks free two rotation cells per band") {
        const ParamMatrix d = build_complex_block(rat(1), rat(2), {2}, {2});
        CHECK(d.params().size() == 4);
    }
}

TEST_SUITE("solve_family") {
    TEST_CASE("double nilpotent pair reproduces the canonical 4x4 family") {
        const JordanSpec spec = zero_spec({2, 2});
        const DFamily fam = solve_family(spec);
        CHECK(fam.dim == 4);
        CHECK(names_of(fam) ==
              std::vector<std::string>{"g1.d_1_4", "g1.d_2_2", "g1.d_2_4", "g1.d_4_4"});
        CHECK(fam.general(0, 3) == p("g1.d_1_4"));
        CHECK(fam.general(1, 2) == -p("g1.d_1_4"));
        CHECK(fam.general(1, 1) == p("g1.d_2_2"));
        CHECK(fam.general(1, 3) == p("g1.d_2_4"));
        CHECK(fam.general(3, 3) == p("g1.d_4_4"));
        CHECK(fam.general(0, 0).is_zero());
        CHECK(fam.general(2, 2).is_zero());
        check_family_equivalence(fam, oracle_family(realize(spec)));
    }

    TEST_CASE("distinct unpaired eigenvalues admit only D = 0") {
        JordanSpec spec;
        BlockSpec b1;
        b1.kind = BlockKind::RealSingle;
        b1.lambda = rat(1);
        b1.sizes = {1};
        BlockSpec b2 = b1;
        b2.lambda = rat(2);
        spec.blocks = {b1, b2};
        const DFamily fam = solve_family(spec);
        CHECK(fam.dim == 0);
        CHECK(is_zero(fam.general));
        CHECK(oracle_family(realize(spec)).dim == 0);
    }

    TEST_CASE("single nilpotent 3-block") {
        const JordanSpec spec = zero_spec({3});
        const DFamily fam = solve_family(spec);
        CHECK(fam.dim == 2);
        check_family_equivalence(fam, oracle_family(realize(spec)));
    }

    TEST_CASE("cross-group couplings always vanish") {
        RatRng rng(31);
        for (int round = 0; round < 8; ++round) {
            const JordanSpec spec = hftest::random_spec(rng, 8);
            const DFamily fam = solve_family(spec);
            const auto groups = layout(spec);
            for (const auto& [name, basis] : fam.basis) {
                (void)name;
                for (const Group& ga : groups)
                    for (const Group& gb : groups) {
                        if (ga.index == gb.index)
                            continue;
                        for (int i = 0; i < ga.dim; ++i)
                            for (int j = 0; j < gb.dim; ++j)
                                CHECK(basis(ga.offset + i, gb.offset + j) == 0);
                    }
            }
        }
    }
}

TEST_SUITE("oracle_family") {
    TEST_CASE("zero matrix admits every symmetric D") {
        CHECK(oracle_family(RatMatrix(2, 2)).dim == 3);
        CHECK(oracle_family(RatMatrix(3, 3)).dim == 6);
    }

    TEST_CASE("diag(1, -1)") {
        const DFamily fam = oracle_family(mat({{1, 0}, {0, -1}}));
        CHECK(fam.dim == 1);
        CHECK(in_span(basis_of(fam), mat({{0, 1}, {1, 0}})));
    }

    TEST_CASE("oracle members satisfy the defining constraints") {
        RatRng rng(57);
        for (int round = 0; round < 6; ++round) {
            const JordanSpec spec = hftest::random_spec(rng, 7);
            const RatMatrix b = realize(spec);
            const DFamily fam = oracle_family(b);
            Assignment asg = zero_assignment(fam.general);
            for (auto& [k, v] : asg)
                v = rng.rational();
            const RatMatrix d = substitute(fam.general, asg);
            CHECK(is_symmetric(d));
            CHECK(is_skew_symmetric(d * b));
        }
    }
}

TEST_SUITE("family_properties") {
    TEST_CASE("completeness: closed form equals oracle on random specs") {
        RatRng rng(2024);
        for (int round = 0; round < 25; ++round) {
            const JordanSpec spec = hftest::random_spec(rng, 8);
            CAPTURE(spec.dim());
            check_family_equivalence(solve_family(spec), oracle_family(realize(spec)));
        }
    }

    TEST_CASE("soundness and conservation at random assignments") {
        RatRng rng(77);
        for (int round = 0; round < 10; ++round) {
            const JordanSpec spec = hftest::random_spec(rng, 8);
            const RatMatrix b = realize(spec);
            const DFamily fam = solve_family(spec);
            for (int trial = 0; trial < 10; ++trial) {
                Assignment asg = zero_assignment(fam.general);
                for (auto& [k, v] : asg)
                    v = rng.rational();
                const RatMatrix d = substitute(fam.general, asg);
                CHECK(is_symmetric(d));
                const RatMatrix db = d * b;
                CHECK(is_skew_symmetric(db));
                const RatMatrix u = random_vector(rng, b.rows());
                const RatMatrix quad = transpose(u) * db * u;
                CHECK(quad(0, 0) == 0);
            }
        }
    }

    TEST_CASE("family dimension is a conjugacy invariant") {
        RatRng rng(88);
        for (int round = 0; round < 6; ++round) {
            const JordanSpec spec = hftest::random_spec(rng, 6);
            const RatMatrix b = realize(spec);
            const DFamily fam = solve_family(spec);
            const Conjugation c = Conjugation::from(random_invertible(rng, b.rows()));
            const DFamily conj_fam = oracle_family(conjugate(b, c));
            CHECK(conj_fam.dim == fam.dim);
            // pushing the family forward lands in the conjugated family
            const ParamMatrix moved = pushforward_D(fam.general, c);
            for (const std::string& name : fam.general.params())
                CHECK(in_span(basis_of(conj_fam), coefficient_matrix(moved, name)));
        }
    }

    TEST_CASE("degenerate input: B = 0 gives the full symmetric family") {
        CHECK(solve_family(zero_spec({1, 1, 1})).dim == 6);
    }
}
