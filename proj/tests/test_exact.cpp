#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamfactor/errors.hpp"
#include "hamfactor/linform.hpp"
#include "hamfactor/matrix.hpp"
#include "hamfactor/rational.hpp"
#include "testutil.hpp"

using namespace hamfactor;
using hftest::col;
using hftest::mat;
using hftest::unit_vec;

TEST_SUITE("rational") {
    TEST_CASE("construction reduces and keeps positive denominators") {
        CHECK(rat(2, 4) == rat(1, 2));
        CHECK(rat(3, -6) == rat(-1, 2));
        CHECK(rat(3, -6).get_den() == 2);
        CHECK(rat(0, 7).get_num() == 0);
        CHECK_THROWS_AS(rat(1, 0), InputError);
    }

    TEST_CASE("parse accepts p and p/q, rejects junk") {
        CHECK(rat_parse("3/2") == rat(3, 2));
        CHECK(rat_parse("-7") == rat(-7));
        CHECK(rat_parse("+4/6") == rat(2, 3));
        CHECK(rat_str(rat_parse("10/4")) == "5/2");
        CHECK_THROWS_AS(rat_parse("1.5"), ParseError);
        CHECK_THROWS_AS(rat_parse("1/-2"), ParseError);
        CHECK_THROWS_AS(rat_parse("1/0"), ParseError);
        CHECK_THROWS_AS(rat_parse(""), ParseError);
        CHECK_THROWS_AS(rat_parse("0x10"), ParseError);
    }

    TEST_CASE("arithmetic is exact") {
        RatRng rng(7);
        for (int i = 0; i < 200; ++i) {
            const Rat a = rng.rational(1000, 1000);
            const Rat b = rng.rational(1000, 1000);
            CHECK(Rat(a + b) - b == a);
            if (b != 0)
                CHECK(Rat(a / b) * b == a);
        }
    }
}

TEST_SUITE("linform") {
    TEST_CASE("no zero coefficients are stored") {
        LinForm f = LinForm::param("x") - LinForm::param("x");
        CHECK(f.is_zero());
        CHECK(f.terms().empty());
        LinForm g = LinForm::param("x", rat(2)) * rat(0);
        CHECK(g.terms().empty());
    }

    TEST_CASE("evaluation requires every parameter") {
        const LinForm f = LinForm(rat(1)) + LinForm::param("a", rat(2));
        CHECK(f.evaluate({{"a", rat(3)}}) == rat(7));
        CHECK_THROWS_AS(f.evaluate({}), InputError);
    }

    TEST_CASE("partial substitution reduces the parameter set") {
        const LinForm f = LinForm::param("a") + LinForm::param("b", rat(3));
        const LinForm g = f.substitute({{"a", rat(2)}});
        CHECK(g.is_constant() == false);
        CHECK(g.constant() == rat(2));
        CHECK(g.coeff("b") == rat(3));
        CHECK(g.coeff("a") == 0);
    }

    TEST_CASE("module law: (alpha f + beta g)(x) = alpha f(x) + beta g(x)") {
        RatRng rng(11);
        for (int round = 0; round < 50; ++round) {
            LinForm f(rng.rational()), g(rng.rational());
            Assignment x;
            for (const char* name : {"p", "q", "r"}) {
                f += LinForm::param(name, rng.rational());
                g += LinForm::param(name, rng.rational());
                x[name] = rng.rational();
            }
            const Rat alpha = rng.rational(), beta = rng.rational();
            const LinForm left = f * alpha + g * beta;
            CHECK(left.evaluate(x) == alpha * f.evaluate(x) + beta * g.evaluate(x));
        }
    }
}

TEST_SUITE("rat_matrix") {
    TEST_CASE("mat_mul examples") {
        const RatMatrix m = mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
        CHECK(RatMatrix::identity(3) * m == m);
        const RatMatrix h2 = mat({{0, 1}, {0, 0}});
        CHECK(h2 * h2 == RatMatrix(2, 2));
        CHECK_THROWS_AS(h2 * m, ShapeError);
    }

    TEST_CASE("parametric unit times shift vanishes") {
        ParamMatrix e12(2, 2);
        e12(0, 1) = LinForm::param("d1");
        const ParamMatrix prod = e12 * mat({{0, 1}, {0, 0}});
        CHECK(is_zero(prod));
    }

    TEST_CASE("kernel_basis examples") {
        CHECK(kernel_basis(RatMatrix::identity(2)).empty());
        const auto k1 = kernel_basis(mat({{0, 1}, {0, 0}}));
        REQUIRE(k1.size() == 1);
        CHECK(k1[0] == unit_vec(2, 0));
        const auto k2 = kernel_basis(mat({{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}}));
        REQUIRE(k2.size() == 2);
        CHECK(k2[0] == unit_vec(4, 0));
        CHECK(k2[1] == unit_vec(4, 2));
    }

    TEST_CASE("rank examples") {
        CHECK(rank(RatMatrix(3, 3)) == 0);
        CHECK(rank(mat({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}})) == 2);
        // anti-diagonal involution: full rank
        CHECK(rank(mat({{0, 0, 0, 1}, {0, 0, -1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}})) == 4);
    }

    TEST_CASE("solve_linear examples") {
        const RatMatrix m = mat({{3, 1}, {2, 5}});
        const auto x = solve_linear(RatMatrix::identity(2), m);
        REQUIRE(x);
        CHECK(*x == m);
        CHECK(!solve_linear(RatMatrix(2, 2), col({1, 0})));
        CHECK(solve_linear(RatMatrix(2, 2), RatMatrix(2, 1)));
    }

    TEST_CASE("inverse and det") {
        const RatMatrix m = mat({{2, 1}, {1, 1}});
        const auto mi = inverse(m);
        REQUIRE(mi);
        CHECK(m * *mi == RatMatrix::identity(2));
        CHECK(det(m) == 1);
        CHECK(det(mat({{1, 2}, {2, 4}})) == 0);
        CHECK(!inverse(mat({{1, 2}, {2, 4}})));
        RatRng rng(3);
        for (int i = 0; i < 20; ++i) {
            const RatMatrix a = random_matrix(rng, 4, 4);
            const RatMatrix b = random_matrix(rng, 4, 4);
            CHECK(det(a * b) == det(a) * det(b));
        }
    }

    TEST_CASE("rank-nullity and exact kernels on random matrices") {
        RatRng rng(20240);
        for (int round = 0; round < 60; ++round) {
            const int r = int(rng.integer(1, 8)), c = int(rng.integer(1, 8));
            RatMatrix m = random_matrix(rng, r, c, 4, 3);
            // sprinkle zeros to force rank deficiency sometimes
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j)
                    if (rng.integer(0, 2) == 0)
                        m(i, j) = 0;
            const auto kernel = kernel_basis(m);
            CHECK(rank(m) + int(kernel.size()) == c);
            for (const auto& v : kernel)
                CHECK(is_zero(m * v));
        }
    }

    TEST_CASE("solve_linear finds witnesses exactly") {
        RatRng rng(99);
        for (int round = 0; round < 40; ++round) {
            const int n = int(rng.integer(1, 6)), k = int(rng.integer(1, 3));
            const RatMatrix a = random_matrix(rng, n, n, 3, 2);
            const RatMatrix x = random_matrix(rng, n, k, 3, 2);
            const RatMatrix b = a * x;
            const auto sol = solve_linear(a, b);
            REQUIRE(sol);
            CHECK(a * *sol == b);
        }
    }

    TEST_CASE("span utilities") {
        const std::vector<RatMatrix> basis = {mat({{1, 0}, {0, 0}}), mat({{0, 1}, {1, 0}})};
        CHECK(in_span(basis, mat({{2, 3}, {3, 0}})));
        CHECK(!in_span(basis, mat({{0, 0}, {0, 1}})));
        CHECK(span_rank(basis) == 2);
        CHECK(in_span({}, RatMatrix(2, 2)));
        CHECK(!in_span({}, RatMatrix::identity(2)));
    }
}

TEST_SUITE("param_matrix") {
    TEST_CASE("substitute examples") {
        ParamMatrix p(2, 2);
        p(0, 1) = LinForm::param("a");
        p(1, 0) = -LinForm::param("a");
        p(1, 1) = LinForm::param("b");
        const RatMatrix m = substitute(p, {{"a", rat(1)}, {"b", rat(0)}});
        CHECK(m == mat({{0, 1}, {-1, 0}}));
        CHECK(substitute(p, {{"a", rat(0)}, {"b", rat(0)}}) == RatMatrix(2, 2));
        CHECK_THROWS_AS(substitute(p, {{"zzz", rat(1)}, {"a", rat(0)}, {"b", rat(0)}}), InputError);
        CHECK_THROWS_AS(substitute(p, {{"a", rat(1)}}), InputError);
        const ParamMatrix partial = substitute_partial(p, {{"a", rat(1)}});
        CHECK(partial.params() == std::vector<std::string>{"b"});
        // no parameters: substitution with empty assignment is the identity
        const ParamMatrix constant = ParamMatrix::from_constant(mat({{1, 2}, {3, 4}}));
        CHECK(substitute(constant, {}) == mat({{1, 2}, {3, 4}}));
    }

    TEST_CASE("evaluation commutes with algebra") {
        RatRng rng(5);
        for (int round = 0; round < 30; ++round) {
            ParamMatrix p(3, 3);
            Assignment asg{{"x", rng.rational()}, {"y", rng.rational()}};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    p(i, j) = LinForm(rng.rational()) + LinForm::param("x", rng.rational()) +
                              LinForm::param("y", rng.rational());
                }
            const RatMatrix m = random_matrix(rng, 3, 3, 3, 2);
            CHECK(substitute(p * m, asg) == substitute(p, asg) * m);
            CHECK(substitute(m * p, asg) == m * substitute(p, asg));
        }
    }

    TEST_CASE("params is the union over entries") {
        ParamMatrix p(2, 2);
        p(0, 0) = LinForm::param("b") + LinForm::param("a");
        p(1, 1) = LinForm::param("c");
        CHECK(p.params() == std::vector<std::string>{"a", "b", "c"});
    }
}
