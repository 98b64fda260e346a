#include <numeric>

#include "doctest.h"
#include "fibrecalc/intalg.hpp"
#include "test_util.hpp"

using namespace fibrecalc;

namespace {

void check_snf_invariants(const IntMatrix& a, const SmithDecomposition& s) {
    CHECK(s.u * a * s.v == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    auto diag = s.diagonal();
    for (size_t i = 0; i < diag.size(); ++i) {
        CHECK(diag[i] >= 0);
        if (i + 1 < diag.size()) {
            if (diag[i] == 0) {
                CHECK(diag[i + 1] == 0);
            } else {
                CHECK(diag[i + 1] % diag[i] == 0);
            }
        }
    }
    // off-diagonal must vanish
    for (int i = 0; i < s.d.rows(); ++i)
        for (int j = 0; j < s.d.cols(); ++j)
            if (i != j) CHECK(s.d.at(i, j) == 0);
}

}  // namespace

TEST_CASE("smith normal form: identity") {
    IntMatrix a = IntMatrix::identity(2);
    auto s = smith_normal_form(a);
    CHECK(s.d == a);
    check_snf_invariants(a, s);
}

TEST_CASE("smith normal form: diag(2,3) has divisor chain gcd,lcm") {
    IntMatrix a{{2, 0}, {0, 3}};
    auto s = smith_normal_form(a);
    // independent oracle: the invariant factors of diag(p,q) are gcd and lcm
    long long g = std::gcd(2ll, 3ll);
    long long l = std::lcm(2ll, 3ll);
    CHECK(s.d.at(0, 0) == g);
    CHECK(s.d.at(1, 1) == l);
    check_snf_invariants(a, s);
}

TEST_CASE("smith normal form: zero matrix") {
    IntMatrix a(2, 3);
    auto s = smith_normal_form(a);
    CHECK(s.d == a);
    check_snf_invariants(a, s);
}

TEST_CASE("smith normal form: empty shapes") {
    for (auto [r, c] : {std::pair{0, 3}, std::pair{3, 0}, std::pair{0, 0}}) {
        IntMatrix a(r, c);
        auto s = smith_normal_form(a);
        CHECK(s.d.rows() == r);
        CHECK(s.d.cols() == c);
        check_snf_invariants(a, s);
    }
}

TEST_CASE("smith normal form: determinism") {
    IntMatrix a{{4, -6, 2}, {6, 12, 9}, {0, 5, -7}};
    auto s1 = smith_normal_form(a);
    auto s2 = smith_normal_form(a);
    CHECK(s1.u == s2.u);
    CHECK(s1.v == s2.v);
    CHECK(s1.d == s2.d);
}

TEST_CASE("cokernel: spec examples") {
    // identity: the gluing map for U is an isomorphism, trivial cokernel
    CHECK(cokernel(IntMatrix::identity(4)) == FinAbGroup{0, {}});

    // i1 iso onto the first Z^2, i2 zero: cokernel Z^2
    IntMatrix a{{1, 0}, {0, 1}, {0, 0}, {0, 0}};
    CHECK(cokernel(a) == FinAbGroup{2, {}});

    // (2): Z/2
    IntMatrix two{{2}};
    FinAbGroup z2 = cokernel(two);
    CHECK(z2.free_rank == 0);
    REQUIRE(z2.torsion.size() == 1);
    CHECK(z2.torsion[0] == 2);
}

TEST_CASE("cokernel: empty maps") {
    // 0 x 3: quotient of Z^0 is trivial
    CHECK(cokernel(IntMatrix(0, 3)).trivial());
    // 3 x 0: Z^3 / 0 = Z^3
    CHECK(cokernel(IntMatrix(3, 0)) == FinAbGroup{3, {}});
}

TEST_CASE("transpose") {
    CHECK(transpose(IntMatrix::identity(3)) == IntMatrix::identity(3));
    IntMatrix a{{1, 0}, {0, 1}, {0, 0}, {0, 0}};
    IntMatrix at{{1, 0, 0, 0}, {0, 1, 0, 0}};
    CHECK(transpose(a) == at);
    CHECK(transpose(transpose(a)) == a);
    IntMatrix z(3, 5);
    CHECK(transpose(z) == IntMatrix(5, 3));
}

TEST_CASE("solve_integral: examples") {
    IntMatrix id = IntMatrix::identity(3);
    std::vector<Int> b{Int(4), Int(-1), Int(7)};
    auto x = solve_integral(id, b);
    REQUIRE(x.has_value());
    CHECK(*x == b);

    IntMatrix two{{2}};
    CHECK(!solve_integral(two, {Int(1)}).has_value());

    IntMatrix d23{{2, 0}, {0, 3}};
    std::vector<Int> rhs{Int(4), Int(9)};
    auto y = solve_integral(d23, rhs);
    REQUIRE(y.has_value());
    CHECK(d23 * *y == rhs);  // substitution oracle
}

TEST_CASE("solve_integral: dimension mismatch") {
    CHECK_THROWS_AS((void)solve_integral(IntMatrix::identity(2), {Int(1)}), Error);
}

TEST_CASE("solve_integral: empty system") {
    auto x = solve_integral(IntMatrix(0, 4), {});
    REQUIRE(x.has_value());
    CHECK(x->size() == 4);
}

TEST_CASE("property: snf invariants on 500 random matrices") {
    std::mt19937_64 rng(20230811u);
    std::uniform_int_distribution<int> dim(0, 8);
    for (int trial = 0; trial < 500; ++trial) {
        IntMatrix a = testutil::random_matrix(rng, dim(rng), dim(rng));
        auto s = smith_normal_form(a);
        REQUIRE(s.u * a * s.v == s.d);
        REQUIRE(abs(determinant(s.u)) == 1);
        REQUIRE(abs(determinant(s.v)) == 1);
        auto diag = s.diagonal();
        for (size_t i = 0; i + 1 < diag.size(); ++i) {
            if (diag[i] == 0)
                REQUIRE(diag[i + 1] == 0);
            else
                REQUIRE(diag[i + 1] % diag[i] == 0);
        }
    }
}

TEST_CASE("property: cokernel invariant under unimodular composition") {
    std::mt19937_64 rng(77u);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        int m = dim(rng), n = dim(rng);
        IntMatrix a = testutil::random_matrix(rng, m, n, -4, 4);
        IntMatrix l = testutil::random_unimodular(rng, m);
        IntMatrix r = testutil::random_unimodular(rng, n);
        REQUIRE(cokernel(a) == cokernel(l * a * r));
    }
}

TEST_CASE("property: matrices with all invariant factors 1 have free cokernel") {
    std::mt19937_64 rng(4242u);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        int m = dim(rng), n = dim(rng);
        int r = std::min(m, n);
        IntMatrix d0(m, n);
        for (int i = 0; i < r; ++i) d0.at(i, i) = 1;
        IntMatrix a = testutil::random_unimodular(rng, m) * d0 * testutil::random_unimodular(rng, n);
        FinAbGroup g = cokernel(a);
        REQUIRE(g.torsion.empty());
        REQUIRE(g.free_rank == m - rank(a));
    }
}

TEST_CASE("property: solve_integral agrees with snf solvability criterion") {
    std::mt19937_64 rng(99u);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_int_distribution<int> entry(-5, 5);
    for (int trial = 0; trial < 100; ++trial) {
        int m = dim(rng), n = dim(rng);
        IntMatrix a = testutil::random_matrix(rng, m, n, -4, 4);

        // constructed solvable instance
        std::vector<Int> x0(n);
        for (auto& e : x0) e = entry(rng);
        std::vector<Int> b = a * x0;
        auto x = solve_integral(a, b);
        REQUIRE(x.has_value());
        REQUIRE(a * *x == b);

        // arbitrary right-hand side: cross-check with the SNF criterion
        std::vector<Int> b2(m);
        for (auto& e : b2) e = entry(rng);
        auto s = smith_normal_form(a);
        std::vector<Int> c = s.u * b2;
        bool solvable = true;
        for (int i = 0; i < m; ++i) {
            if (i < s.rank()) {
                if (c[i] % s.d.at(i, i) != 0) solvable = false;
            } else if (c[i] != 0) {
                solvable = false;
            }
        }
        auto x2 = solve_integral(a, b2);
        REQUIRE(x2.has_value() == solvable);
        if (x2) REQUIRE(a * *x2 == b2);
    }
}

TEST_CASE("kernel_basis spans the kernel and is saturated") {
    std::mt19937_64 rng(123u);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 50; ++trial) {
        int m = dim(rng), n = dim(rng);
        IntMatrix a = testutil::random_matrix(rng, m, n, -4, 4);
        IntMatrix k = kernel_basis(a);
        CHECK(k.cols() == n - rank(a));
        if (k.cols() > 0) {
            IntMatrix prod = a * k;
            CHECK(prod.is_zero());
            CHECK(rank(k) == k.cols());
        }
    }
}

TEST_CASE("cokernel_map projects onto the free quotient") {
    // Z^4 / span{(1,0,0,0),(0,1,0,0)}: free part picks out coords 3 and 4
    IntMatrix a{{1, 0}, {0, 1}, {0, 0}, {0, 0}};
    auto cm = cokernel_map(a);
    CHECK(cm.group == FinAbGroup{2, {}});
    CHECK(cm.free_projection.rows() == 2);
    CHECK(cm.free_projection.cols() == 4);
    // the projection must kill the image of a
    IntMatrix img = cm.free_projection * a;
    CHECK(img.is_zero());
    // and be surjective onto Z^2 (rank 2)
    CHECK(rank(cm.free_projection) == 2);
}

TEST_CASE("determinant: Bareiss vs known values") {
    CHECK(determinant(IntMatrix::identity(4)) == 1);
    CHECK(determinant(IntMatrix{{0, 1}, {1, 0}}) == -1);
    CHECK(determinant(IntMatrix{{2, 0}, {0, 3}}) == 6);
    CHECK(determinant(IntMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}) == 0);
    CHECK(determinant(IntMatrix(0, 0)) == 1);
}

TEST_CASE("FinAbGroup rendering") {
    CHECK(to_string(FinAbGroup{0, {}}) == "0");
    CHECK(to_string(FinAbGroup{1, {}}) == "Z");
    CHECK(to_string(FinAbGroup{2, {}}) == "Z^2");
    CHECK(to_string(FinAbGroup{1, {Int(2), Int(6)}}) == "Z + Z/2 + Z/6");
}
