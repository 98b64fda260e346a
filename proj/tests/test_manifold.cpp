#include "doctest.h"
#include "fibrecalc/manifold.hpp"

using namespace fibrecalc;

namespace {

Manifold4 make_q_block() {
    Manifold4 m = make_s1_times_mk("Q", {"z", "h"});
    m = symplectic_resolve(m, "S", "F", "SigmaP");
    return blow_up(m, 2, "SigmaP");
}

}  // namespace

TEST_CASE("s1 x M_K block data") {
    Manifold4 m = make_s1_times_mk();
    CHECK(m.h2->gram == IntMatrix{{0, 1}, {1, 0}});
    CHECK(m.canonical.has_value());
    CHECK(*m.canonical == zero_vector(m.h2));
    CHECK(m.surface("F").h1_map == IntMatrix(2, 2));
    CHECK(m.surface("S").h1_map == IntMatrix::identity(2));
    CHECK(m.euler == 0);
    CHECK(m.signature == 0);
    CHECK(self_intersection(m.surface("S")) == 0);
    CHECK(self_intersection(m.surface("F")) == 0);
    CHECK(pair(m.surface("S").h2_class, m.surface("F").h2_class) == 1);
}

TEST_CASE("four-torus block data") {
    Manifold4 m = make_t4();
    CHECK(*m.canonical == zero_vector(m.h2));
    CHECK(pair(m.surface("T1").h2_class, m.surface("T2").h2_class) == 1);
    CHECK(m.signature == 0);
    CHECK(m.euler == 0);
    CHECK(m.b2() == 6);
    CHECK(signature(*m.h2) == Signature{3, 3, 0});
}

TEST_CASE("Z block data") {
    Manifold4 m = make_z_block();
    CHECK(m.euler == 4);
    CHECK(m.signature == -4);
    CHECK(m.b2() == 6);
    CHECK(!m.canonical.has_value());
    const auto& f = m.surface("Sigma2p");
    CHECK(f.genus == 2);
    CHECK(self_intersection(f) == 0);
    CHECK(f.h1_map == IntMatrix{{1, 0, -1, 0}, {0, 1, 0, -1}});
    // the dual torus pairs once with the fibre
    CHECK(pair(m.surface("T").h2_class, f.h2_class) == 1);
}

TEST_CASE("blow_up: k = 0 is the identity") {
    Manifold4 m = make_t4();
    Manifold4 n = blow_up(m, 0);
    CHECK(n.euler == m.euler);
    CHECK(n.h2->gram == m.h2->gram);
    CHECK(*n.canonical == *m.canonical);
}

TEST_CASE("blow_up: twice blown-up four-torus has K = E1 + E2") {
    Manifold4 r = blow_up(make_t4("R"), 2);
    REQUIRE(r.canonical.has_value());
    auto expected = from_coeffs(r.h2, {{"E1", Int(1)}, {"E2", Int(1)}});
    CHECK(*r.canonical == expected);
    CHECK(r.euler == 2);
    CHECK(r.signature == -2);
    CHECK(pair(*r.canonical, *r.canonical) == -2);
}

TEST_CASE("blow_up: two points on a square-2 genus-2 surface give square 0") {
    Manifold4 m = make_s1_times_mk();
    m = symplectic_resolve(m, "S", "F", "Sigma");
    CHECK(self_intersection(m.surface("Sigma")) == 2);
    Manifold4 q = blow_up(m, 2, "Sigma");
    CHECK(self_intersection(q.surface("Sigma")) == 0);
    CHECK(q.surface("Sigma").genus == 2);
}

TEST_CASE("blow_up: unknown surface rejected") {
    CHECK_THROWS_AS((void)blow_up(make_t4(), 1, "nope"), Error);
}

TEST_CASE("blow_up: additivity") {
    Manifold4 a = blow_up(blow_up(make_t4(), 1), 1);
    Manifold4 b = blow_up(make_t4(), 2);
    CHECK(a.euler == b.euler);
    CHECK(a.signature == b.signature);
    CHECK(a.h2->basis_labels == b.h2->basis_labels);
    CHECK(a.h2->gram == b.h2->gram);
    CHECK(a.canonical->coords == b.canonical->coords);
}

TEST_CASE("symplectic_resolve: section and fibre give a genus-2 surface") {
    Manifold4 m = symplectic_resolve(make_s1_times_mk(), "S", "F", "Sigma");
    const auto& s = m.surface("Sigma");
    CHECK(s.genus == 2);
    CHECK(s.h2_class == m.surface("S").h2_class + m.surface("F").h2_class);
    CHECK(self_intersection(s) == 2);
    // H1 images: section generators then fibre generators (which vanish)
    CHECK(s.h1_map == IntMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}});
}

TEST_CASE("symplectic_resolve: torus factors of the four-torus") {
    Manifold4 m = symplectic_resolve(make_t4(), "T1", "T2", "SigmaPP");
    CHECK(m.surface("SigmaPP").genus == 2);
    CHECK(self_intersection(m.surface("SigmaPP")) == 2);
}

TEST_CASE("symplectic_resolve: double intersection point gives genus 3") {
    // synthetic block: two symplectic tori meeting twice
    Manifold4 m;
    m.label = "toy";
    m.h1 = H1Group{FinAbGroup{2, {}}, {"u", "v"}};
    m.h2 = make_lattice({"A", "B"}, IntMatrix{{0, 2}, {2, 0}});
    m.euler = 0;
    m.signature = 0;
    m.canonical = zero_vector(m.h2);
    m.symplectic = true;
    m.surfaces.push_back(SurfaceEmbedding{"A", 1, basis_vector(m.h2, "A"), IntMatrix(2, 2), true});
    m.surfaces.push_back(SurfaceEmbedding{"B", 1, basis_vector(m.h2, "B"), IntMatrix(2, 2), true});
    validate(m);

    Manifold4 r = symplectic_resolve(m, "A", "B", "C");
    CHECK(r.surface("C").genus == 3);
    // class sum and square A^2 + B^2 + 2n
    CHECK(r.surface("C").h2_class == basis_vector(m.h2, "A") + basis_vector(m.h2, "B"));
    CHECK(self_intersection(r.surface("C")) == 4);
}

TEST_CASE("symplectic_resolve: disjoint surfaces rejected") {
    Manifold4 m = make_s1_times_mk();
    CHECK_THROWS_AS((void)symplectic_resolve(m, "S", "S", "X"), Error);
}

TEST_CASE("adjunction_check examples") {
    Manifold4 m = make_s1_times_mk();
    auto r = adjunction_check(m, "S");
    CHECK(r.pass);
    CHECK(r.lhs == 0);
    CHECK(r.rhs == 0);

    Manifold4 q = make_q_block();
    // exceptional sphere: -2 = -1 + (-1)
    Manifold4 q2 = q;
    q2.surfaces.push_back(
        SurfaceEmbedding{"E1s", 0, basis_vector(q.h2, "E1"), IntMatrix(2, 0), false});
    auto re = adjunction_check(q2, "E1s");
    CHECK(re.pass);
    CHECK(re.lhs == -2);

    auto rs = adjunction_check(q, "SigmaP");
    CHECK(rs.pass);
    CHECK(rs.lhs == 2);
    CHECK(rs.rhs == 2);
}

TEST_CASE("adjunction_check requires a canonical class") {
    Manifold4 z = make_z_block();
    CHECK_THROWS_AS((void)adjunction_check(z, "Sigma2p"), Error);
}

TEST_CASE("homology_model strings") {
    // odd indefinite, rank 4, signature -2
    Manifold4 u;
    u.label = "u";
    u.h1 = H1Group{FinAbGroup{0, {}}, {}};
    u.h2 = make_lattice({"s", "b", "p1", "p2"},
                        IntMatrix{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}});
    u.euler = 6;
    u.signature = -2;
    validate(u);
    CHECK(homology_model(u).model == "1 ℂP² # 3 ℂP²bar (homology)");

    // even hyperbolic rank 2
    Manifold4 xk;
    xk.label = "xk";
    xk.h1 = H1Group{FinAbGroup{0, {}}, {}};
    xk.h2 = make_lattice({"s", "b"}, IntMatrix{{0, 1}, {1, 0}});
    xk.euler = 4;
    xk.signature = 0;
    validate(xk);
    CHECK(homology_model(xk).model == "1(S²×S²) (homology)");

    // odd indefinite rank 8, signature -2
    Manifold4 v;
    v.label = "v";
    v.h1 = H1Group{FinAbGroup{0, {}}, {}};
    IntMatrix g(8, 8);
    g.at(0, 1) = g.at(1, 0) = 1;
    g.at(2, 3) = g.at(3, 2) = 1;
    g.at(4, 5) = g.at(5, 4) = 1;
    g.at(6, 6) = g.at(7, 7) = -1;
    v.h2 = make_lattice({"a", "b", "c", "d", "e", "f", "g", "h"}, std::move(g));
    v.euler = 10;
    v.signature = -2;
    validate(v);
    CHECK(homology_model(v).model == "3 ℂP² # 5 ℂP²bar (homology)");

    // nontrivial H1 falls back to raw invariants
    Manifold4 yk = make_s1_times_mk();
    CHECK(homology_model(yk).model.find("rank 2") != std::string::npos);
    CHECK(homology_model(yk).note.find("π₁") != std::string::npos);
}

TEST_CASE("validate rejects inconsistent records") {
    Manifold4 m = make_s1_times_mk();
    m.euler = 1;
    CHECK_THROWS_AS(validate(m), Error);

    Manifold4 n = make_s1_times_mk();
    n.signature = 1;  // parity violation
    CHECK_THROWS_AS(validate(n), Error);

    Manifold4 p = make_s1_times_mk();
    p.canonical = basis_vector(p.h2, "S");  // K^2 = 0 but not characteristic-compatible
    CHECK_THROWS_AS(validate(p), Error);
}
