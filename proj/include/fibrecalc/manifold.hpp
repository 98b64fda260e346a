#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fibrecalc/intalg.hpp"
#include "fibrecalc/lattice.hpp"

namespace fibrecalc {

/// H1 with named generators for the free part. Torsion generators are
/// tracked by their orders only.
struct H1Group {
    FinAbGroup group;
    std::vector<std::string> labels;  // one per free generator
};

/// An embedded oriented surface: its genus, class in H2, the images of the
/// standard generators a1,b1,...,ag,bg of the reference surface in H1 of
/// the ambient manifold (free part, one column per generator), and whether
/// the embedding is symplectic. Self-intersection is always derived from
/// the class, never stored.
struct SurfaceEmbedding {
    std::string label;
    int genus = 0;
    LatticeVector h2_class;
    IntMatrix h1_map;  // free_rank(h1) x 2*genus
    bool symplectic = false;
};

/// Full invariant record of a closed oriented 4-manifold.
struct Manifold4 {
    std::string label;
    int euler = 0;
    int signature = 0;
    H1Group h1;
    LatticeRef h2;
    std::optional<LatticeVector> canonical;
    bool symplectic = false;
    std::vector<SurfaceEmbedding> surfaces;

    int b1() const { return h1.group.free_rank; }
    int b2() const { return h2 ? h2->rank() : 0; }

    const SurfaceEmbedding& surface(const std::string& name) const;
    bool has_surface(const std::string& name) const;
};

/// Enforces the type invariants: euler = 2 - 2*b1 + b2, signature bounds
/// and parity, characteristic canonical class, K^2 = 2e + 3*sigma on
/// symplectic manifolds, and adjunction on symplectic surfaces whenever
/// the canonical class is present. Throws on violation.
void validate(const Manifold4& m);

Int self_intersection(const SurfaceEmbedding& s);

// ---- building blocks ----

/// S^1 x (0-surgery on the trefoil): T^2-bundle over T^2 with section S
/// and fibre F, hyperbolic intersection form, K = 0.
Manifold4 make_s1_times_mk(const std::string& label = "S1xMK",
                           const std::vector<std::string>& h1_labels = {"x", "b"});

/// The four-torus with its two marked torus factors T1 = a1 x a2 and
/// T2 = a3 x a4, K = 0.
Manifold4 make_t4(const std::string& label = "T4");

/// T^2 x S^2 blown up four times, carrying a genus-2 fibre Sigma2p whose
/// H1 images are {a1, b1, -a1, -b1}, and the torus T dual to it. The
/// canonical class is deliberately left absent.
Manifold4 make_z_block(const std::string& label = "Z");

/// Connected sum with k reversed-orientation projective planes. Adds
/// exceptional classes E1..Ek of square -1, adds them to the canonical
/// class, and subtracts each from the class of on_surface when given
/// (blow-up at points of that surface; genus unchanged).
Manifold4 blow_up(const Manifold4& m, int k,
                  const std::optional<std::string>& on_surface = std::nullopt);

/// Symplectic resolution of two positively intersecting symplectic
/// surfaces: one new surface of genus g_A + g_B + n - 1 in class A + B,
/// where n = A.B >= 1. Ambient invariants are unchanged.
Manifold4 symplectic_resolve(const Manifold4& m, const std::string& a, const std::string& b,
                             const std::string& new_label);

struct AdjunctionResult {
    bool pass = false;
    Int lhs;  // 2g - 2
    Int rhs;  // class^2 + K.class
};

AdjunctionResult adjunction_check(const Manifold4& m, const std::string& surface);

/// Homology-level model of the manifold: for trivial H1 and odd indefinite
/// form "p CP2 # q CP2bar", for even indefinite signature-zero forms
/// "n(S2xS2)", otherwise the raw invariants. Identification is on the
/// level of homology only.
struct HomologyModel {
    std::string model;
    std::string note;  // fixed caveat string
};

HomologyModel homology_model(const Manifold4& m);

}  // namespace fibrecalc
