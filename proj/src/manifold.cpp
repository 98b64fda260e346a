#include "fibrecalc/manifold.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fibrecalc {

const SurfaceEmbedding& Manifold4::surface(const std::string& name) const {
    for (const auto& s : surfaces)
        if (s.label == name) return s;
    throw Error("manifold '" + label + "' has no surface '" + name + "'");
}

bool Manifold4::has_surface(const std::string& name) const {
    return std::any_of(surfaces.begin(), surfaces.end(),
                       [&](const SurfaceEmbedding& s) { return s.label == name; });
}

Int self_intersection(const SurfaceEmbedding& s) { return pair(s.h2_class, s.h2_class); }

void validate(const Manifold4& m) {
    auto fail = [&](const std::string& msg) {
        throw Error("manifold '" + m.label + "': " + msg);
    };
    if (!m.h2) fail("missing H2 lattice");
    if (static_cast<int>(m.h1.labels.size()) != m.h1.group.free_rank)
        fail("H1 generator labels must match the free rank");
    std::set<std::string> seen(m.h1.labels.begin(), m.h1.labels.end());
    if (seen.size() != m.h1.labels.size()) fail("H1 generator labels must be distinct");

    const int b1 = m.b1();
    const int b2 = m.b2();
    if (m.euler != 2 - 2 * b1 + b2) {
        std::ostringstream os;
        os << "euler characteristic " << m.euler << " inconsistent with b1=" << b1
           << ", b2=" << b2;
        fail(os.str());
    }
    if (m.signature > b2 || m.signature < -b2) fail("|signature| exceeds b2");
    if ((m.signature - b2) % 2 != 0) fail("signature and b2 have different parity");

    if (m.canonical) {
        if (!same_lattice(*m.canonical->home, *m.h2)) fail("canonical class lives off H2");
        if (!is_characteristic(*m.canonical)) fail("canonical class is not characteristic");
        if (m.symplectic) {
            Int k2 = pair(*m.canonical, *m.canonical);
            if (k2 != 2 * m.euler + 3 * m.signature) {
                std::ostringstream os;
                os << "K^2 = " << k2 << " but 2e+3sigma = " << 2 * m.euler + 3 * m.signature;
                fail(os.str());
            }
        }
    }

    std::set<std::string> snames;
    for (const auto& s : m.surfaces) {
        if (!snames.insert(s.label).second) fail("duplicate surface label '" + s.label + "'");
        if (s.genus < 0) fail("surface '" + s.label + "' has negative genus");
        if (!same_lattice(*s.h2_class.home, *m.h2))
            fail("surface '" + s.label + "' class lives off H2");
        if (s.h1_map.rows() != b1 || s.h1_map.cols() != 2 * s.genus)
            fail("surface '" + s.label + "' has an H1 map of wrong shape");
        if (s.symplectic && m.canonical) {
            Int lhs = 2 * s.genus - 2;
            Int rhs = self_intersection(s) + pair(*m.canonical, s.h2_class);
            if (lhs != rhs) {
                std::ostringstream os;
                os << "adjunction fails on symplectic surface '" << s.label << "': 2g-2 = "
                   << lhs << " vs " << rhs;
                fail(os.str());
            }
        }
    }
}

Manifold4 make_s1_times_mk(const std::string& label, const std::vector<std::string>& h1_labels) {
    if (h1_labels.size() != 2) throw Error("make_s1_times_mk needs exactly two H1 labels");
    Manifold4 m;
    m.label = label;
    m.euler = 0;
    m.signature = 0;
    m.h1 = H1Group{FinAbGroup{2, {}}, h1_labels};
    m.h2 = make_lattice({"S", "F"}, IntMatrix{{0, 1}, {1, 0}});
    m.canonical = zero_vector(m.h2);
    m.symplectic = true;
    // section: circles map isomorphically to (x, b); fibre: H1 images vanish
    m.surfaces.push_back(
        SurfaceEmbedding{"S", 1, basis_vector(m.h2, "S"), IntMatrix::identity(2), true});
    m.surfaces.push_back(SurfaceEmbedding{"F", 1, basis_vector(m.h2, "F"), IntMatrix(2, 2), true});
    validate(m);
    return m;
}

Manifold4 make_t4(const std::string& label) {
    Manifold4 m;
    m.label = label;
    m.euler = 0;
    m.signature = 0;
    m.h1 = H1Group{FinAbGroup{4, {}}, {"alpha1", "alpha2", "alpha3", "alpha4"}};
    IntMatrix g(6, 6);
    g.at(0, 1) = g.at(1, 0) = 1;  // T1.T2
    g.at(2, 3) = g.at(3, 2) = 1;
    g.at(4, 5) = g.at(5, 4) = 1;
    m.h2 = make_lattice({"T1", "T2", "A13", "A24", "A14", "A23"}, std::move(g));
    m.canonical = zero_vector(m.h2);
    m.symplectic = true;
    IntMatrix t1_map(4, 2);
    t1_map.at(0, 0) = 1;
    t1_map.at(1, 1) = 1;
    IntMatrix t2_map(4, 2);
    t2_map.at(2, 0) = 1;
    t2_map.at(3, 1) = 1;
    m.surfaces.push_back(SurfaceEmbedding{"T1", 1, basis_vector(m.h2, "T1"), t1_map, true});
    m.surfaces.push_back(SurfaceEmbedding{"T2", 1, basis_vector(m.h2, "T2"), t2_map, true});
    validate(m);
    return m;
}

Manifold4 make_z_block(const std::string& label) {
    Manifold4 m;
    m.label = label;
    m.euler = 4;
    m.signature = -4;
    m.h1 = H1Group{FinAbGroup{2, {}}, {"a1", "b1"}};
    IntMatrix g(6, 6);
    g.at(0, 1) = g.at(1, 0) = 1;
    for (int i = 2; i < 6; ++i) g.at(i, i) = -1;
    m.h2 = make_lattice({"T", "S2", "E1", "E2", "E3", "E4"}, std::move(g));
    // The canonical class of this block is deliberately not shipped.
    m.symplectic = true;
    // genus-2 fibre class: 2T + S2 - E1 - E2 - E3 - E4, square zero
    auto fibre = from_coeffs(m.h2, {{"T", Int(2)},
                                    {"S2", Int(1)},
                                    {"E1", Int(-1)},
                                    {"E2", Int(-1)},
                                    {"E3", Int(-1)},
                                    {"E4", Int(-1)}});
    IntMatrix fibre_map{{1, 0, -1, 0}, {0, 1, 0, -1}};
    m.surfaces.push_back(SurfaceEmbedding{"Sigma2p", 2, fibre, fibre_map, true});
    m.surfaces.push_back(
        SurfaceEmbedding{"T", 1, basis_vector(m.h2, "T"), IntMatrix::identity(2), true});
    validate(m);
    return m;
}

namespace {

std::vector<std::string> fresh_exceptional_labels(const Lattice& l, int k) {
    int next = 1;
    auto taken = [&](int idx) {
        return std::find(l.basis_labels.begin(), l.basis_labels.end(),
                         "E" + std::to_string(idx)) != l.basis_labels.end();
    };
    std::vector<std::string> out;
    while (static_cast<int>(out.size()) < k) {
        while (taken(next)) ++next;
        out.push_back("E" + std::to_string(next));
        ++next;
    }
    return out;
}

std::vector<Int> extend(const std::vector<Int>& coords, int extra) {
    std::vector<Int> out = coords;
    out.insert(out.end(), extra, Int(0));
    return out;
}

}  // namespace

Manifold4 blow_up(const Manifold4& m, int k, const std::optional<std::string>& on_surface) {
    if (k < 0) throw Error("blow_up count must be nonnegative");
    if (on_surface && !m.has_surface(*on_surface))
        throw Error("blow_up: unknown surface '" + *on_surface + "'");
    if (k == 0) return m;

    std::vector<std::string> e_labels = fresh_exceptional_labels(*m.h2, k);
    const int n = m.b2();
    std::vector<std::string> labels = m.h2->basis_labels;
    labels.insert(labels.end(), e_labels.begin(), e_labels.end());
    IntMatrix g(n + k, n + k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = m.h2->gram.at(i, j);
    for (int i = 0; i < k; ++i) g.at(n + i, n + i) = -1;

    Manifold4 out;
    out.label = m.label;
    out.euler = m.euler + k;
    out.signature = m.signature - k;
    out.h1 = m.h1;
    out.h2 = make_lattice(std::move(labels), std::move(g));
    out.symplectic = m.symplectic;
    if (m.canonical) {
        LatticeVector kc{out.h2, extend(m.canonical->coords, k)};
        for (int i = 0; i < k; ++i) kc.coords[n + i] = 1;
        out.canonical = kc;
    }
    for (const auto& s : m.surfaces) {
        SurfaceEmbedding ns = s;
        ns.h2_class = LatticeVector{out.h2, extend(s.h2_class.coords, k)};
        if (on_surface && s.label == *on_surface)
            for (int i = 0; i < k; ++i) ns.h2_class.coords[n + i] = -1;
        out.surfaces.push_back(std::move(ns));
    }
    validate(out);
    return out;
}

Manifold4 symplectic_resolve(const Manifold4& m, const std::string& a, const std::string& b,
                             const std::string& new_label) {
    const SurfaceEmbedding& sa = m.surface(a);
    const SurfaceEmbedding& sb = m.surface(b);
    Int n = pair(sa.h2_class, sb.h2_class);
    if (n < 1) {
        std::ostringstream os;
        os << "symplectic_resolve requires algebraic intersection >= 1, got " << n;
        throw Error(os.str());
    }
    if (!sa.symplectic || !sb.symplectic)
        throw Error("symplectic_resolve requires symplectic surfaces");
    if (m.has_surface(new_label)) throw Error("surface '" + new_label + "' already exists");

    Manifold4 out = m;
    SurfaceEmbedding ns;
    ns.label = new_label;
    ns.genus = sa.genus + sb.genus + static_cast<int>(n) - 1;
    ns.h2_class = sa.h2_class + sb.h2_class;
    // A's generators, then B's; the n-1 extra handles produced by the
    // smoothing live in a ball around the intersection points, so their
    // circles have zero image in H1.
    ns.h1_map = hstack(hstack(sa.h1_map, sb.h1_map),
                       IntMatrix(m.b1(), 2 * (static_cast<int>(n) - 1)));
    ns.symplectic = true;
    out.surfaces.push_back(std::move(ns));
    validate(out);
    return out;
}

AdjunctionResult adjunction_check(const Manifold4& m, const std::string& surface) {
    if (!m.canonical)
        throw Error("adjunction_check: manifold '" + m.label + "' has no canonical class");
    const SurfaceEmbedding& s = m.surface(surface);
    AdjunctionResult r;
    r.lhs = 2 * s.genus - 2;
    r.rhs = self_intersection(s) + pair(*m.canonical, s.h2_class);
    r.pass = r.lhs == r.rhs;
    return r;
}

HomologyModel homology_model(const Manifold4& m) {
    HomologyModel out;
    out.note = "homology-level only — π₁ not computed";
    Signature s = signature(*m.h2);
    Parity p = parity(*m.h2);
    std::ostringstream os;
    if (m.h1.group.trivial()) {
        if (p == Parity::Odd && s.b_plus > 0 && s.b_minus > 0 && s.null_rank == 0) {
            os << s.b_plus << " ℂP² # " << s.b_minus << " ℂP²bar (homology)";
            out.model = os.str();
            return out;
        }
        if (p == Parity::Even && s.b_plus == s.b_minus && s.b_plus > 0 && s.null_rank == 0) {
            os << s.b_plus << "(S²×S²) (homology)";
            out.model = os.str();
            return out;
        }
    }
    os << "rank " << m.b2() << ", signature " << m.signature << ", "
       << (p == Parity::Even ? "even" : "odd");
    if (!m.h1.group.trivial()) os << ", H1 = " << to_string(m.h1.group);
    os << " (homology)";
    out.model = os.str();
    return out;
}

}  // namespace fibrecalc
