#include "fibrecalc/selfcheck.hpp"

#include <random>
#include <sstream>

#include "fibrecalc/fibresum.hpp"

namespace fibrecalc {

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, int lo, int hi) {
    std::uniform_int_distribution<int> entry(lo, hi);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = entry(rng);
    return m;
}

IntMatrix random_unimodular(std::mt19937_64& rng, int n, int ops = 12) {
    IntMatrix m = IntMatrix::identity(n);
    if (n < 1) return m;
    std::uniform_int_distribution<int> idx(0, n - 1);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int k = 0; k < ops; ++k) {
        int i = idx(rng), j = idx(rng);
        switch (kind(rng)) {
            case 0:
                if (i != j) m.add_row_multiple(i, j, Int(coeff(rng)));
                break;
            case 1:
                m.swap_rows(i, j);
                break;
            default:
                m.negate_row(i);
                break;
        }
    }
    return m;
}

}  // namespace

SuiteResult snf_suite(int trials) {
    SuiteResult out{"snf_invariants", trials, 0, ""};
    std::mt19937_64 rng(0x53117445u);
    std::uniform_int_distribution<int> dim(0, 8);
    for (int t = 0; t < trials; ++t) {
        IntMatrix a = random_matrix(rng, dim(rng), dim(rng), -9, 9);
        auto s = smith_normal_form(a);
        bool ok = s.u * a * s.v == s.d && abs(determinant(s.u)) == 1 &&
                  abs(determinant(s.v)) == 1;
        auto diag = s.diagonal();
        for (size_t i = 0; ok && i + 1 < diag.size(); ++i) {
            if (diag[i] == 0)
                ok = diag[i + 1] == 0;
            else
                ok = diag[i] >= 0 && diag[i + 1] % diag[i] == 0;
        }
        if (!ok) ++out.failures;
    }
    return out;
}

SuiteResult signature_congruence_suite(int trials) {
    SuiteResult out{"signature_congruence", trials, 0, ""};
    std::mt19937_64 rng(0x516E4712u);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_int_distribution<int> entry(-5, 5);
    for (int t = 0; t < trials; ++t) {
        int n = dim(rng);
        IntMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) g.at(i, j) = g.at(j, i) = entry(rng);
        IntMatrix p = random_unimodular(rng, n);
        if (!(signature(transpose(p) * g * p) == signature(g))) ++out.failures;
    }
    return out;
}

SuiteResult split_scenario_suite() {
    struct Case {
        Manifold4 manifold;
        std::string sigma;
        std::string b;
    };
    std::vector<Case> cases;

    auto q = blow_up(symplectic_resolve(make_s1_times_mk("Q", {"z", "h"}), "S", "F", "SigmaP"), 2,
                     "SigmaP");
    cases.push_back({q, "SigmaP", "S"});
    cases.push_back({q, "SigmaP", "F"});

    auto r = blow_up(symplectic_resolve(make_t4("R"), "T1", "T2", "SigmaPP"), 2, "SigmaPP");
    cases.push_back({r, "SigmaPP", "T1"});
    cases.push_back({r, "SigmaPP", "T2"});

    auto z = make_z_block();
    cases.push_back({z, "Sigma2p", "T"});

    GluingSpec yk;
    yk.left = GluingSide{make_s1_times_mk("M1"), "S", "F", std::nullopt};
    yk.right = GluingSide{make_s1_times_mk("M2"), "F", "S", std::nullopt};
    yk.label = "YK";
    yk.sigma_label = "T_YK";
    yk.b_label = "Sigma";
    yk.h1_labels = {"y", "d"};
    auto yk_res = fibre_sum(yk);
    cases.push_back({yk_res.manifold, "Sigma", "T_YK"});

    SuiteResult out{"split_unimodular_scenarios", static_cast<int>(cases.size()), 0, ""};
    for (const auto& c : cases) {
        const Manifold4& m = c.manifold;
        auto sigma = m.surface(c.sigma).h2_class;
        auto b = m.surface(c.b).h2_class;
        bool ok = true;
        try {
            auto split = split_unimodular(m.h2, sigma, b);
            for (const auto& v : split.complement_basis)
                ok = ok && pair(v, sigma) == 0 && pair(v, b) == 0;
            const int n = m.b2();
            IntMatrix change(n, n);
            for (int i = 0; i < n; ++i) {
                change.at(i, 0) = sigma.coords[i];
                change.at(i, 1) = b.coords[i];
                for (size_t j = 0; j < split.complement_basis.size(); ++j)
                    change.at(i, 2 + static_cast<int>(j)) = split.complement_basis[j].coords[i];
            }
            ok = ok && abs(determinant(change)) == 1;
            // signature additivity
            IntMatrix mg(2, 2);
            mg.at(0, 0) = pair(sigma, sigma);
            mg.at(0, 1) = mg.at(1, 0) = pair(sigma, b);
            mg.at(1, 1) = pair(b, b);
            Signature sm = signature(mg);
            Signature sc = signature(*split.complement);
            Signature sa = signature(*m.h2);
            ok = ok && sa.b_plus == sm.b_plus + sc.b_plus &&
                 sa.b_minus == sm.b_minus + sc.b_minus;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) ++out.failures;
    }
    return out;
}

SuiteResult rank_nullity_suite(int trials) {
    SuiteResult out{"rank_nullity_random_gluings", trials, 0, ""};
    std::mt19937_64 rng(0x4A2BC901u);
    std::uniform_int_distribution<int> b1_dist(0, 6);
    std::uniform_int_distribution<int> genus_dist(1, 3);
    std::uniform_int_distribution<int> entry(-2, 2);

    auto random_block = [&](const std::string& label, int b1, int g) {
        Manifold4 m;
        m.label = label;
        std::vector<std::string> h1l;
        for (int i = 0; i < b1; ++i) h1l.push_back("g" + std::to_string(i + 1));
        m.h1 = H1Group{FinAbGroup{b1, {}}, h1l};
        m.h2 = make_lattice({"Sg", "Bs"}, IntMatrix{{0, 1}, {1, 0}});
        m.euler = 2 - 2 * b1 + 2;
        m.signature = 0;
        IntMatrix smap(b1, 2 * g);
        for (int i = 0; i < b1; ++i)
            for (int j = 0; j < 2 * g; ++j) smap.at(i, j) = entry(rng);
        m.surfaces.push_back(SurfaceEmbedding{"Sg", g, basis_vector(m.h2, "Sg"), smap, false});
        m.surfaces.push_back(
            SurfaceEmbedding{"Bs", 0, basis_vector(m.h2, "Bs"), IntMatrix(b1, 0), false});
        validate(m);
        return m;
    };

    for (int t = 0; t < trials; ++t) {
        int g = genus_dist(rng);
        GluingSpec s;
        s.left = GluingSide{random_block("L", b1_dist(rng), g), "Sg", "Bs", std::nullopt};
        s.right = GluingSide{random_block("R", b1_dist(rng), g), "Sg", "Bs", std::nullopt};
        s.label = "rand";
        bool ok = true;
        try {
            IntMatrix stacked = vstack(s.left.manifold.surface("Sg").h1_map,
                                       -s.right.manifold.surface("Sg").h1_map);
            int rho = rank(stacked);
            ok = first_homology(s).free_rank ==
                     s.left.manifold.b1() + s.right.manifold.b1() - rho &&
                 rim_tori_group(s).free_rank == 2 * g - rho;
            FibreSumResult r = fibre_sum(s);
            ok = ok &&
                 2 + r.ranks.p_left + r.ranks.p_right + 2 * r.ranks.rim == r.manifold.b2();
            Signature sig = signature(*r.manifold.h2);
            ok = ok && sig.b_plus - sig.b_minus == r.manifold.signature && sig.null_rank == 0;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) ++out.failures;
    }
    return out;
}

std::vector<SuiteResult> run_all_suites() {
    return {snf_suite(), signature_congruence_suite(), split_scenario_suite(),
            rank_nullity_suite()};
}

}  // namespace fibrecalc
