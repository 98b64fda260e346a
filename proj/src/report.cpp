#include <sstream>

#include "fibrecalc/pipeline.hpp"
#include "fibrecalc/report_internal.hpp"

namespace fibrecalc {

json json_int(const Int& x) {
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
        return static_cast<long long>(x);
    return x.str();  // exact decimal rendering for out-of-range values
}

json json_group(const FinAbGroup& g) {
    json torsion = json::array();
    for (const Int& t : g.torsion) torsion.push_back(json_int(t));
    return json{{"rank", g.free_rank}, {"torsion", torsion}};
}

json json_matrix(const IntMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(json_int(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

json json_coords(const LatticeVector& v) {
    json out = json::object();
    for (size_t i = 0; i < v.coords.size(); ++i)
        if (v.coords[i] != 0) out[v.home->basis_labels[i]] = json_int(v.coords[i]);
    return out;
}

json manifold_report(const Manifold4& m, const FibreSumResult* fs,
                     const std::vector<AssertRecord>& asserts) {
    json r = json::object();
    r["label"] = m.label;
    r["euler"] = m.euler;
    r["signature"] = m.signature;
    r["b1"] = m.b1();
    r["b2"] = m.b2();
    Signature s = signature(*m.h2);
    r["b2_plus"] = s.b_plus;
    r["b2_minus"] = s.b_minus;
    r["h1"] = json_group(m.h1.group);
    r["h1_generators"] = m.h1.labels;
    r["parity"] = parity(*m.h2) == Parity::Even ? "even" : "odd";
    HomologyModel hm = homology_model(m);
    r["homology_model"] = hm.model;
    r["note"] = hm.note;
    r["h2_basis"] = m.h2->basis_labels;
    r["gram"] = json_matrix(m.h2->gram);

    json surfaces = json::array();
    for (const auto& surf : m.surfaces) {
        json sj = json::object();
        sj["label"] = surf.label;
        sj["genus"] = surf.genus;
        sj["class"] = to_string(surf.h2_class);
        sj["self_intersection"] = json_int(self_intersection(surf));
        sj["symplectic"] = surf.symplectic;
        sj["h1_images"] = json_matrix(surf.h1_map);
        surfaces.push_back(sj);
    }
    r["surfaces"] = surfaces;

    json kj = json::object();
    if (m.canonical) {
        kj["present"] = true;
        kj["coords"] = json_coords(*m.canonical);
        kj["expression"] = to_string(*m.canonical);
        kj["k_squared"] = json_int(pair(*m.canonical, *m.canonical));
    } else {
        kj["present"] = false;
        kj["reason"] = fs ? fs->canonical_absent_reason : "not provided";
    }
    r["canonical_class"] = kj;

    if (fs) {
        r["rim_tori"] = json_group(fs->rim_tori);
        r["vanishing"] = json_group(fs->vanishing);
        json split = json::object();
        split["sigma"] = fs->sigma_surface;
        split["b"] = fs->b_surface;
        auto label_range = [&](int from, int count) {
            json arr = json::array();
            for (int i = 0; i < count; ++i) arr.push_back(m.h2->basis_labels[from + i]);
            return arr;
        };
        split["p_left"] = label_range(2, fs->ranks.p_left);
        split["p_right"] = label_range(2 + fs->ranks.p_left, fs->ranks.p_right);
        split["rim"] = label_range(2 + fs->ranks.p_left + fs->ranks.p_right, fs->ranks.rim);
        split["vanishing"] = label_range(
            2 + fs->ranks.p_left + fs->ranks.p_right + fs->ranks.rim, fs->ranks.vanishing);
        r["splitting"] = split;
        json checks = json::array();
        for (const auto& c : fs->checks) {
            json cj = json::object();
            cj["name"] = c.name;
            cj["status"] = c.status;
            if (!c.detail.empty()) cj["detail"] = c.detail;
            checks.push_back(cj);
        }
        r["checks"] = checks;
    }

    json aj = json::array();
    for (const auto& a : asserts) {
        json one = json::object();
        one["check"] = a.check;
        if (a.surface) one["surface"] = *a.surface;
        one["expected"] = a.expected;
        one["computed"] = a.computed;
        one["status"] = a.pass ? "pass" : "fail";
        aj.push_back(one);
    }
    r["asserts"] = aj;
    return r;
}

namespace {

std::string render_text(const Report& report) {
    const json& r = report.data;
    std::ostringstream os;
    os << "== " << r["label"].get<std::string>() << " ==\n";
    os << "  euler " << r["euler"] << "   signature " << r["signature"] << "   b1 " << r["b1"]
       << "   b2 " << r["b2"] << " (b2+ " << r["b2_plus"] << ", b2- " << r["b2_minus"] << ")\n";
    os << "  H1: ";
    {
        FinAbGroup g;
        g.free_rank = r["h1"]["rank"].get<int>();
        for (const auto& t : r["h1"]["torsion"]) g.torsion.push_back(Int(t.dump()));
        os << to_string(g);
        if (!r["h1_generators"].empty()) {
            os << "  generators:";
            for (const auto& l : r["h1_generators"]) os << " " << l.get<std::string>();
        }
        os << "\n";
    }
    os << "  parity: " << r["parity"].get<std::string>() << "\n";
    os << "  homology model: " << r["homology_model"].get<std::string>() << "  ["
       << r["note"].get<std::string>() << "]\n";
    os << "  H2 basis:";
    for (const auto& l : r["h2_basis"]) os << " " << l.get<std::string>();
    os << "\n  gram:\n";
    for (const auto& row : r["gram"]) {
        os << "    [";
        for (const auto& e : row) os << " " << e;
        os << " ]\n";
    }
    os << "  surfaces:\n";
    for (const auto& sj : r["surfaces"]) {
        os << "    " << sj["label"].get<std::string>() << ": genus " << sj["genus"]
           << ", class " << sj["class"].get<std::string>() << ", self-intersection "
           << sj["self_intersection"] << (sj["symplectic"].get<bool>() ? ", symplectic" : "")
           << "\n";
    }
    const json& kj = r["canonical_class"];
    if (kj["present"].get<bool>()) {
        os << "  canonical class: " << kj["expression"].get<std::string>()
           << "  (K^2 = " << kj["k_squared"] << ")\n";
    } else {
        os << "  canonical class: absent (" << kj["reason"].get<std::string>() << ")\n";
    }
    if (r.contains("rim_tori")) {
        FinAbGroup g;
        g.free_rank = r["rim_tori"]["rank"].get<int>();
        for (const auto& t : r["rim_tori"]["torsion"]) g.torsion.push_back(Int(t.dump()));
        os << "  rim tori: " << to_string(g) << "   vanishing rank: "
           << r["vanishing"]["rank"] << "\n";
        const json& sp = r["splitting"];
        auto arr = [&](const char* key) {
            std::ostringstream s2;
            s2 << "[";
            bool first = true;
            for (const auto& l : sp[key]) {
                if (!first) s2 << " ";
                s2 << l.get<std::string>();
                first = false;
            }
            s2 << "]";
            return s2.str();
        };
        os << "  splitting: sigma=" << sp["sigma"].get<std::string>() << " b="
           << sp["b"].get<std::string>() << " p_left=" << arr("p_left") << " p_right="
           << arr("p_right") << " rim=" << arr("rim") << " vanishing=" << arr("vanishing")
           << "\n";
        os << "  checks:";
        for (const auto& c : r["checks"]) {
            os << " " << c["name"].get<std::string>() << "=" << c["status"].get<std::string>();
        }
        os << "\n";
    }
    if (!r["asserts"].empty()) {
        os << "  asserts:\n";
        for (const auto& a : r["asserts"]) {
            os << "    " << a["check"].get<std::string>();
            if (a.contains("surface")) os << "(" << a["surface"].get<std::string>() << ")";
            os << ": expected " << a["expected"].dump() << ", computed " << a["computed"].dump()
               << " -> " << a["status"].get<std::string>() << "\n";
        }
    }
    return os.str();
}

}  // namespace

std::string emit_report(const Report& r, ReportFormat format) {
    if (format == ReportFormat::Json) return r.data.dump(2);
    return render_text(r);
}

std::string emit_reports(const std::vector<Report>& reports, ReportFormat format) {
    if (format == ReportFormat::Json) {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(r.data);
        return arr.dump(2);
    }
    std::ostringstream os;
    for (const auto& r : reports) os << emit_report(r, format);
    return os.str();
}

}  // namespace fibrecalc
