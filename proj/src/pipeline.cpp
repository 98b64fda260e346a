#include "fibrecalc/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "fibrecalc/report_internal.hpp"
#include "fibrecalc/selfcheck.hpp"

namespace fibrecalc {

// ---------------------------------------------------------------- parsing

namespace {

std::string require_string(const json& j, const char* key, const char* op) {
    if (!j.contains(key) || !j[key].is_string())
        throw ParseError(std::string(op) + " step needs a string field '" + key + "'");
    return j[key].get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    if (!j[key].is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

std::vector<std::string> optional_string_list(const json& j, const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
    for (const auto& e : j[key]) {
        if (!e.is_string())
            throw ParseError(std::string("field '") + key + "' must contain strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

SumSideStep parse_side(const json& j, const char* which) {
    if (!j.is_object()) throw ParseError(std::string("fibre_sum '") + which + "' must be an object");
    SumSideStep s;
    s.target = require_string(j, "target", "fibre_sum side");
    s.surface = require_string(j, "surface", "fibre_sum side");
    s.dual = optional_string(j, "dual");
    if (j.contains("images")) s.images = optional_string_list(j, "images");
    return s;
}

const std::set<std::string> kBlockKinds{"s1_x_mk", "t4", "z_block"};

}  // namespace

Pipeline parse_pipeline(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array())
        throw ParseError("pipeline document must be an object with a 'steps' array");

    Pipeline p;
    std::set<std::string> defined;
    auto require_defined = [&](const std::string& name, size_t idx) {
        if (!defined.count(name)) {
            std::ostringstream os;
            os << "step " << idx << ": name '" << name << "' is not defined by an earlier step";
            throw ParseError(os.str());
        }
    };

    size_t idx = 0;
    for (const auto& sj : doc["steps"]) {
        if (!sj.is_object() || !sj.contains("op") || !sj["op"].is_string())
            throw ParseError("every step must be an object with an 'op' field");
        const std::string op = sj["op"].get<std::string>();
        if (op == "block") {
            BlockStep s;
            s.kind = require_string(sj, "kind", "block");
            if (!kBlockKinds.count(s.kind))
                throw ParseError("unknown block kind '" + s.kind + "'");
            s.name = require_string(sj, "name", "block");
            s.h1_labels = optional_string_list(sj, "h1_labels");
            defined.insert(s.name);
            p.steps.emplace_back(std::move(s));
        } else if (op == "blow_up") {
            BlowUpStep s;
            s.target = require_string(sj, "target", "blow_up");
            require_defined(s.target, idx);
            if (!sj.contains("count") || !sj["count"].is_number_integer())
                throw ParseError("blow_up step needs an integer 'count'");
            s.count = sj["count"].get<int>();
            s.on_surface = optional_string(sj, "on_surface");
            p.steps.emplace_back(std::move(s));
        } else if (op == "resolve") {
            ResolveStep s;
            s.target = require_string(sj, "target", "resolve");
            require_defined(s.target, idx);
            s.a = require_string(sj, "a", "resolve");
            s.b = require_string(sj, "b", "resolve");
            s.new_surface = require_string(sj, "new_surface", "resolve");
            p.steps.emplace_back(std::move(s));
        } else if (op == "fibre_sum") {
            FibreSumStep s;
            s.name = require_string(sj, "name", "fibre_sum");
            if (!sj.contains("left") || !sj.contains("right"))
                throw ParseError("fibre_sum step needs 'left' and 'right' sides");
            s.left = parse_side(sj["left"], "left");
            s.right = parse_side(sj["right"], "right");
            require_defined(s.left.target, idx);
            require_defined(s.right.target, idx);
            if (auto v = optional_string(sj, "sigma_label")) s.sigma_label = *v;
            if (auto v = optional_string(sj, "b_label")) s.b_label = *v;
            s.h1_labels = optional_string_list(sj, "h1_labels");
            defined.insert(s.name);
            p.steps.emplace_back(std::move(s));
        } else if (op == "assert") {
            AssertStep s;
            s.target = require_string(sj, "target", "assert");
            require_defined(s.target, idx);
            s.check = require_string(sj, "check", "assert");
            if (!sj.contains("expected"))
                throw ParseError("assert step needs an 'expected' field");
            s.expected = sj["expected"];
            s.surface = optional_string(sj, "surface");
            p.steps.emplace_back(std::move(s));
        } else {
            throw ParseError("unknown op '" + op + "'");
        }
        ++idx;
    }
    return p;
}

json pipeline_to_json(const Pipeline& p) {
    json steps = json::array();
    for (const auto& step : p.steps) {
        json sj = json::object();
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, BlockStep>) {
                    sj["op"] = "block";
                    sj["kind"] = s.kind;
                    sj["name"] = s.name;
                    if (!s.h1_labels.empty()) sj["h1_labels"] = s.h1_labels;
                } else if constexpr (std::is_same_v<T, BlowUpStep>) {
                    sj["op"] = "blow_up";
                    sj["target"] = s.target;
                    sj["count"] = s.count;
                    if (s.on_surface) sj["on_surface"] = *s.on_surface;
                } else if constexpr (std::is_same_v<T, ResolveStep>) {
                    sj["op"] = "resolve";
                    sj["target"] = s.target;
                    sj["a"] = s.a;
                    sj["b"] = s.b;
                    sj["new_surface"] = s.new_surface;
                } else if constexpr (std::is_same_v<T, FibreSumStep>) {
                    sj["op"] = "fibre_sum";
                    sj["name"] = s.name;
                    auto side = [](const SumSideStep& ss) {
                        json out = json::object();
                        out["target"] = ss.target;
                        out["surface"] = ss.surface;
                        if (ss.dual) out["dual"] = *ss.dual;
                        if (ss.images) out["images"] = *ss.images;
                        return out;
                    };
                    sj["left"] = side(s.left);
                    sj["right"] = side(s.right);
                    if (!s.sigma_label.empty()) sj["sigma_label"] = s.sigma_label;
                    if (!s.b_label.empty()) sj["b_label"] = s.b_label;
                    if (!s.h1_labels.empty()) sj["h1_labels"] = s.h1_labels;
                } else if constexpr (std::is_same_v<T, AssertStep>) {
                    sj["op"] = "assert";
                    sj["target"] = s.target;
                    sj["check"] = s.check;
                    if (s.surface) sj["surface"] = *s.surface;
                    sj["expected"] = s.expected;
                }
            },
            step);
        steps.push_back(sj);
    }
    return json{{"steps", steps}};
}

// --------------------------------------------- generator-image expressions

std::vector<Int> parse_generator_expr(const std::string& expr,
                                      const std::vector<std::string>& labels) {
    std::vector<Int> coeffs(labels.size(), Int(0));
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < expr.size() && std::isspace(static_cast<unsigned char>(expr[i]))) ++i;
    };
    skip_ws();
    if (i == expr.size()) throw RunError("empty generator expression");
    bool first = true;
    while (i < expr.size()) {
        skip_ws();
        Int sign = 1;
        if (expr[i] == '+' || expr[i] == '-') {
            if (expr[i] == '-') sign = -1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw RunError("expected '+' or '-' in generator expression '" + expr + "'");
        }
        first = false;
        // optional integer coefficient
        Int coeff = 1;
        bool saw_digits = false;
        size_t digit_start = i;
        while (i < expr.size() && std::isdigit(static_cast<unsigned char>(expr[i]))) ++i;
        if (i > digit_start) {
            saw_digits = true;
            coeff = Int(expr.substr(digit_start, i - digit_start));
        }
        skip_ws();
        if (i < expr.size() && expr[i] == '*') {
            if (!saw_digits)
                throw RunError("'*' without coefficient in generator expression '" + expr + "'");
            ++i;
            skip_ws();
        }
        // optional generator name
        size_t name_start = i;
        while (i < expr.size() &&
               (std::isalnum(static_cast<unsigned char>(expr[i])) || expr[i] == '_'))
            ++i;
        std::string name = expr.substr(name_start, i - name_start);
        if (name.empty()) {
            if (!saw_digits)
                throw RunError("malformed generator expression '" + expr + "'");
            if (coeff != 0)
                throw RunError("bare nonzero constant in generator expression '" + expr + "'");
        } else {
            auto it = std::find(labels.begin(), labels.end(), name);
            if (it == labels.end())
                throw RunError("unknown generator '" + name + "' in expression '" + expr + "'");
            coeffs[static_cast<size_t>(it - labels.begin())] += sign * coeff;
        }
        skip_ws();
    }
    return coeffs;
}

// ----------------------------------------------------------------- runner

namespace {

struct Binding {
    Manifold4 manifold;
    std::optional<FibreSumResult> sum;
    int order = 0;
};

using Bindings = std::map<std::string, Binding>;

Binding& lookup(Bindings& b, const std::string& name) {
    auto it = b.find(name);
    if (it == b.end()) throw RunError("undefined manifold '" + name + "'");
    return it->second;
}

IntMatrix images_matrix(const std::vector<std::string>& exprs, const Manifold4& m, int genus) {
    if (static_cast<int>(exprs.size()) != 2 * genus) {
        std::ostringstream os;
        os << "expected " << 2 * genus << " generator images, got " << exprs.size();
        throw RunError(os.str());
    }
    IntMatrix out(m.b1(), 2 * genus);
    for (size_t c = 0; c < exprs.size(); ++c) {
        std::vector<Int> col = parse_generator_expr(exprs[c], m.h1.labels);
        for (int r = 0; r < m.b1(); ++r) out.at(r, static_cast<int>(c)) = col[r];
    }
    return out;
}

GluingSide make_side(Bindings& bindings, const SumSideStep& s) {
    const Binding& b = lookup(bindings, s.target);
    GluingSide side;
    side.manifold = b.manifold;
    side.surface = s.surface;
    side.dual = s.dual;
    if (s.images) {
        int genus = b.manifold.surface(s.surface).genus;
        side.images = images_matrix(*s.images, b.manifold, genus);
    }
    return side;
}

// one assert evaluation: fills computed and pass
void evaluate_assert(const AssertStep& step, const Binding& binding, AssertRecord& rec) {
    const Manifold4& m = binding.manifold;
    const FibreSumResult* fs = binding.sum ? &*binding.sum : nullptr;
    const json& exp = step.expected;
    auto need_sum = [&]() -> const FibreSumResult& {
        if (!fs)
            throw RunError("check '" + step.check + "' applies only to fibre-sum results");
        return *fs;
    };
    auto need_surface = [&]() -> const SurfaceEmbedding& {
        if (!step.surface)
            throw RunError("check '" + step.check + "' needs a 'surface' field");
        return m.surface(*step.surface);
    };

    const std::string& c = step.check;
    if (c == "euler") {
        rec.computed = m.euler;
    } else if (c == "signature") {
        rec.computed = m.signature;
    } else if (c == "b1" || c == "h1_rank") {
        rec.computed = m.b1();
    } else if (c == "b2") {
        rec.computed = m.b2();
    } else if (c == "b2_plus") {
        rec.computed = signature(*m.h2).b_plus;
    } else if (c == "b2_minus") {
        rec.computed = signature(*m.h2).b_minus;
    } else if (c == "h1_torsion") {
        json arr = json::array();
        for (const Int& t : m.h1.group.torsion) arr.push_back(json_int(t));
        rec.computed = arr;
    } else if (c == "parity") {
        rec.computed = parity(*m.h2) == Parity::Even ? "even" : "odd";
    } else if (c == "homology_model") {
        rec.computed = homology_model(m).model;
    } else if (c == "gram") {
        rec.computed = json_matrix(m.h2->gram);
    } else if (c == "k_squared") {
        rec.computed =
            m.canonical ? json_int(pair(*m.canonical, *m.canonical)) : json("absent");
    } else if (c == "canonical") {
        rec.computed = m.canonical ? json_coords(*m.canonical) : json("absent");
    } else if (c == "canonical_absent") {
        if (m.canonical) {
            rec.computed = "present";
        } else {
            std::string reason = fs ? fs->canonical_absent_reason : "not provided";
            rec.computed = reason;
            // expected may be `true` or a substring of the reason
            if (exp.is_boolean()) {
                rec.pass = exp.get<bool>();
            } else if (exp.is_string()) {
                rec.pass = reason.find(exp.get<std::string>()) != std::string::npos;
            }
            return;
        }
        rec.pass = false;
        return;
    } else if (c == "canonical_decomp") {
        const FibreSumResult& r = need_sum();
        if (!m.canonical) {
            rec.computed = "absent";
            rec.pass = false;
            return;
        }
        if (!exp.is_object())
            throw RunError("canonical_decomp expects an object "
                           "{sigma, b, left?, right?}");
        LatticeVector expected_k = zero_vector(m.h2);
        expected_k.coords[0] = Int(exp.value("sigma", 0));
        expected_k.coords[1] = Int(exp.value("b", 0));
        auto fill = [&](const char* key, const GluingSide& side, const SplitLattice& split,
                        int offset) {
            if (!exp.contains(key)) return;
            std::map<std::string, Int> coeffs;
            for (const auto& [label, value] : exp[key].items())
                coeffs[label] = Int(value.get<long long>());
            LatticeVector v = from_coeffs(side.manifold.h2, coeffs);
            auto coords = complement_coords(split, v);
            if (!coords)
                throw RunError(std::string("canonical_decomp: '") + key +
                               "' expression does not lie in the orthogonal complement");
            for (size_t i = 0; i < coords->size(); ++i)
                expected_k.coords[offset + i] = (*coords)[i];
        };
        fill("left", r.spec.left, r.left_split, 2);
        fill("right", r.spec.right, r.right_split, 2 + r.ranks.p_left);
        rec.computed = json_coords(*m.canonical);
        rec.pass = *m.canonical == expected_k;
        return;
    } else if (c == "rim_tori_rank") {
        rec.computed = need_sum().rim_tori.free_rank;
    } else if (c == "rim_tori_torsion") {
        json arr = json::array();
        for (const Int& t : need_sum().rim_tori.torsion) arr.push_back(json_int(t));
        rec.computed = arr;
    } else if (c == "vanishing_rank") {
        rec.computed = need_sum().vanishing.free_rank;
    } else if (c == "splitting_ranks") {
        const SplittingRanks& ranks = need_sum().ranks;
        rec.computed = json{{"pair", ranks.pair_rank},
                            {"p_left", ranks.p_left},
                            {"p_right", ranks.p_right},
                            {"rim", ranks.rim},
                            {"vanishing", ranks.vanishing}};
    } else if (c == "genus") {
        rec.computed = need_surface().genus;
    } else if (c == "self_intersection") {
        rec.computed = json_int(self_intersection(need_surface()));
    } else if (c == "adjunction") {
        auto a = adjunction_check(m, need_surface().label);
        rec.computed = a.pass ? "pass" : "fail";
    } else if (c == "engine_checks") {
        rec.computed = need_sum().all_checks_pass() ? "pass" : "fail";
    } else if (c == "form_iso") {
        const FibreSumResult& r = need_sum();
        if (!exp.is_string())
            throw RunError("form_iso expects the reference binding name as a string");
        // evaluated against the sides stored in the sum
        const std::string ref = exp.get<std::string>();
        const Manifold4* reference = nullptr;
        if (r.spec.left.manifold.label == ref) reference = &r.spec.left.manifold;
        if (r.spec.right.manifold.label == ref) reference = &r.spec.right.manifold;
        if (!reference) throw RunError("form_iso: unknown reference '" + ref + "'");
        auto iso = form_isomorphism_check(r, *reference);
        rec.computed = iso.pass ? "pass" : json(iso.detail);
        rec.pass = iso.pass;
        return;
    } else {
        throw RunError("unknown check '" + c + "'");
    }
    rec.pass = rec.computed == exp;
}

}  // namespace

RunOutcome run_pipeline(const Pipeline& p, const RunOptions& opts) {
    Bindings bindings;
    std::map<std::string, std::vector<AssertRecord>> asserts;
    std::vector<std::string> order;
    RunOutcome out;

    auto bind = [&](const std::string& name, Manifold4 m, std::optional<FibreSumResult> sum) {
        auto it = bindings.find(name);
        if (it == bindings.end()) {
            bindings[name] = Binding{std::move(m), std::move(sum),
                                     static_cast<int>(order.size())};
            order.push_back(name);
        } else {
            it->second.manifold = std::move(m);
            it->second.sum = std::move(sum);
        }
    };

    size_t idx = 0;
    for (const auto& step : p.steps) {
        try {
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, BlockStep>) {
                        Manifold4 m;
                        if (s.kind == "s1_x_mk") {
                            m = s.h1_labels.empty() ? make_s1_times_mk(s.name)
                                                    : make_s1_times_mk(s.name, s.h1_labels);
                        } else if (s.kind == "t4") {
                            m = make_t4(s.name);
                        } else {
                            m = make_z_block(s.name);
                        }
                        if (s.kind != "s1_x_mk" && !s.h1_labels.empty()) {
                            if (static_cast<int>(s.h1_labels.size()) != m.b1())
                                throw RunError("wrong number of h1_labels for block '" +
                                               s.name + "'");
                            m.h1.labels = s.h1_labels;
                            validate(m);
                        }
                        bind(s.name, std::move(m), std::nullopt);
                    } else if constexpr (std::is_same_v<T, BlowUpStep>) {
                        Binding& b = lookup(bindings, s.target);
                        bind(s.target, blow_up(b.manifold, s.count, s.on_surface),
                             std::nullopt);
                    } else if constexpr (std::is_same_v<T, ResolveStep>) {
                        Binding& b = lookup(bindings, s.target);
                        bind(s.target,
                             symplectic_resolve(b.manifold, s.a, s.b, s.new_surface),
                             std::nullopt);
                    } else if constexpr (std::is_same_v<T, FibreSumStep>) {
                        GluingSpec spec;
                        spec.left = make_side(bindings, s.left);
                        spec.right = make_side(bindings, s.right);
                        spec.label = s.name;
                        spec.sigma_label = s.sigma_label;
                        spec.b_label = s.b_label;
                        spec.h1_labels = s.h1_labels;
                        FibreSumResult r = fibre_sum(spec);
                        Manifold4 m = r.manifold;
                        bind(s.name, std::move(m), std::move(r));
                    } else if constexpr (std::is_same_v<T, AssertStep>) {
                        Binding& b = lookup(bindings, s.target);
                        AssertRecord rec;
                        rec.target = s.target;
                        rec.check = s.check;
                        rec.surface = s.surface;
                        rec.expected = s.expected;
                        evaluate_assert(s, b, rec);
                        if (!rec.pass) out.asserts_ok = false;
                        asserts[s.target].push_back(std::move(rec));
                    }
                },
                step);
        } catch (const RunError&) {
            throw;
        } catch (const Error& e) {
            std::ostringstream os;
            os << "step " << idx << ": " << e.what();
            throw RunError(os.str());
        }
        if (opts.verbose && opts.log) {
            // names touched by this step: report the affected binding
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    std::string name;
                    if constexpr (std::is_same_v<T, BlockStep>)
                        name = s.name;
                    else if constexpr (std::is_same_v<T, BlowUpStep>)
                        name = s.target;
                    else if constexpr (std::is_same_v<T, ResolveStep>)
                        name = s.target;
                    else if constexpr (std::is_same_v<T, FibreSumStep>)
                        name = s.name;
                    else
                        return;  // asserts are summarized in the final report
                    const Binding& b = bindings.at(name);
                    Report rep{name, manifold_report(
                                         b.manifold, b.sum ? &*b.sum : nullptr, {})};
                    (*opts.log) << "-- after step " << idx << " --\n"
                                << emit_report(rep, ReportFormat::Text);
                },
                step);
        }
        ++idx;
    }

    for (const auto& name : order) {
        const Binding& b = bindings.at(name);
        if (b.sum && !b.sum->all_checks_pass()) out.engine_checks_ok = false;
        auto it = asserts.find(name);
        static const std::vector<AssertRecord> none;
        const auto& recs = it == asserts.end() ? none : it->second;
        out.reports.push_back(
            Report{name, manifold_report(b.manifold, b.sum ? &*b.sum : nullptr, recs)});
    }
    return out;
}

// ------------------------------------------------------------- check-all

CheckAllOutcome check_all() {
    CheckAllOutcome out;
    json scenarios = json::array();
    for (const auto& name : builtin_scenario_names()) {
        Pipeline p = builtin_scenario(name);
        RunOutcome run = run_pipeline(p);
        json sj = json::object();
        sj["scenario"] = name;
        sj["status"] = run.ok() ? "pass" : "fail";
        json reports = json::array();
        for (const auto& r : run.reports) reports.push_back(r.data);
        sj["reports"] = reports;
        if (!run.ok()) out.ok = false;
        scenarios.push_back(sj);
    }
    json suites = json::array();
    for (const auto& s : run_all_suites()) {
        json sj = json::object();
        sj["suite"] = s.name;
        sj["trials"] = s.trials;
        sj["failures"] = s.failures;
        sj["status"] = s.failures == 0 ? "pass" : "fail";
        if (s.failures != 0) out.ok = false;
        suites.push_back(sj);
    }
    out.document = json::object();
    out.document["scenarios"] = scenarios;
    out.document["selfchecks"] = suites;
    out.document["status"] = out.ok ? "pass" : "fail";
    return out;
}

}  // namespace fibrecalc
