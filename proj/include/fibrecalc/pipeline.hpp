#pragma once

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fibrecalc/fibresum.hpp"

namespace fibrecalc {

using json = nlohmann::ordered_json;

/// Thrown on malformed pipeline text or schema violations (CLI exit 2).
struct ParseError : Error {
    using Error::Error;
};

/// Thrown when a structurally valid pipeline cannot execute, for example a
/// step references a missing surface or an operation rejects its input
/// (CLI exit 2). Assert mismatches are recorded, not thrown.
struct RunError : Error {
    using Error::Error;
};

struct BlockStep {
    std::string kind;  // s1_x_mk | t4 | z_block
    std::string name;
    std::vector<std::string> h1_labels;  // optional renaming of the generators
};

struct BlowUpStep {
    std::string target;
    int count = 0;
    std::optional<std::string> on_surface;
};

struct ResolveStep {
    std::string target;
    std::string a;
    std::string b;
    std::string new_surface;
};

struct SumSideStep {
    std::string target;
    std::string surface;
    std::optional<std::string> dual;
    // generator-name expressions, one per standard generator of the
    // reference surface (e.g. ["y","d","0","0"] or ["a1","b1","-a1","-b1"])
    std::optional<std::vector<std::string>> images;
};

struct FibreSumStep {
    std::string name;
    SumSideStep left;
    SumSideStep right;
    std::string sigma_label;
    std::string b_label;
    std::vector<std::string> h1_labels;
};

struct AssertStep {
    std::string target;
    std::string check;
    json expected;
    std::optional<std::string> surface;
};

using Step = std::variant<BlockStep, BlowUpStep, ResolveStep, FibreSumStep, AssertStep>;

struct Pipeline {
    std::vector<Step> steps;
};

/// Parses the json pipeline format; validates the schema and that every
/// referenced binding is defined by an earlier step.
Pipeline parse_pipeline(const std::string& text);

json pipeline_to_json(const Pipeline& p);

/// Linear-combination parser for generator images: terms like "y", "-a1",
/// "2*x", joined by + and -. Returns the coefficient vector over labels.
std::vector<Int> parse_generator_expr(const std::string& expr,
                                      const std::vector<std::string>& labels);

struct AssertRecord {
    std::string target;
    std::string check;
    std::optional<std::string> surface;
    json expected;
    json computed;
    bool pass = false;
};

/// One report per manifold binding, in definition order, reflecting the
/// final state plus all assert outcomes against that binding.
struct Report {
    std::string label;
    json data;
};

struct RunOptions {
    bool verbose = false;
    std::ostream* log = nullptr;
};

struct RunOutcome {
    std::vector<Report> reports;
    bool asserts_ok = true;
    bool engine_checks_ok = true;

    bool ok() const { return asserts_ok && engine_checks_ok; }
};

RunOutcome run_pipeline(const Pipeline& p, const RunOptions& opts = {});

enum class ReportFormat { Text, Json };

std::string emit_report(const Report& r, ReportFormat format);
std::string emit_reports(const std::vector<Report>& reports, ReportFormat format);

/// The built-in constructions: YK, Q, U, XK, R, V, Y, X.
Pipeline builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Runs every built-in scenario and the internal consistency suites;
/// returns a deterministic json document. ok is false when anything fails.
struct CheckAllOutcome {
    json document;
    bool ok = true;
};

CheckAllOutcome check_all();

}  // namespace fibrecalc
