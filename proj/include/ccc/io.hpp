#pragma once

// JSON documents, job configuration and report emission for the command-line tool.
//
// Rationals travel as "p/q" strings (integers are also accepted on input).  Every
// document may carry "type" and "schema_version"; without "type" the kind is
// inferred from the keys.  Unknown keys are rejected with the JSON pointer of the
// offending member.

#include "ccc/certify.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ccc::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// A document that does not match its schema.  `pointer` locates the offending value.
struct SchemaError : InputError {
    SchemaError(std::string pointer, const std::string& message);
    std::string pointer;
};

using Document = std::variant<Fan, CartierData, KlyachkoBundle, ConstructibleFunction, ThetaComplex>;

std::string document_kind(const Document& d);

Document parse_document(const json& j);
/// Reads and parses a UTF-8 JSON file.
Document parse_input(const std::string& path);
json read_json(const std::string& path);

Fan parse_fan(const json& j, const std::string& ptr = "");
CartierData parse_cartier(const json& j, const std::string& ptr = "");
KlyachkoBundle parse_klyachko(const json& j, const std::string& ptr = "");
ConstructibleFunction parse_function(const json& j, const std::string& ptr = "");
ThetaComplex parse_theta(const json& j, const std::string& ptr = "");
Witness parse_witness(const json& j, const std::string& ptr = "");

json rational_json(const Q& q);
json vector_json(const QVector& v);
json to_json(const Fan& fan);
json to_json(const CartierData& L);
json to_json(const KlyachkoBundle& b);
json to_json(const ConstructibleFunction& f);
json to_json(const ThetaComplex& F);
json to_json(const Document& d);
json to_json(const Witness& w);
json betti_json(const std::map<int, std::size_t>& betti);

/// Cells of f with values and shading labels.  Cells are the nonzero cells of
/// the simplified function together with their faces, so boundaries appear
/// with their own values.  Parses back as a function document.
json dump_cells(const ConstructibleFunction& f);
/// One entry per cone: the covector cell -relint(tau), the stalk's Betti numbers, a label.
json dump_mu(const MuSheaf& mu, const Fan& fan);

struct JobConfig {
    std::vector<std::string> command;  // e.g. {"certify", "nef"}
    std::vector<std::string> inputs;
    std::string convention = "eq1";    // eq1 | costalk, for `mo`
    std::vector<QVector> directions;   // theta morse / certify convex overrides
    std::optional<QVector> point;      // x for microlocal commands
    std::optional<std::size_t> cone;   // cone index for theta table / microlocal
    std::optional<std::string> output;  // report path (stdout when absent)
    std::optional<std::string> dump;    // cell dump path
    std::optional<std::string> replay;  // witness or report to re-run
    std::uint64_t seed = 0;
    bool timing = false;
};

/// Unknown fields are rejected.
JobConfig parse_config(const json& j);
json to_json(const JobConfig& cfg);

struct Report {
    json doc;
    int exit_code = 0;  // 0 pass/true, 1 certified false, 2 input error, 3 internal error
};

/// Runs one job.  Library errors become an error report; nothing is thrown.
Report run_command(const JobConfig& cfg);

/// Names accepted by fixture_document ("fan/P2", "line/O(1)/P1", "bundle/T_P2",
/// "complex/koszul/P1", "random/P2/2", ...).
std::vector<std::string> fixture_names();
/// A built-in fixture as a document; random bundles are drawn from the seed.
Document fixture_document(const std::string& name, std::uint64_t seed);

/// Serialisation used for reports and dumps: two-space indent, trailing newline.
std::string serialize(const json& j);

}  // namespace ccc::io
