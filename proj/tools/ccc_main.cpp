// Command-line front end: parses flags into a JobConfig, runs it, writes the report.
//
//   ccc certify nef bundle.json
//   ccc theta table --cone 0 line.json
//   ccc euler mu --point=1/2,0 f.json
//   ccc fixture bundle/T_P2 > tp2.json
//
// Exit codes: 0 pass/true, 1 certified false, 2 input error, 3 internal error.

#include "ccc/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace ccc;
using ccc::io::json;

namespace {

QVector parse_vector_flag(const std::string& text)
{
    QVector v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        v.push_back(parse_rational(item));
    if (v.empty())
        throw InputError("empty vector \"" + text + "\"");
    return v;
}

std::size_t command_words(const std::string& head) { return head == "mo" ? 1 : 2; }

int emit(const json& doc, const std::optional<std::string>& path)
{
    auto text = io::serialize(doc);
    if (!path) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) {
        std::cerr << "ccc: cannot write " << *path << "\n";
        return 2;
    }
    out << text;
    return 0;
}

int usage_error(const std::string& message)
{
    std::cerr << "ccc: " << message << "\n";
    json doc{{"schema_version", io::kSchemaVersion}, {"error", {{"class", "usage"}, {"message", message}}}};
    std::cout << io::serialize(doc);
    return 2;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coherent-constructible correspondence toolkit for toric varieties"};
    app.allow_extras(false);
    std::vector<std::string> words;
    std::string config_path, convention, point, output, dump, replay;
    std::vector<std::string> directions;
    std::optional<std::size_t> cone;
    std::optional<std::uint64_t> seed;
    bool timing = false;
    app.add_option("words", words, "command words followed by input documents");
    app.add_option("--config", config_path, "job configuration file");
    app.add_option("--convention", convention, "eq1 or costalk (mo)");
    app.add_option("--point", point, "point x as comma-separated rationals");
    app.add_option("--direction", directions, "direction xi (repeatable)");
    app.add_option("--cone", cone, "cone index into the fan's cone list");
    app.add_option("-o,--output", output, "report path");
    app.add_option("--dump", dump, "cell dump path");
    app.add_option("--replay", replay, "witness, witness list or report to re-run");
    app.add_option("--seed", seed, "seed for random fixtures");
    app.add_flag("--timing", timing, "add timing to the report");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return usage_error(e.what());
    }

    io::JobConfig cfg;
    try {
        if (!config_path.empty())
            cfg = io::parse_config(io::read_json(config_path));
        if (!words.empty()) {
            std::size_t k = std::min(words.size(), command_words(words[0]));
            cfg.command.assign(words.begin(), words.begin() + static_cast<long>(k));
            cfg.inputs.assign(words.begin() + static_cast<long>(k), words.end());
        }
        if (!convention.empty())
            cfg.convention = convention;
        if (!point.empty())
            cfg.point = parse_vector_flag(point);
        if (!directions.empty()) {
            cfg.directions.clear();
            for (const auto& d : directions)
                cfg.directions.push_back(parse_vector_flag(d));
        }
        if (cone)
            cfg.cone = cone;
        if (!output.empty())
            cfg.output = output;
        if (!dump.empty())
            cfg.dump = dump;
        if (!replay.empty())
            cfg.replay = replay;
        if (seed)
            cfg.seed = *seed;
        cfg.timing = cfg.timing || timing;
    } catch (const Error& e) {
        return usage_error(e.what());
    }
    if (cfg.command.empty())
        return usage_error("no command given; try --help");

    if (cfg.command[0] == "fixture") {
        if (cfg.command.size() != 2)
            return usage_error("fixture needs a name or \"list\"");
        if (cfg.command[1] == "list") {
            for (const auto& n : io::fixture_names())
                std::cout << n << "\n";
            return 0;
        }
        try {
            return emit(io::to_json(io::fixture_document(cfg.command[1], cfg.seed)), cfg.output);
        } catch (const Error& e) {
            return usage_error(e.what());
        }
    }

    auto report = io::run_command(cfg);
    if (report.doc.contains("error"))
        std::cerr << "ccc: " << report.doc["error"]["message"].get<std::string>() << "\n";
    if (int rc = emit(report.doc, cfg.output))
        return rc;
    return report.exit_code;
}
