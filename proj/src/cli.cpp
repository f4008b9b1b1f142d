#include "iasdo/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "iasdo/dsl.hpp"
#include "iasdo/runtime.hpp"
#include "iasdo/script.hpp"
#include "iasdo/validator.hpp"

namespace iasdo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return text.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + path);
}

bool color_enabled() {
    const char* value = std::getenv("IASDO_COLOR");
    return value && std::string_view(value) == "1";
}

std::string paint(std::string_view text, std::string_view code, bool color) {
    if (!color) return std::string(text);
    return "\x1b[" + std::string(code) + "m" + std::string(text) + "\x1b[0m";
}

int code(ExitCode c) { return static_cast<int>(c); }

int report_exit(const ValidationReport& report, bool fail_on_warning) {
    if (report.errors > 0) return code(ExitCode::Errors);
    if (report.warnings > 0) return code(fail_on_warning ? ExitCode::Errors : ExitCode::Warnings);
    return code(ExitCode::Clean);
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const std::string& item : items) out += (out.empty() ? "" : ", ") + item;
    return out;
}

std::string report_text(const std::string& file, const ValidationReport& report, bool color) {
    std::string out;
    for (const Diagnostic& d : report.diagnostics) {
        bool error = d.severity == Severity::Error;
        out += file + ": " + paint(to_string(d.severity), error ? "31" : "33", color) + " " +
               std::string(to_string(d.rule)) + " [" + join(d.elements) + "] " + d.message + "\n";
    }
    out += file + ": " + std::to_string(report.errors) + " error(s), " + std::to_string(report.warnings) +
           " warning(s)\n";
    return out;
}

std::string grant_line(const PrivilegeGrant& g) {
    return "grant " + g.role + " " + std::string(to_string(g.privilege)) + " on " + g.class_name + ";";
}

void print_parse_errors(const std::vector<ParseError>& errors, std::ostream& err) {
    for (const ParseError& e : errors) err << e.message() << "\n";
}

struct ValidateConfig {
    std::string path;
    std::string format = "text";
    bool strict_r1_direct = false;
    bool fail_on_warning = false;
    bool fix = false;
};

// Result of validating one file, rendered into strings so files can be checked in parallel.
struct FileResult {
    int exit = 0;
    std::string out;
    std::string err;
    json doc;
};

FileResult validate_file(const std::string& path, const ValidateConfig& cfg, bool color) {
    FileResult result;
    std::string text;
    try {
        text = read_file(path);
    } catch (const IoError& e) {
        result.exit = code(ExitCode::IoFailure);
        result.err = std::string(e.what()) + "\n";
        return result;
    }
    ParseResult parsed = parse_model(text, ParseOptions{path, false});
    if (!parsed.ok()) {
        std::ostringstream err;
        print_parse_errors(parsed.errors, err);
        result.exit = code(ExitCode::ParseFailure);
        result.err = err.str();
        return result;
    }
    ValidationReport report = validate(*parsed.model, ValidationOptions{cfg.strict_r1_direct});
    result.exit = report_exit(report, cfg.fail_on_warning);
    std::vector<std::string> fixes;
    if (cfg.fix) {
        for (const PrivilegeGrant& g : missing_r2_grants(*parsed.model)) fixes.push_back(grant_line(g));
    }
    if (cfg.format == "json") {
        result.doc = json::parse(report_to_json(report));
        if (cfg.fix) result.doc["fixes"] = fixes;
    } else {
        result.out = report_text(path, report, color);
        for (const std::string& f : fixes) result.out += f + "\n";
    }
    return result;
}

std::vector<std::string> model_files(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".iasdo") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

int run_validate(const ValidateConfig& cfg, std::ostream& out, std::ostream& err) {
    bool color = color_enabled() && cfg.format == "text";
    std::error_code ec;
    if (!fs::is_directory(cfg.path, ec)) {
        FileResult r = validate_file(cfg.path, cfg, color);
        err << r.err;
        if (cfg.format == "json" && r.err.empty()) {
            out << r.doc.dump() << "\n";
        } else {
            out << r.out;
        }
        return r.exit;
    }

    std::vector<std::string> files;
    try {
        files = model_files(cfg.path);
    } catch (const fs::filesystem_error& e) {
        err << e.what() << "\n";
        return code(ExitCode::IoFailure);
    }
    std::vector<std::future<FileResult>> pending;
    for (const std::string& f : files) {
        pending.push_back(std::async(std::launch::async, validate_file, f, std::cref(cfg), color));
    }
    int exit = code(ExitCode::Clean);
    json docs = json::object();
    for (std::size_t i = 0; i < files.size(); ++i) {
        FileResult r = pending[i].get();
        err << r.err;
        if (cfg.format == "json") {
            if (r.err.empty()) docs[files[i]] = std::move(r.doc);
        } else {
            out << r.out;
        }
        exit = std::max(exit, r.exit);
    }
    if (cfg.format == "json") out << json{{"files", docs}}.dump() << "\n";
    return exit;
}

std::optional<ModelSpec> load_model(const std::string& path, std::ostream& err, int& exit) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const IoError& e) {
        err << e.what() << "\n";
        exit = code(ExitCode::IoFailure);
        return std::nullopt;
    }
    ParseResult parsed = parse_model(text, ParseOptions{path, false});
    if (!parsed.ok()) {
        print_parse_errors(parsed.errors, err);
        exit = code(ExitCode::ParseFailure);
        return std::nullopt;
    }
    return std::move(parsed.model);
}

int run_simulate(const std::string& model_path, const std::string& script_path, const std::string& format,
                 std::ostream& out, std::ostream& err) {
    int exit = 0;
    std::optional<ModelSpec> model = load_model(model_path, err, exit);
    if (!model) return exit;
    ValidationReport report = validate(*model);
    if (report.has_errors()) {
        err << report_text(model_path, report, false);
        return code(ExitCode::Errors);
    }
    std::string script;
    try {
        script = read_file(script_path);
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return code(ExitCode::IoFailure);
    }
    Engine engine(std::move(*model));
    WorldState world;
    ScriptReport result;
    try {
        result = run_script(engine, world, script);
    } catch (const ScriptSyntaxError& e) {
        err << script_path << ": " << e.what() << "\n";
        return code(ExitCode::ParseFailure);
    }
    if (format == "json") {
        json lines = json::array();
        for (const ScriptLine& l : result.lines) {
            lines.push_back({{"line", l.line}, {"command", l.command}, {"ok", l.ok}, {"detail", l.detail}});
        }
        json doc = {{"lines", lines},
                    {"summary", {{"assertions", result.assertions}, {"failures", result.failures}}},
                    {"hash", state_hash(world)},
                    {"world", json::parse(world_to_json(world))}};
        out << doc.dump() << "\n";
    } else {
        bool color = color_enabled();
        for (const ScriptLine& l : result.lines) {
            out << (l.ok ? paint("ok  ", "32", color) : paint("FAIL", "31", color)) << " " << script_path << ":"
                << l.line << ": " << l.command;
            if (!l.detail.empty()) out << "  -> " << l.detail;
            out << "\n";
        }
        out << result.assertions << " assertion(s), " << result.failures << " failure(s)\n";
    }
    return result.passed() ? code(ExitCode::Clean) : code(ExitCode::AssertionFailure);
}

int run_export(const std::string& model_path, std::ostream& out, std::ostream& err) {
    int exit = 0;
    std::optional<ModelSpec> model = load_model(model_path, err, exit);
    if (!model) return exit;
    out << model_to_dot(*model);
    return code(ExitCode::Clean);
}

int run_fmt(const std::string& model_path, bool in_place, std::ostream& out, std::ostream& err) {
    int exit = 0;
    std::optional<ModelSpec> model = load_model(model_path, err, exit);
    if (!model) return exit;
    std::string text = render_model(*model);
    if (!in_place) {
        out << text;
        return code(ExitCode::Clean);
    }
    try {
        write_file(model_path, text);
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return code(ExitCode::IoFailure);
    }
    return code(ExitCode::Clean);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Validate, simulate and format IASDO models", "iasdo"};
    app.require_subcommand(1);

    ValidateConfig vcfg;
    auto* validate_cmd = app.add_subcommand("validate", "Check a model file or every *.iasdo file in a directory");
    validate_cmd->add_option("path", vcfg.path, "Model file or directory")->required();
    validate_cmd->add_option("--format", vcfg.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    validate_cmd->add_flag("--strict-r1-direct", vcfg.strict_r1_direct, "R1 accepts direct links only");
    validate_cmd->add_flag("--fail-on-warning", vcfg.fail_on_warning, "Treat warnings as errors");
    validate_cmd->add_flag("--fix", vcfg.fix, "Print the grants missing for R2");

    std::string model_path;
    std::string script_path;
    std::string sim_format = "text";
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a trace script against a model");
    simulate_cmd->add_option("model", model_path, "Model file")->required();
    simulate_cmd->add_option("script", script_path, "Trace script")->required();
    simulate_cmd->add_option("--format", sim_format, "Output format")->check(CLI::IsMember({"text", "json"}));

    std::string export_format = "dot";
    auto* export_cmd = app.add_subcommand("export", "Print the class graph");
    export_cmd->add_option("model", model_path, "Model file")->required();
    export_cmd->add_option("--format", export_format, "Output format")->check(CLI::IsMember({"dot"}));

    bool in_place = false;
    auto* fmt_cmd = app.add_subcommand("fmt", "Print the canonical rendering of a model");
    fmt_cmd->add_option("model", model_path, "Model file")->required();
    fmt_cmd->add_flag("-i,--in-place", in_place, "Rewrite the file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return code(ExitCode::Clean);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return code(ExitCode::Usage);
    }

    if (validate_cmd->parsed()) return run_validate(vcfg, out, err);
    if (simulate_cmd->parsed()) return run_simulate(model_path, script_path, sim_format, out, err);
    if (export_cmd->parsed()) return run_export(model_path, out, err);
    if (fmt_cmd->parsed()) return run_fmt(model_path, in_place, out, err);
    return code(ExitCode::Usage);
}

}  // namespace iasdo::cli
