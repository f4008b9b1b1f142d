#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "iasdo/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int exit;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int exit = iasdo::cli::run(args, out, err);
    return {exit, out.str(), err.str()};
}

const std::string corpus = IASDO_CORPUS_DIR;

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "iasdo-cli-test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("validate exit codes") {
    CHECK(cli({"validate", corpus + "/library.iasdo"}).exit == 0);
    Run broken = cli({"validate", corpus + "/broken-r1.iasdo", "--format", "json"});
    CHECK(broken.exit == 2);
    auto doc = nlohmann::json::parse(broken.out);
    CHECK(doc["diagnostics"][0]["rule"] == "R1");
    CHECK(doc["summary"]["errors"] == 1);

    fs::path dir = scratch_dir();
    write(dir / "warn.iasdo", "class A {}\nclass B {}\nds B -> A;\nprocess P { inputs: A; outputs: B; pre: not A; }\n");
    write(dir / "syntax.iasdo", "class {\n");
    CHECK(cli({"validate", (dir / "warn.iasdo").string()}).exit == 1);
    CHECK(cli({"validate", (dir / "warn.iasdo").string(), "--fail-on-warning"}).exit == 2);
    Run syntax = cli({"validate", (dir / "syntax.iasdo").string()});
    CHECK(syntax.exit == 3);
    CHECK(syntax.err.find("syntax.iasdo:1:7:") != std::string::npos);
    CHECK(cli({"validate", (dir / "missing.iasdo").string()}).exit == 4);
    CHECK(cli({"validate", "--format", "yaml", corpus + "/library.iasdo"}).exit == 64);
    CHECK(cli({}).exit == 64);
}

TEST_CASE("validate a directory reports every file") {
    Run run = cli({"validate", corpus});
    CHECK(run.exit == 2);
    CHECK(run.out.find("broken-r1.iasdo") < run.out.find("library.iasdo: 0 error(s)"));
    Run json = cli({"validate", corpus, "--format", "json"});
    auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["files"].size() == 2);
    CHECK(cli({"validate", corpus, "--format", "json"}).out == json.out);
}

TEST_CASE("strict R1 and fix mode") {
    fs::path dir = scratch_dir();
    write(dir / "m.iasdo", "class A {}\nclass B {}\nclass C {}\nds B -> A;\ned C -> B;\nrole R;\n"
                           "process P { inputs: A; outputs: C; }\nresponsible R for P;\n");
    std::string path = (dir / "m.iasdo").string();
    Run plain = cli({"validate", path});
    CHECK(plain.out.find("R1") == std::string::npos);
    Run strict = cli({"validate", path, "--strict-r1-direct"});
    CHECK(strict.out.find("R1") != std::string::npos);
    Run fix = cli({"validate", path, "--fix"});
    CHECK(fix.exit == 2);
    CHECK(fix.out.find("grant R query on A;\ngrant R create on C;\n") != std::string::npos);
    Run fix_json = cli({"validate", path, "--fix", "--format", "json"});
    auto doc = nlohmann::json::parse(fix_json.out);
    CHECK(doc["fixes"] == nlohmann::json{"grant R query on A;", "grant R create on C;"});
}

TEST_CASE("simulate runs the loan cycle") {
    Run run = cli({"simulate", corpus + "/library.iasdo", corpus + "/loan-cycle.script"});
    CHECK(run.exit == 0);
    CHECK(run.out.find("FAIL") == std::string::npos);
    Run json = cli({"simulate", corpus + "/library.iasdo", corpus + "/loan-cycle.script", "--format", "json"});
    CHECK(json.exit == 0);
    CHECK(nlohmann::json::parse(json.out)["summary"]["failures"] == 0);
    CHECK(cli({"simulate", corpus + "/library.iasdo", corpus + "/loan-cycle.script", "--format", "json"}).out ==
          json.out);

    fs::path dir = scratch_dir();
    write(dir / "fail.script", "create Document as LogisticService\nassert 1.Document inactive\n");
    write(dir / "bad.script", "create Document\n");
    CHECK(cli({"simulate", corpus + "/library.iasdo", (dir / "fail.script").string()}).exit == 5);
    CHECK(cli({"simulate", corpus + "/library.iasdo", (dir / "bad.script").string()}).exit == 3);
    CHECK(cli({"simulate", corpus + "/broken-r1.iasdo", (dir / "fail.script").string()}).exit == 2);
    CHECK(cli({"simulate", corpus + "/library.iasdo", (dir / "none.script").string()}).exit == 4);
    CHECK(cli({"simulate", corpus + "/library.iasdo"}).exit == 64);
}

TEST_CASE("export and fmt") {
    Run dot = cli({"export", corpus + "/library.iasdo", "--format", "dot"});
    CHECK(dot.exit == 0);
    CHECK(dot.out.find("digraph iasdo") == 0);
    CHECK(cli({"export", corpus + "/library.iasdo", "--format", "json"}).exit == 64);

    fs::path dir = scratch_dir();
    fs::path file = dir / "m.iasdo";
    write(file, "class B {}   class A {}\nds B->A;\n");
    Run shown = cli({"fmt", file.string()});
    CHECK(shown.out == "class A {}\n\nclass B {}\n\nds B -> A imperative;\n");
    CHECK(cli({"fmt", file.string(), "--in-place"}).exit == 0);
    std::ifstream in(file);
    std::ostringstream s;
    s << in.rdbuf();
    CHECK(s.str() == shown.out);
}
