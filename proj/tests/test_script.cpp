#include "doctest.h"

#include <fstream>
#include <sstream>

#include "iasdo/dsl.hpp"
#include "iasdo/script.hpp"

using namespace iasdo;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Engine library_engine() {
    ParseResult r = parse_model(slurp(IASDO_CORPUS_DIR "/library.iasdo"));
    REQUIRE(r.ok());
    return Engine(*r.model);
}

}  // namespace

TEST_CASE("corpus scripts pass") {
    Engine engine = library_engine();
    for (const char* name : {"/loan-cycle.script", "/reservation-cycle.script"}) {
        WorldState world;
        ScriptReport report = run_script(engine, world, slurp(std::string(IASDO_CORPUS_DIR) + name));
        for (const ScriptLine& l : report.lines) CHECK_MESSAGE(l.ok, l.line << ": " << l.detail);
        CHECK(report.passed());
        CHECK(report.assertions > 5);
    }
}

TEST_CASE("unexpected outcomes are failures") {
    Engine engine = library_engine();
    WorldState world;
    ScriptReport report = run_script(engine, world,
                                     "create Document as Librarian\n"
                                     "expect ok create Document as LogisticService\n"
                                     "assert 1.Document inactive\n"
                                     "expect privilege_denied create Document as LogisticService\n"
                                     "assert 1.Document active\n");
    REQUIRE(report.lines.size() == 5);
    CHECK_FALSE(report.lines[0].ok);
    CHECK(report.lines[0].detail.find("privilege_denied") == 0);
    CHECK(report.lines[1].ok);
    CHECK_FALSE(report.lines[2].ok);
    CHECK_FALSE(report.lines[3].ok);
    CHECK(report.lines[4].ok);
    CHECK(report.failures == 3);
    CHECK(report.assertions == 4);
}

TEST_CASE("process statuses can be expected") {
    Engine engine = library_engine();
    WorldState world;
    ScriptReport report = run_script(engine, world,
                                     "create Document as LogisticService\n"
                                     "create Copy as LogisticService ed Document=#1   # ids may carry a hash\n"
                                     "expect not_responsible exec ShelveCopy as Librarian Copy=2\n"
                                     "expect precondition_failed exec ShelveCopy as LogisticService Copy=1\n"
                                     "exec ShelveCopy as LogisticService Copy=2\n"
                                     "assert 2.AvailableCopy generation=1\n"
                                     "modify 2.AvailableCopy.available_date = \"1 March\" as Librarian\n"
                                     "query 2.AvailableCopy as Librarian\n");
    for (const ScriptLine& l : report.lines) CHECK_MESSAGE(l.ok, l.line << ": " << l.detail);
    CHECK(world.attributes.at(AttributeKey{ObjectId{2}, "AvailableCopy", "available_date"}) == "1 March");
}

TEST_CASE("malformed scripts are rejected before anything runs") {
    Engine engine = library_engine();
    WorldState world;
    for (const char* bad : {"create Document\n", "frobnicate 1\n", "assert 1.Document alive\n",
                            "modify 1.Document = x as R\n", "exec P as R Copy\n", "migrate 1 BlockedCopy as R\n",
                            "assert x.Document active\n", "expect ok\n"}) {
        std::string text = std::string("create Document as LogisticService\n") + bad;
        CHECK_THROWS_AS(run_script(engine, world, text), ScriptSyntaxError);
        CHECK(world.events.empty());
    }
    try {
        run_script(engine, world, "\n\nquery 1.Document Librarian\n");
    } catch (const ScriptSyntaxError& e) {
        CHECK(e.line() == 3);
    }
}
