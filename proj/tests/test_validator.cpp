#include "doctest.h"

#include "iasdo/dsl.hpp"
#include "iasdo/validator.hpp"
#include "support/oracles.hpp"

using namespace iasdo;
using namespace iasdo::testing;

namespace {

ModelSpec model(std::string_view text) {
    ParseResult r = parse_model(text);
    REQUIRE_MESSAGE(r.ok(), (r.errors.empty() ? "" : r.errors.front().message()));
    return *r.model;
}

std::vector<std::string> rules(const ValidationReport& report) {
    std::vector<std::string> out;
    for (const Diagnostic& d : report.diagnostics) out.emplace_back(to_string(d.rule));
    return out;
}

using Names = std::vector<std::string>;

}  // namespace

TEST_CASE("V1 reports each cycle once with its classes") {
    auto report = validate(model("class A {}\nclass B {}\nclass C {}\ned A -> B;\nds B -> A;\ned C -> C optional;\n"));
    REQUIRE(rules(report) == Names{"V1", "V1"});
    CHECK(report.diagnostics[0].elements == Names{"A", "B"});
    CHECK(report.diagnostics[1].elements == Names{"C"});
}

TEST_CASE("V2 counts roots per DS component") {
    auto report = validate(model("class A {}\nclass B {}\nclass C {}\nds C -> A;\nds C -> B optional;\n"));
    REQUIRE(rules(report) == Names{"V2"});
    CHECK(report.diagnostics[0].elements == Names{"A", "B"});
    CHECK(validate(model("class A {}\nclass B {}\nds B -> A;\n")).clean());
}

TEST_CASE("V3 mono-specialisation must be imperative") {
    auto report = validate(model("class A {}\nclass B {}\nds B -> A optional;\n"));
    REQUIRE(rules(report) == Names{"V3"});
    CHECK(report.diagnostics[0].elements == Names{"B", "A"});
}

TEST_CASE("V4 selections must come from the owner or an ancestor") {
    const char* base = "class A { attrs: a; }\nclass B { attrs: b; }\nclass C {}\nclass D { attrs: d; }\n"
                       "ds B -> A;\nds C -> B optional;\nds C -> D optional;\nds D -> A;\n";
    CHECK(rules(validate(model(std::string(base) + "access_view B { attrs: A.a; }\n"))).empty());
    auto bad = validate(model(std::string(base) + "access_view A { attrs: B.b; }\n"));
    REQUIRE(rules(bad) == Names{"V4"});
    CHECK(bad.diagnostics[0].severity == Severity::Error);
    auto optional = validate(model(std::string(base) + "access_view C { attrs: A.a; }\n"));
    REQUIRE(rules(optional) == Names{"V4"});
    CHECK(optional.diagnostics[0].severity == Severity::Warning);
    CHECK(optional.warnings == 1);
}

TEST_CASE("V5 and V6 need ancestors") {
    const char* base = "class A {}\nclass B {}\nclass C {}\nds B -> A;\n";
    CHECK(validate(model(std::string(base) + "back_inactive B -> A;\nloop B -> A;\n")).clean());
    CHECK(rules(validate(model(std::string(base) + "back_inactive B -> C;\n"))) == Names{"V5"});
    CHECK(rules(validate(model(std::string(base) + "loop A -> B;\n"))) == Names{"V6"});
}

TEST_CASE("V7 keeps pre atoms in inputs and post atoms in outputs") {
    const char* base = "class A {}\nclass B {}\nds B -> A;\n";
    CHECK(validate(model(std::string(base) + "process P { inputs: A; outputs: B; pre: A; post: B; }\n")).clean());
    auto report = validate(model(std::string(base) + "process P { inputs: A; outputs: B; pre: B; post: A or B; }\n"));
    CHECK(rules(report) == Names{"V7", "V7"});
}

TEST_CASE("V8 checks effect scope and migration steps") {
    const char* base = "class A {}\nclass B {}\nclass C {}\nds B -> A;\nds C -> B;\n";
    CHECK(validate(model(std::string(base) +
                         "process P { inputs: A; outputs: B; effects: migrate A -> B when A; }\n")).clean());
    CHECK(rules(validate(model(std::string(base) +
                               "process P { inputs: A; outputs: C; effects: migrate A -> C; }\n"))) == Names{"V8"});
    CHECK(rules(validate(model(std::string(base) +
                               "process P { inputs: B; outputs: C; effects: create C from A; }\n"))) == Names{"V8"});
    CHECK(rules(validate(model(std::string(base) + "loop C -> A;\n"
                               "process P { inputs: A, C; outputs: A; effects: migrate C -> A; }\n"))).empty());
}

TEST_CASE("V9 warns about NOT in pre and post only") {
    const char* base = "class A {}\nclass B {}\nds B -> A;\n";
    auto report = validate(model(std::string(base) + "process P { inputs: A; outputs: B; pre: not A; }\n"));
    REQUIRE(rules(report) == Names{"V9"});
    CHECK(report.warnings == 1);
    CHECK(report.errors == 0);
    CHECK(validate(model(std::string(base) +
                         "process P { inputs: A; outputs: B; effects: migrate A -> B when not B; }\n")).clean());
}

TEST_CASE("R1 follows ED and DS links, strict mode only direct ones") {
    const char* text = "class A {}\nclass B {}\nclass C {}\nclass D {}\nds B -> A;\ned C -> B;\n"
                       "process P { inputs: A; outputs: C, D; }\n";
    ModelSpec m = model(text);
    auto report = validate(m);
    REQUIRE(rules(report) == Names{"R1"});
    CHECK(report.diagnostics[0].elements == Names{"P", "D"});
    CHECK(reaches_input(m, "P", "C"));
    CHECK_FALSE(reaches_input(m, "P", "C", ValidationOptions{true}));
    CHECK(rules(validate(m, ValidationOptions{true})) == Names{"R1", "R1"});
    CHECK_THROWS_AS(reaches_input(m, "Q", "C"), ModelError);
}

TEST_CASE("R2 lists each missing grant once") {
    const char* text = "class A {}\nclass B {}\nds B -> A;\nrole R;\n"
                       "process P { inputs: A; outputs: B; }\nprocess Q { inputs: A; outputs: B; }\n"
                       "responsible R for P;\nresponsible R for Q;\ngrant R query on A;\n";
    ModelSpec m = model(text);
    auto report = validate(m);
    REQUIRE(rules(report) == Names{"R2"});
    CHECK(report.diagnostics[0].elements == Names{"R", "B"});
    CHECK(missing_r2_grants(m) == std::vector<PrivilegeGrant>{{"R", "B", Privilege::Create}});
}

TEST_CASE("diagnostics come out in catalog order") {
    auto report = validate(model("class A {}\nclass B {}\nclass C {}\ned A -> B;\ned B -> A;\n"
                                 "ds C -> A optional;\nprocess P { inputs: A; outputs: C; pre: C; }\n"));
    CHECK(rules(report) == Names{"V1", "V3", "V7"});
}

TEST_CASE("V1 and R1 agree with path enumeration") {
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        ModelSpec m = random_graph_model(rng);
        Adjacency g = dependency_edges(m);
        ValidationReport report = validate(m);
        std::set<std::string> on_cycles;
        std::set<std::pair<std::string, std::string>> r1;
        for (const Diagnostic& d : report.diagnostics) {
            if (d.rule == Rule::V1) on_cycles.insert(d.elements.begin(), d.elements.end());
            if (d.rule == Rule::R1) r1.insert({d.elements[0], d.elements[1]});
        }
        REQUIRE(on_cycles == classes_on_cycles(g));
        std::set<std::pair<std::string, std::string>> expected;
        for (const ProcessDef& p : m.processes) {
            for (const auto& out : p.outputs) {
                if (!oracle_reaches_input(m, p, out, false)) expected.insert({p.name, out});
            }
        }
        REQUIRE(r1 == expected);
    }
}
