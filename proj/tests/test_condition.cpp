#include "doctest.h"

#include "iasdo/condition.hpp"
#include "iasdo/dsl.hpp"
#include "support/oracles.hpp"

using namespace iasdo;
using namespace iasdo::testing;

namespace {

BindingSet bind(std::initializer_list<std::pair<const char*, int>> items) {
    // 1 = bound and active, 0 = bound and inactive, -1 = unbound
    BindingSet b;
    std::uint64_t id = 1;
    for (auto [name, state] : items) {
        b[name] = state < 0 ? Binding{std::nullopt, false} : Binding{ObjectId{id++}, state == 1};
    }
    return b;
}

Condition parse(std::string_view text, bool guards = false) {
    std::vector<ParseError> errors;
    auto c = parse_condition(text, &errors, guards);
    REQUIRE_MESSAGE(c.has_value(), (errors.empty() ? std::string("?") : errors.front().message()));
    return *c;
}

}  // namespace

TEST_CASE("factories check arity") {
    CHECK_THROWS_AS(Condition::all_of({Condition::atom("A")}), std::invalid_argument);
    CHECK_THROWS_AS(Condition::one_of({}), std::invalid_argument);
    CHECK_THROWS_AS(Condition::make(Condition::Kind::Not, {}), std::invalid_argument);
    CHECK_NOTHROW(Condition::make(Condition::Kind::Not, {Condition::atom("A")}));
    CHECK(Condition::atom("A").class_name() == "A");
    CHECK(Condition::negate(Condition::atom("A")).class_name().empty());
}

TEST_CASE("atom is true only when bound and active") {
    Condition a = Condition::atom("A");
    CHECK(eval_condition(a, bind({{"A", 1}})));
    CHECK_FALSE(eval_condition(a, bind({{"A", 0}})));
    CHECK_FALSE(eval_condition(a, bind({{"A", -1}})));
    CHECK_THROWS_AS(eval_condition(a, bind({{"B", 1}})), ConditionError);
}

TEST_CASE("n-ary xor means exactly one") {
    Condition x = parse("A xor B xor C");
    CHECK(x.kind() == Condition::Kind::Xor);
    CHECK(x.children().size() == 3);
    CHECK_FALSE(eval_condition(x, bind({{"A", 1}, {"B", 1}, {"C", 1}})));
    CHECK(eval_condition(x, bind({{"A", 0}, {"B", 1}, {"C", 0}})));
    CHECK_FALSE(eval_condition(x, bind({{"A", 0}, {"B", 0}, {"C", 0}})));
}

TEST_CASE("unknown bindings surface even when the result is already decided") {
    Condition c = parse("A or B");
    CHECK_THROWS_AS(eval_condition(c, bind({{"A", 1}})), ConditionError);
}

TEST_CASE("precedence: not binds tightest, and before or/xor") {
    Condition c = parse("not A and B or C");
    REQUIRE(c.kind() == Condition::Kind::Or);
    CHECK(c.children()[0].kind() == Condition::Kind::And);
    CHECK(c.children()[0].children()[0].kind() == Condition::Kind::Not);
    Condition mixed = parse("A or B xor C");
    REQUIRE(mixed.kind() == Condition::Kind::Xor);
    CHECK(mixed.children()[0].kind() == Condition::Kind::Or);
    CHECK(parse("A AND b Or C") == parse("A and b or C"));
}

TEST_CASE("condition syntax errors carry positions") {
    std::vector<ParseError> errors;
    CHECK_FALSE(parse_condition("A and", &errors).has_value());
    REQUIRE_FALSE(errors.empty());
    CHECK(errors.front().span.column == 6);
    errors.clear();
    CHECK_FALSE(parse_condition("(A or B", &errors).has_value());
    CHECK_FALSE(errors.empty());
    errors.clear();
    CHECK_FALSE(parse_condition("same_ancestor(A, B, C)", &errors, false).has_value());
    CHECK(parse_condition("same_ancestor(A, B, C)", nullptr, true).has_value());
}

TEST_CASE("same_ancestor goes through the resolver") {
    Condition g = parse("A and same_ancestor(A, B, Doc)", true);
    std::vector<std::tuple<ObjectId, ObjectId, std::string>> calls;
    AncestorResolver resolver = [&](ObjectId a, ObjectId b, const std::string& cls) {
        calls.emplace_back(a, b, cls);
        return a.value + b.value == 3;
    };
    CHECK(eval_condition(g, bind({{"A", 1}, {"B", 1}}), resolver));
    REQUIRE(calls.size() == 1);
    CHECK(std::get<2>(calls[0]) == "Doc");
    CHECK_FALSE(eval_condition(g, bind({{"A", 1}, {"B", -1}}), resolver));
    CHECK_THROWS_AS(eval_condition(g, bind({{"A", 1}, {"B", 1}})), ConditionError);
    CHECK(atoms_of(g) == std::set<std::string>{"A", "B"});
    CHECK(uses_same_ancestor(g));
    CHECK_FALSE(uses_negation(g));
}

TEST_CASE("truth tables agree with the oracle on random conditions") {
    Rng rng(7);
    std::vector<std::string> atoms{"A", "B", "C"};
    for (int i = 0; i < 300; ++i) {
        Condition c = random_condition(rng, atoms, 3);
        std::vector<bool> expected = truth_table(c, atoms);
        for (std::size_t row = 0; row < expected.size(); ++row) {
            REQUIRE(eval_condition(c, bindings_for_row(atoms, row)) == expected[row]);
        }
    }
}

TEST_CASE("render then parse gives the same tree") {
    Rng rng(11);
    std::vector<std::string> atoms{"A", "B", "C", "D"};
    for (int i = 0; i < 500; ++i) {
        Condition c = random_condition(rng, atoms, 4);
        std::string text = render_condition(c);
        INFO(text);
        REQUIRE(parse(text) == c);
    }
    CHECK(render_condition(parse("(A and B) or C")) == "A and B or C");
    CHECK(render_condition(parse("A and (B or C)")) == "A and (B or C)");
    CHECK(render_condition(parse("(A or B) or C")) == "(A or B) or C");
    CHECK(render_condition(parse("not (A xor B)")) == "not (A xor B)");
}
