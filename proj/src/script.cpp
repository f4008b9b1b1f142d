#include "iasdo/script.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>

namespace iasdo {

namespace {

enum class Verb { Create, Exec, Modify, Query, Assert, Migrate, CloseLoop, Delete, Trace };

struct Command {
    std::size_t line = 0;
    std::string text;
    Verb verb = Verb::Create;
    std::optional<std::string> expect;
    std::string name;  // class or process
    std::string role;
    ObjectId object;
    std::optional<ObjectId> super_object;
    std::map<std::string, ObjectId> pairs;  // ed targets or process bindings
    std::string attribute;
    std::string value;
    std::string predicate;
};

std::vector<std::string> split(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    for (std::string word; in >> word;) out.push_back(word);
    return out;
}

class LineParser {
public:
    LineParser(std::size_t line, std::string_view text) : line_(line), text_(text) {}

    Command parse() {
        Command cmd;
        cmd.line = line_;
        cmd.text = std::string(text_);
        std::vector<std::string> words = split(text_);
        std::size_t at = 0;
        if (words[at] == "expect") {
            if (words.size() < 3) fail("expect needs an outcome code and a command");
            cmd.expect = words[1];
            at = 2;
        }
        const std::string& verb = words[at];
        std::vector<std::string> rest(words.begin() + static_cast<std::ptrdiff_t>(at) + 1, words.end());
        if (verb == "create") {
            cmd.verb = Verb::Create;
            need(rest, 3);
            cmd.name = rest[0];
            cmd.role = after_as(rest, 1);
            std::size_t i = 3;
            while (i < rest.size()) {
                if (rest[i] == "ed") {
                    ++i;
                    while (i < rest.size() && rest[i].find('=') != std::string::npos) add_pair(cmd.pairs, rest[i++]);
                } else if (rest[i] == "super" && i + 1 < rest.size()) {
                    cmd.super_object = object_id(rest[i + 1]);
                    i += 2;
                } else {
                    fail("unexpected '" + rest[i] + "' in create");
                }
            }
        } else if (verb == "exec") {
            cmd.verb = Verb::Exec;
            need(rest, 3);
            cmd.name = rest[0];
            cmd.role = after_as(rest, 1);
            for (std::size_t i = 3; i < rest.size(); ++i) add_pair(cmd.pairs, rest[i]);
        } else if (verb == "modify") {
            cmd.verb = Verb::Modify;
            parse_modify(cmd, rest);
        } else if (verb == "query" || verb == "close_loop") {
            cmd.verb = verb == "query" ? Verb::Query : Verb::CloseLoop;
            need(rest, 3);
            member_ref(rest[0], cmd);
            cmd.role = after_as(rest, 1);
            if (rest.size() != 3) fail("trailing words after role");
        } else if (verb == "assert") {
            cmd.verb = Verb::Assert;
            if (rest.size() != 2) fail("assert takes <id>.<class> and a predicate");
            member_ref(rest[0], cmd);
            cmd.predicate = rest[1];
            bool known = cmd.predicate == "active" || cmd.predicate == "inactive" || cmd.predicate == "member" ||
                         cmd.predicate == "not-member" || cmd.predicate.starts_with("generation=");
            if (!known) fail("unknown predicate '" + cmd.predicate + "'");
            if (cmd.predicate.starts_with("generation=")) number(cmd.predicate.substr(11));
        } else if (verb == "migrate") {
            cmd.verb = Verb::Migrate;
            need(rest, 5);
            cmd.object = object_id(rest[0]);
            if (rest[1] != "->") fail("expected '->' after the object id");
            cmd.name = rest[2];
            cmd.role = after_as(rest, 3);
            std::size_t i = 5;
            if (i < rest.size()) {
                if (rest[i] != "ed") fail("unexpected '" + rest[i] + "' in migrate");
                for (++i; i < rest.size(); ++i) add_pair(cmd.pairs, rest[i]);
            }
        } else if (verb == "delete") {
            cmd.verb = Verb::Delete;
            if (rest.size() != 3) fail("delete takes <id> as <role>");
            cmd.object = object_id(rest[0]);
            cmd.role = after_as(rest, 1);
        } else if (verb == "trace") {
            cmd.verb = Verb::Trace;
            if (rest.size() != 1) fail("trace takes one object id");
            cmd.object = object_id(rest[0]);
        } else {
            fail("unknown command '" + verb + "'");
        }
        return cmd;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ScriptSyntaxError(line_, message); }

    void need(const std::vector<std::string>& rest, std::size_t count) const {
        if (rest.size() < count) fail("incomplete command");
    }

    std::string after_as(const std::vector<std::string>& rest, std::size_t at) const {
        if (at + 1 >= rest.size() || rest[at] != "as") fail("expected 'as <role>'");
        return rest[at + 1];
    }

    std::uint64_t number(std::string_view text) const {
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
            fail("expected a number, found '" + std::string(text) + "'");
        }
        return value;
    }

    ObjectId object_id(std::string_view text) const {
        if (text.starts_with('#')) text.remove_prefix(1);
        return ObjectId{number(text)};
    }

    void add_pair(std::map<std::string, ObjectId>& into, const std::string& word) const {
        auto eq = word.find('=');
        if (eq == std::string::npos || eq == 0) fail("expected <class>=<id>, found '" + word + "'");
        into[word.substr(0, eq)] = object_id(std::string_view(word).substr(eq + 1));
    }

    void member_ref(const std::string& word, Command& cmd) const {
        auto dot = word.find('.');
        if (dot == std::string::npos || dot + 1 == word.size()) fail("expected <id>.<class>, found '" + word + "'");
        cmd.object = object_id(std::string_view(word).substr(0, dot));
        cmd.name = word.substr(dot + 1);
    }

    // modify <id>.<class>.<attr> = <value...> as <role>
    void parse_modify(Command& cmd, const std::vector<std::string>& rest) const {
        if (rest.size() < 5 || rest[1] != "=" || rest[rest.size() - 2] != "as") {
            fail("modify takes <id>.<class>.<attr> = <value> as <role>");
        }
        const std::string& target = rest[0];
        auto first = target.find('.');
        auto last = target.rfind('.');
        if (first == std::string::npos || first == last || last + 1 == target.size()) {
            fail("expected <id>.<class>.<attr>, found '" + target + "'");
        }
        cmd.object = object_id(std::string_view(target).substr(0, first));
        cmd.name = target.substr(first + 1, last - first - 1);
        cmd.attribute = target.substr(last + 1);
        std::string value;
        for (std::size_t i = 2; i + 2 < rest.size(); ++i) value += (value.empty() ? "" : " ") + rest[i];
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        cmd.value = value;
        cmd.role = rest.back();
    }

    std::size_t line_;
    std::string_view text_;
};

std::vector<Command> parse_script(std::string_view script) {
    std::vector<Command> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= script.size()) {
        std::size_t end = script.find('\n', start);
        if (end == std::string_view::npos) end = script.size();
        std::string_view line = script.substr(start, end - start);
        ++line_no;
        start = end + 1;
        // '#' followed by a digit is an object id, anything else starts a comment.
        for (std::size_t i = 0; i < line.size(); ++i) {
            bool digit_next = i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1]));
            if (line[i] == '#' && !digit_next) {
                line = line.substr(0, i);
                break;
            }
        }
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
        if (line.empty()) continue;
        out.push_back(LineParser(line_no, line).parse());
        if (end == script.size()) break;
    }
    return out;
}

std::string describe(const Membership& m) {
    return m.class_name + " g" + std::to_string(m.generation) + " " + std::string(to_string(m.status));
}

// Runs one command; returns the outcome code ("ok" or an error/status name) and a detail line.
std::pair<std::string, std::string> execute(const Engine& engine, WorldState& world, const Command& cmd) {
    try {
        switch (cmd.verb) {
            case Verb::Create: {
                ObjectId id = engine.create_object(world, cmd.name, cmd.role, cmd.pairs, cmd.super_object);
                return {"ok", "object #" + std::to_string(id.value) + " in " + cmd.name};
            }
            case Verb::Exec: {
                ExecutionOutcome out = engine.execute_process(world, cmd.name, cmd.role, cmd.pairs);
                std::string detail;
                for (const Membership& m : out.created) detail += " +#" + std::to_string(m.object.value) + " " + describe(m);
                for (const Membership& m : out.migrated) detail += " ~#" + std::to_string(m.object.value) + " " + describe(m);
                for (const std::string& msg : out.messages) detail += " " + msg;
                return {std::string(to_string(out.status)), cmd.name + ":" + detail};
            }
            case Verb::Modify:
                engine.modify_attribute(world, cmd.object, cmd.name, cmd.attribute, cmd.value, cmd.role);
                return {"ok", cmd.name + "." + cmd.attribute + " = " + cmd.value};
            case Verb::Query: {
                QuerySnapshot snap = engine.query_object(world, cmd.object, cmd.name, cmd.role);
                std::string detail = cmd.name + " g" + std::to_string(snap.generation) + " " +
                                     std::string(to_string(snap.status)) + " {";
                bool first = true;
                for (const auto& [attr, value] : snap.values) {
                    detail += (first ? "" : ", ") + attr + "=" + value.value_or("-");
                    first = false;
                }
                return {"ok", detail + "}"};
            }
            case Verb::Migrate: {
                Membership m = engine.migrate(world, cmd.object, cmd.name, cmd.role, cmd.pairs);
                return {"ok", describe(m)};
            }
            case Verb::CloseLoop: {
                Membership m = engine.close_loop(world, cmd.object, cmd.name, cmd.role);
                return {"ok", describe(m)};
            }
            case Verb::Delete:
                engine.delete_object(world, cmd.object, cmd.role);
                return {"ok", "deleted #" + std::to_string(cmd.object.value)};
            case Verb::Trace: {
                std::string detail;
                for (const TraceEntry& t : trace(world, cmd.object)) {
                    if (!detail.empty()) detail += ", ";
                    detail += t.class_name + " g" + std::to_string(t.generation) + " " +
                              std::string(to_string(t.transitions.back().second));
                }
                return {"ok", "[" + detail + "]"};
            }
            case Verb::Assert: {
                const Membership* m = world.latest(cmd.object, cmd.name);
                bool holds = false;
                std::string actual = m ? describe(*m) : "no membership in " + cmd.name;
                if (cmd.predicate == "active") holds = m && m->status == MembershipStatus::Active;
                if (cmd.predicate == "inactive") holds = m && m->status == MembershipStatus::Inactive;
                if (cmd.predicate == "member") holds = m != nullptr;
                if (cmd.predicate == "not-member") holds = m == nullptr;
                if (cmd.predicate.starts_with("generation=")) {
                    holds = m && std::to_string(m->generation) == cmd.predicate.substr(11);
                }
                return {holds ? "ok" : "assertion_failed", actual};
            }
        }
    } catch (const EngineError& err) {
        return {std::string(to_string(err.code())), err.what()};
    }
    return {"ok", ""};
}

}  // namespace

ScriptReport run_script(const Engine& engine, WorldState& world, std::string_view script) {
    ScriptReport report;
    for (const Command& cmd : parse_script(script)) {
        auto [code, detail] = execute(engine, world, cmd);
        ScriptLine line{cmd.line, cmd.text, true, detail};
        if (cmd.expect) {
            ++report.assertions;
            line.ok = code == *cmd.expect;
            if (!line.ok) line.detail = "expected " + *cmd.expect + ", got " + code + ": " + detail;
        } else {
            if (cmd.verb == Verb::Assert) ++report.assertions;
            line.ok = code == "ok";
            if (!line.ok) line.detail = code + ": " + detail;
        }
        if (!line.ok) ++report.failures;
        report.lines.push_back(std::move(line));
    }
    return report;
}

}  // namespace iasdo
