#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iasdo/runtime.hpp"

namespace iasdo {

// Trace scripts drive an Engine one command per line (`#` comments, blank lines ignored):
//
//   create <class> as <role> [ed <class>=<id> ...] [super <id>]
//   exec <process> as <role> [<class>=<id> ...]
//   modify <id>.<class>.<attr> = <value> as <role>
//   query <id>.<class> as <role>
//   assert <id>.<class> active|inactive|member|not-member|generation=<n>
//   migrate <id> -> <class> as <role> [ed <class>=<id> ...]
//   close_loop <id>.<class> as <role>
//   delete <id> as <role>
//   trace <id>
//   expect <code> <command>     the command must end with <code> (ok, effect_rejected, ...)
//
// Object ids are the integers the engine assigns, starting at 1.
// A command that fails without `expect` counts as a failed assertion.

struct ScriptLine {
    std::size_t line = 0;
    std::string command;
    bool ok = true;
    std::string detail;
};

struct ScriptReport {
    std::vector<ScriptLine> lines;
    std::size_t assertions = 0;
    std::size_t failures = 0;

    bool passed() const { return failures == 0; }
};

class ScriptSyntaxError : public std::runtime_error {
public:
    ScriptSyntaxError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Throws ScriptSyntaxError for malformed lines before executing anything.
ScriptReport run_script(const Engine& engine, WorldState& world, std::string_view script);

}  // namespace iasdo
