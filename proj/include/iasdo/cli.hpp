#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iasdo::cli {

enum class ExitCode : int {
    Clean = 0,
    Warnings = 1,
    Errors = 2,
    ParseFailure = 3,
    IoFailure = 4,
    AssertionFailure = 5,
    Usage = 64,
};

// `args` excludes the program name.
//
//   validate <file|dir> [--format text|json] [--strict-r1-direct] [--fail-on-warning] [--fix]
//   simulate <model> <script> [--format text|json]
//   export <model> [--format dot]
//   fmt <model> [--in-place]
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace iasdo::cli
