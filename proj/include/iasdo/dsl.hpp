#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iasdo/model.hpp"
#include "iasdo/validator.hpp"

namespace iasdo {

// 1-based position of a token in a source file.
struct SourceSpan {
    std::string file;
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t length = 0;
    std::size_t offset = 0;  // byte offset into the source text

    bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
    SourceSpan span;
    std::string expected;
    std::string found;

    // "file:line:col: expected X, found Y"
    std::string message() const;
};

struct ParseOptions {
    std::string file = "<input>";
    bool first_error_only = false;
};

struct ParseResult {
    std::optional<ModelSpec> model;
    std::vector<ParseError> errors;

    bool ok() const { return model.has_value(); }
};

// Parses the textual model language.
//
//   class Copy { attrs: copy_code, document_number; methods: Lose; }
//   ed Copy -> Document imperative;
//   ds AvailableCopy -> Copy imperative [back_inactive];
//   back_inactive ReturnedCopy -> AvailableCopy;
//   access_view BorrowedCopy { attrs: Copy.copy_code; methods: Copy.Lose; }
//   loop ReturnedCopy -> AvailableCopy;
//   process P {
//     inputs: A, B; outputs: C;
//     pre: A and B; post: C;
//     effects: migrate A -> C when same_ancestor(A, B, Document), create D from B;
//   }
//   role Librarian;
//   grant Librarian create on C;
//   responsible Librarian for P;
//
// `#` starts a line comment. Every referenced name must be declared somewhere in
// the file; duplicate declarations are errors. No semantic rule is checked here.
ParseResult parse_model(std::string_view text, const ParseOptions& options = {});

// Parses a standalone condition. Class names are not resolved.
// `allow_guards` admits same_ancestor(...) factors.
std::optional<Condition> parse_condition(std::string_view text, std::vector<ParseError>* errors = nullptr,
                                         bool allow_guards = false);

// Canonical text: declarations grouped by kind and sorted, fixed indentation.
std::string render_model(const ModelSpec& model);
std::string render_condition(const Condition& ast);

// {"diagnostics":[{"elements":[...],"message":...,"rule":...,"severity":...}],
//  "summary":{"errors":n,"warnings":n}} with keys in sorted order.
std::string report_to_json(const ValidationReport& report);

// Graphviz class graph: ED edges solid, DS edges dashed, loops dotted.
std::string model_to_dot(const ModelSpec& model);

}  // namespace iasdo
