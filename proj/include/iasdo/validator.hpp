#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iasdo/model.hpp"

namespace iasdo {

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

// Rule catalog, in report order.
//   V1 ED/DS graph acyclic              V6 loop start is an ancestor of the end
//   V2 one root per DS component        V7 condition atoms within inputs/outputs
//   V3 mono-specialisation imperative   V8 effect well-formedness
//   V4 access-view containment          V9 NOT used in a condition (warning)
//   V5 back-inactive ancestry           R1 outputs reach an input
//                                       R2 responsible roles hold create/query
enum class Rule { V1, V2, V3, V4, V5, V6, V7, V8, V9, R1, R2 };

std::string_view to_string(Rule rule);

struct Diagnostic {
    Rule rule = Rule::V1;
    Severity severity = Severity::Error;
    std::vector<std::string> elements;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
    std::vector<Diagnostic> diagnostics;
    std::size_t errors = 0;
    std::size_t warnings = 0;

    bool clean() const { return diagnostics.empty(); }
    bool has_errors() const { return errors > 0; }

    bool operator==(const ValidationReport&) const = default;
};

struct ValidationOptions {
    // R1 accepts only an output that is itself an input or has a direct ED/DS link to one.
    bool strict_r1_direct = false;
};

ValidationReport validate(const ModelSpec& model, const ValidationOptions& options = {});

// True iff a path of DS sub->super and ED source->target edges leads from
// `output_class` to an input of `process` (an input itself counts).
// Throws ModelError for an unknown process or class.
bool reaches_input(const ModelSpec& model, std::string_view process, std::string_view output_class,
                   const ValidationOptions& options = {});

// Grants whose absence triggers R2, one per missing (role, class, privilege).
std::vector<PrivilegeGrant> missing_r2_grants(const ModelSpec& model);

}  // namespace iasdo
