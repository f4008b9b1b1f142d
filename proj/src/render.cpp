#include <sstream>

#include "json.hpp"

#include "iasdo/dsl.hpp"

namespace iasdo {

namespace {

void join(std::ostream& os, const auto& items, auto&& print) {
    bool first = true;
    for (const auto& item : items) {
        if (!first) os << ", ";
        first = false;
        print(item);
    }
}

void render_operand(std::ostream& os, const Condition& c, Condition::Kind parent);

void render_condition_to(std::ostream& os, const Condition& c) {
    switch (c.kind()) {
        case Condition::Kind::Atom:
            os << c.class_name();
            return;
        case Condition::Kind::SameAncestor:
            os << "same_ancestor(" << c.names()[0] << ", " << c.names()[1] << ", " << c.names()[2] << ")";
            return;
        case Condition::Kind::Not:
            os << "not ";
            render_operand(os, c.children().front(), Condition::Kind::Not);
            return;
        default: {
            const char* op = c.kind() == Condition::Kind::And ? " and " : c.kind() == Condition::Kind::Or ? " or " : " xor ";
            bool first = true;
            for (const auto& child : c.children()) {
                if (!first) os << op;
                first = false;
                render_operand(os, child, c.kind());
            }
        }
    }
}

// Parenthesises every operand whose shape the grammar would otherwise flatten
// or re-associate, so parsing the output gives back the same tree.
void render_operand(std::ostream& os, const Condition& c, Condition::Kind parent) {
    using K = Condition::Kind;
    bool leaf = c.kind() == K::Atom || c.kind() == K::SameAncestor;
    bool wrap = false;
    if (parent == K::Not) {
        wrap = !leaf;
    } else if (parent == K::And) {
        wrap = c.kind() == K::And || c.kind() == K::Or || c.kind() == K::Xor;
    } else {
        wrap = c.kind() == K::Or || c.kind() == K::Xor;
    }
    if (wrap) os << '(';
    render_condition_to(os, c);
    if (wrap) os << ')';
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string render_condition(const Condition& ast) {
    std::ostringstream os;
    render_condition_to(os, ast);
    return os.str();
}

std::string render_model(const ModelSpec& input) {
    const ModelSpec m = canonicalize(input);
    std::ostringstream os;
    bool need_gap = false;
    auto group = [&](bool non_empty) {
        if (non_empty && need_gap) os << '\n';
        need_gap = need_gap || non_empty;
    };
    auto print_name = [&](const std::string& s) { os << s; };
    auto print_qualified = [&](const QualifiedName& q) { os << q.class_name << '.' << q.member; };

    for (const ClassDef& c : m.classes) {
        group(true);
        os << "class " << c.name << " {";
        if (c.attributes.empty() && c.methods.empty()) {
            os << "}\n";
            continue;
        }
        os << '\n';
        if (!c.attributes.empty()) {
            os << "  attrs: ";
            join(os, c.attributes, print_name);
            os << ";\n";
        }
        if (!c.methods.empty()) {
            os << "  methods: ";
            join(os, c.methods, print_name);
            os << ";\n";
        }
        os << "}\n";
    }

    group(!m.ed_links.empty());
    for (const EdLink& l : m.ed_links) os << "ed " << l.source << " -> " << l.target << ' ' << to_string(l.mode) << ";\n";

    group(!m.ds_links.empty());
    for (const DsLink& l : m.ds_links) {
        os << "ds " << l.sub << " -> " << l.super << ' ' << to_string(l.mode) << (l.back_inactive ? " back_inactive" : "")
           << ";\n";
    }

    group(!m.back_inactive_decls.empty());
    for (const BackInactiveDecl& d : m.back_inactive_decls) os << "back_inactive " << d.sub << " -> " << d.ancestor << ";\n";

    for (const AccessView& v : m.access_views) {
        group(true);
        os << "access_view " << v.owner << " {";
        if (v.attributes.empty() && v.methods.empty()) {
            os << "}\n";
            continue;
        }
        os << '\n';
        if (!v.attributes.empty()) {
            os << "  attrs: ";
            join(os, v.attributes, print_qualified);
            os << ";\n";
        }
        if (!v.methods.empty()) {
            os << "  methods: ";
            join(os, v.methods, print_qualified);
            os << ";\n";
        }
        os << "}\n";
    }

    group(!m.loops.empty());
    for (const LoopDecl& l : m.loops) os << "loop " << l.end_class << " -> " << l.start_class << ";\n";

    for (const ProcessDef& p : m.processes) {
        group(true);
        os << "process " << p.name << " {\n";
        if (!p.inputs.empty()) {
            os << "  inputs: ";
            join(os, p.inputs, print_name);
            os << ";\n";
        }
        if (!p.outputs.empty()) {
            os << "  outputs: ";
            join(os, p.outputs, print_name);
            os << ";\n";
        }
        if (p.precondition) os << "  pre: " << render_condition(*p.precondition) << ";\n";
        if (p.postcondition) os << "  post: " << render_condition(*p.postcondition) << ";\n";
        if (!p.effects.empty()) {
            os << "  effects:";
            for (std::size_t i = 0; i < p.effects.size(); ++i) {
                const Effect& e = p.effects[i];
                os << "\n    ";
                if (e.kind == EffectKind::Create) {
                    os << "create " << e.target_class;
                    if (e.source_binding) os << " from " << *e.source_binding;
                } else {
                    os << "migrate " << e.source_binding.value_or("") << " -> " << e.target_class;
                }
                if (e.guard) os << " when " << render_condition(*e.guard);
                os << (i + 1 == p.effects.size() ? ";" : ",");
            }
            os << '\n';
        }
        os << "}\n";
    }

    group(!m.roles.empty());
    for (const RoleDef& r : m.roles) os << "role " << r.name << ";\n";

    group(!m.privilege_grants.empty());
    for (const PrivilegeGrant& g : m.privilege_grants) {
        os << "grant " << g.role << ' ' << to_string(g.privilege) << " on " << g.class_name << ";\n";
    }

    group(!m.responsibilities.empty());
    for (const Responsibility& r : m.responsibilities) os << "responsible " << r.role << " for " << r.process << ";\n";

    return os.str();
}

std::string report_to_json(const ValidationReport& report) {
    nlohmann::json diagnostics = nlohmann::json::array();
    for (const Diagnostic& d : report.diagnostics) {
        diagnostics.push_back({{"rule", std::string(to_string(d.rule))},
                               {"severity", std::string(to_string(d.severity))},
                               {"elements", d.elements},
                               {"message", d.message}});
    }
    nlohmann::json doc = {{"diagnostics", std::move(diagnostics)},
                          {"summary", {{"errors", report.errors}, {"warnings", report.warnings}}}};
    return doc.dump();
}

std::string model_to_dot(const ModelSpec& input) {
    const ModelSpec m = canonicalize(input);
    std::ostringstream os;
    os << "digraph iasdo {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=box];\n";
    for (const ClassDef& c : m.classes) os << "  " << quoted(c.name) << ";\n";
    for (const EdLink& l : m.ed_links) {
        os << "  " << quoted(l.source) << " -> " << quoted(l.target) << " [style=solid, label=\"ed "
           << to_string(l.mode) << "\"];\n";
    }
    for (const DsLink& l : m.ds_links) {
        os << "  " << quoted(l.sub) << " -> " << quoted(l.super) << " [style=dashed, label=\"ds " << to_string(l.mode)
           << (l.back_inactive ? ", back_inactive" : "") << "\"];\n";
    }
    for (const LoopDecl& l : m.loops) {
        os << "  " << quoted(l.end_class) << " -> " << quoted(l.start_class)
           << " [style=dotted, label=\"loop\", constraint=false];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace iasdo
