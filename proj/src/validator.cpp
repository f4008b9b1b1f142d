#include "iasdo/validator.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <tuple>

namespace iasdo {

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string_view to_string(Rule rule) {
    switch (rule) {
        case Rule::V1: return "V1";
        case Rule::V2: return "V2";
        case Rule::V3: return "V3";
        case Rule::V4: return "V4";
        case Rule::V5: return "V5";
        case Rule::V6: return "V6";
        case Rule::V7: return "V7";
        case Rule::V8: return "V8";
        case Rule::V9: return "V9";
        case Rule::R1: return "R1";
        case Rule::R2: return "R2";
    }
    return "?";
}

namespace {

using Graph = std::map<std::string, std::vector<std::string>>;

// Dependency graph: ED source -> target and DS sub -> super.
Graph dependency_graph(const ModelSpec& model) {
    Graph g;
    for (const ClassDef& c : model.classes) g[c.name];
    for (const EdLink& l : model.ed_links) g[l.source].push_back(l.target);
    for (const DsLink& l : model.ds_links) g[l.sub].push_back(l.super);
    return g;
}

// Tarjan's algorithm; returns components that contain a cycle.
std::vector<std::vector<std::string>> cyclic_components(const Graph& g) {
    std::map<std::string, int> index;
    std::map<std::string, int> low;
    std::map<std::string, bool> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> out;
    int counter = 0;

    std::function<void(const std::string&)> connect = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        auto it = g.find(v);
        if (it != g.end()) {
            for (const std::string& w : it->second) {
                if (!index.contains(w)) {
                    connect(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
        }
        if (low[v] != index[v]) return;
        std::vector<std::string> component;
        std::string w;
        do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component.push_back(w);
        } while (w != v);
        bool self_loop = false;
        if (component.size() == 1 && it != g.end()) self_loop = std::ranges::find(it->second, v) != it->second.end();
        if (component.size() > 1 || self_loop) {
            std::ranges::sort(component);
            out.push_back(std::move(component));
        }
    };
    for (const auto& [v, _] : g) {
        if (!index.contains(v)) connect(v);
    }
    return out;
}

std::set<std::string> ancestors_or_empty(const ModelSpec& model, const std::string& name) {
    return model.find_class(name) ? ancestors(model, name) : std::set<std::string>{};
}

class Checker {
public:
    Checker(const ModelSpec& model, const ValidationOptions& options) : model_(model), options_(options) {}

    ValidationReport run() {
        check_acyclic();
        check_single_root();
        check_mono_specialisation();
        check_access_views();
        check_back_inactive();
        check_loops();
        check_condition_scopes();
        check_effects();
        check_portability();
        check_r1();
        check_r2();

        std::ranges::sort(report_.diagnostics, {}, [](const Diagnostic& d) {
            return std::tie(d.rule, d.elements, d.message);
        });
        for (const Diagnostic& d : report_.diagnostics) {
            (d.severity == Severity::Error ? report_.errors : report_.warnings)++;
        }
        return std::move(report_);
    }

private:
    void add(Rule rule, Severity severity, std::vector<std::string> elements, std::string message) {
        report_.diagnostics.push_back({rule, severity, std::move(elements), std::move(message)});
    }

    void check_acyclic() {
        for (auto& component : cyclic_components(dependency_graph(model_))) {
            std::string msg = "cycle through ED/DS links among";
            for (const auto& c : component) msg += " " + c;
            add(Rule::V1, Severity::Error, std::move(component), std::move(msg));
        }
    }

    void check_single_root() {
        std::set<std::string> seen;
        for (const DsLink& link : model_.ds_links) {
            if (seen.contains(link.sub) || !model_.find_class(link.sub)) continue;
            std::set<std::string> component = ds_component(model_, link.sub);
            seen.insert(component.begin(), component.end());
            std::vector<std::string> roots;
            for (const auto& c : component) {
                if (std::ranges::none_of(model_.ds_links, [&](const DsLink& l) { return l.sub == c; })) {
                    roots.push_back(c);
                }
            }
            if (roots.size() == 1) continue;
            std::vector<std::string> elements = roots.empty() ? std::vector(component.begin(), component.end()) : roots;
            add(Rule::V2, Severity::Error, std::move(elements),
                "DS graph has " + std::to_string(roots.size()) + " root classes, expected exactly one");
        }
    }

    void check_mono_specialisation() {
        for (const ClassDef& c : model_.classes) {
            auto supers = direct_supers(model_, c.name);
            if (supers.size() != 1) continue;
            const auto& [super, mode] = *supers.begin();
            if (mode == LinkMode::Optional) {
                add(Rule::V3, Severity::Error, {c.name, super},
                    c.name + " has a single direct super-class " + super + ", so the DS link must be imperative");
            }
        }
    }

    void check_selection(const AccessView& view, const QualifiedName& q, bool is_method,
                         const std::set<std::string>& all, const std::set<std::string>& imperative) {
        std::string qualified = q.class_name + "." + q.member;
        const ClassDef* cls = model_.find_class(q.class_name);
        const auto* members = cls ? (is_method ? &cls->methods : &cls->attributes) : nullptr;
        if (!members || std::ranges::find(*members, q.member) == members->end()) {
            add(Rule::V4, Severity::Error, {view.owner, qualified},
                std::string(is_method ? "method " : "attribute ") + qualified + " is not declared");
            return;
        }
        if (q.class_name == view.owner || imperative.contains(q.class_name)) return;
        if (all.contains(q.class_name)) {
            add(Rule::V4, Severity::Warning, {view.owner, qualified},
                "access-view of " + view.owner + " selects " + qualified +
                    " from an ancestor reached only through optional DS links");
        } else {
            add(Rule::V4, Severity::Error, {view.owner, qualified},
                "access-view of " + view.owner + " selects " + qualified + ", but " + q.class_name +
                    " is not a DS ancestor of " + view.owner);
        }
    }

    void check_access_views() {
        for (const AccessView& view : model_.access_views) {
            if (!model_.find_class(view.owner)) {
                add(Rule::V4, Severity::Error, {view.owner}, "access-view owner " + view.owner + " is not declared");
                continue;
            }
            auto all = ancestors(model_, view.owner);
            auto imperative = imperative_ancestors(model_, view.owner);
            for (const auto& q : view.attributes) check_selection(view, q, false, all, imperative);
            for (const auto& q : view.methods) check_selection(view, q, true, all, imperative);
        }
    }

    void check_back_inactive() {
        for (const BackInactiveDecl& d : model_.back_inactive_decls) {
            if (!ancestors_or_empty(model_, d.sub).contains(d.ancestor)) {
                add(Rule::V5, Severity::Error, {d.sub, d.ancestor},
                    "back-inactive target " + d.ancestor + " is not a DS ancestor of " + d.sub);
            }
        }
    }

    void check_loops() {
        for (const LoopDecl& l : model_.loops) {
            if (!ancestors_or_empty(model_, l.end_class).contains(l.start_class)) {
                add(Rule::V6, Severity::Error, {l.end_class, l.start_class},
                    "loop start " + l.start_class + " is not a DS ancestor of loop end " + l.end_class);
            }
        }
    }

    void check_scope(const ProcessDef& p, const std::optional<Condition>& cond, const std::set<std::string>& allowed,
                     std::string_view what, std::string_view where) {
        if (!cond) return;
        if (uses_same_ancestor(*cond)) {
            add(Rule::V7, Severity::Error, {p.name},
                std::string(what) + " of " + p.name + " uses same_ancestor, which is only allowed in effect guards");
        }
        for (const auto& atom : atoms_of(*cond)) {
            if (!allowed.contains(atom)) {
                add(Rule::V7, Severity::Error, {p.name, atom},
                    std::string(what) + " of " + p.name + " mentions " + atom + ", which is not one of its " +
                        std::string(where));
            }
        }
    }

    void check_condition_scopes() {
        for (const ProcessDef& p : model_.processes) {
            check_scope(p, p.precondition, p.inputs, "precondition", "inputs");
            check_scope(p, p.postcondition, p.outputs, "postcondition", "outputs");
        }
    }

    void check_effects() {
        for (const ProcessDef& p : model_.processes) {
            std::set<std::string> scope = p.inputs;
            scope.insert(p.outputs.begin(), p.outputs.end());
            for (const Effect& e : p.effects) {
                std::string label = std::string(to_string(e.kind)) + " " + e.target_class;
                if (!scope.contains(e.target_class)) {
                    add(Rule::V8, Severity::Error, {p.name, e.target_class},
                        "effect '" + label + "' of " + p.name + " targets a class outside its inputs and outputs");
                }
                if (e.source_binding && !scope.contains(*e.source_binding)) {
                    add(Rule::V8, Severity::Error, {p.name, *e.source_binding},
                        "effect '" + label + "' of " + p.name + " binds " + *e.source_binding +
                            ", which is neither an input nor an output");
                }
                if (e.guard) {
                    for (const auto& atom : atoms_of(*e.guard)) {
                        if (!scope.contains(atom)) {
                            add(Rule::V8, Severity::Error, {p.name, atom},
                                "guard of effect '" + label + "' of " + p.name + " mentions " + atom +
                                    ", which is neither an input nor an output");
                        }
                    }
                }
                if (e.kind == EffectKind::Migrate) check_migration(p, e);
            }
        }
    }

    void check_migration(const ProcessDef& p, const Effect& e) {
        if (!e.source_binding) {
            add(Rule::V8, Severity::Error, {p.name, e.target_class},
                "migrate effect of " + p.name + " into " + e.target_class + " has no source binding");
            return;
        }
        const std::string& from = *e.source_binding;
        bool one_step = std::ranges::any_of(model_.ds_links, [&](const DsLink& l) {
            return l.sub == e.target_class && l.super == from;
        });
        const LoopDecl* loop = model_.find_loop(from);
        bool closes_loop = loop && loop->start_class == e.target_class;
        if (!one_step && !closes_loop) {
            add(Rule::V8, Severity::Error, {p.name, from, e.target_class},
                "process " + p.name + " migrates " + from + " to " + e.target_class +
                    ", which is neither one DS step below it nor the start of its loop");
        }
    }

    void check_portability() {
        for (const ProcessDef& p : model_.processes) {
            bool negated = (p.precondition && uses_negation(*p.precondition)) ||
                           (p.postcondition && uses_negation(*p.postcondition));
            if (negated) {
                add(Rule::V9, Severity::Warning, {p.name},
                    "conditions of " + p.name + " use NOT; only AND, OR and XOR are portable connectors");
            }
        }
    }

    void check_r1() {
        for (const ProcessDef& p : model_.processes) {
            for (const auto& out : p.outputs) {
                if (!model_.find_class(out)) continue;
                if (!reaches_input(model_, p.name, out, options_)) {
                    add(Rule::R1, Severity::Error, {p.name, out},
                        "output " + out + " of process " + p.name + " is not linked to any of its input classes");
                }
            }
        }
    }

    void check_r2() {
        std::map<std::tuple<std::string, std::string, Privilege>, std::set<std::string>> missing;
        for (const Responsibility& r : model_.responsibilities) {
            const ProcessDef* p = model_.find_process(r.process);
            if (!p) continue;
            for (const auto& out : p->outputs) {
                if (!model_.has_grant(r.role, out, Privilege::Create)) missing[{r.role, out, Privilege::Create}].insert(p->name);
            }
            for (const auto& in : p->inputs) {
                if (!model_.has_grant(r.role, in, Privilege::Query)) missing[{r.role, in, Privilege::Query}].insert(p->name);
            }
        }
        for (const auto& [key, processes] : missing) {
            const auto& [role, cls, privilege] = key;
            std::string msg = "role " + role + " lacks " + std::string(to_string(privilege)) + " privilege on " + cls +
                              " (responsible for";
            for (const auto& p : processes) msg += " " + p;
            msg += ")";
            add(Rule::R2, Severity::Error, {role, cls}, std::move(msg));
        }
    }

    const ModelSpec& model_;
    const ValidationOptions& options_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate(const ModelSpec& model, const ValidationOptions& options) {
    return Checker(model, options).run();
}

bool reaches_input(const ModelSpec& model, std::string_view process, std::string_view output_class,
                   const ValidationOptions& options) {
    const ProcessDef* p = model.find_process(process);
    if (!p) throw ModelError("unknown process '" + std::string(process) + "'");
    if (!model.find_class(output_class)) throw ModelError("unknown class '" + std::string(output_class) + "'");

    const Graph g = dependency_graph(model);
    std::string start(output_class);
    if (p->inputs.contains(start)) return true;
    if (options.strict_r1_direct) {
        auto it = g.find(start);
        return std::ranges::any_of(it->second, [&](const std::string& n) { return p->inputs.contains(n); });
    }
    std::set<std::string> seen{start};
    std::deque<std::string> work{start};
    while (!work.empty()) {
        auto it = g.find(work.front());
        work.pop_front();
        if (it == g.end()) continue;
        for (const std::string& n : it->second) {
            if (p->inputs.contains(n)) return true;
            if (seen.insert(n).second) work.push_back(n);
        }
    }
    return false;
}

std::vector<PrivilegeGrant> missing_r2_grants(const ModelSpec& model) {
    std::set<std::tuple<std::string, std::string, Privilege>> needed;
    for (const Responsibility& r : model.responsibilities) {
        const ProcessDef* p = model.find_process(r.process);
        if (!p) continue;
        for (const auto& out : p->outputs) needed.emplace(r.role, out, Privilege::Create);
        for (const auto& in : p->inputs) needed.emplace(r.role, in, Privilege::Query);
    }
    std::vector<PrivilegeGrant> out;
    for (const auto& [role, cls, privilege] : needed) {
        if (!model.has_grant(role, cls, privilege)) out.push_back({role, cls, privilege});
    }
    return out;
}

}  // namespace iasdo
