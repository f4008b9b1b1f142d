#pragma once

// Brute-force reference implementations and random generators shared by the
// unit and acceptance tests. Nothing here calls into the validator or the
// condition evaluator, so agreement with them is meaningful.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "iasdo/condition.hpp"
#include "iasdo/model.hpp"

namespace iasdo::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// ── Graph oracles ────────────────────────────────────────────────────────────

using Adjacency = std::map<std::string, std::vector<std::string>>;

// Edge sub->super for DS links and source->target for ED links.
inline Adjacency dependency_edges(const ModelSpec& m) {
    Adjacency g;
    for (const ClassDef& c : m.classes) g[c.name];
    for (const EdLink& l : m.ed_links) g[l.source].push_back(l.target);
    for (const DsLink& l : m.ds_links) g[l.sub].push_back(l.super);
    return g;
}

inline Adjacency ds_edges_only(const ModelSpec& m) {
    Adjacency g;
    for (const ClassDef& c : m.classes) g[c.name];
    for (const DsLink& l : m.ds_links) g[l.sub].push_back(l.super);
    return g;
}

// Calls visit(path) for every simple path starting at `from` (including the
// one-node path). A path that returns to its first node is reported once, with
// the repeated node appended, and is not extended further.
inline void enumerate_paths(const Adjacency& g, const std::string& from,
                            const std::function<void(const std::vector<std::string>&)>& visit) {
    std::vector<std::string> path{from};
    std::function<void()> walk = [&] {
        visit(path);
        if (path.size() > 1 && path.back() == path.front()) return;
        auto it = g.find(path.back());
        if (it == g.end()) return;
        for (const std::string& next : it->second) {
            bool closes = next == path.front();
            if (!closes && std::find(path.begin(), path.end(), next) != path.end()) continue;
            path.push_back(next);
            walk();
            path.pop_back();
        }
    };
    walk();
}

// Classes that lie on at least one directed cycle.
inline std::set<std::string> classes_on_cycles(const Adjacency& g) {
    std::set<std::string> out;
    for (const auto& [start, _] : g) {
        enumerate_paths(g, start, [&](const std::vector<std::string>& p) {
            if (p.size() > 1 && p.back() == p.front()) out.insert(start);
        });
    }
    return out;
}

inline bool path_exists(const Adjacency& g, const std::string& from, const std::string& to) {
    bool found = false;
    enumerate_paths(g, from, [&](const std::vector<std::string>& p) {
        if (p.back() == to) found = true;
    });
    return found;
}

// Whether `output` reaches an input of `process` by enumerating all paths.
inline bool oracle_reaches_input(const ModelSpec& m, const ProcessDef& p, const std::string& output,
                                 bool direct_only) {
    if (p.inputs.contains(output)) return true;
    Adjacency g = dependency_edges(m);
    if (direct_only) {
        const auto& next = g[output];
        return std::any_of(next.begin(), next.end(), [&](const std::string& n) { return p.inputs.contains(n); });
    }
    for (const std::string& in : p.inputs) {
        if (path_exists(g, output, in)) return true;
    }
    return false;
}

// ── Condition oracle ─────────────────────────────────────────────────────────

// Truth table of `ast` over `atoms`: bit i of the row index is the value of atoms[i].
inline std::vector<bool> truth_table(const Condition& ast, const std::vector<std::string>& atoms) {
    std::size_t rows = std::size_t{1} << atoms.size();
    switch (ast.kind()) {
        case Condition::Kind::Atom: {
            std::size_t bit = std::find(atoms.begin(), atoms.end(), ast.class_name()) - atoms.begin();
            std::vector<bool> out(rows);
            for (std::size_t r = 0; r < rows; ++r) out[r] = (r >> bit) & 1;
            return out;
        }
        case Condition::Kind::Not: {
            std::vector<bool> out = truth_table(ast.children().front(), atoms);
            out.flip();
            return out;
        }
        default: {
            std::vector<int> count(rows, 0);
            for (const Condition& child : ast.children()) {
                std::vector<bool> t = truth_table(child, atoms);
                for (std::size_t r = 0; r < rows; ++r) count[r] += t[r];
            }
            int n = static_cast<int>(ast.children().size());
            std::vector<bool> out(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                if (ast.kind() == Condition::Kind::And) out[r] = count[r] == n;
                if (ast.kind() == Condition::Kind::Or) out[r] = count[r] > 0;
                if (ast.kind() == Condition::Kind::Xor) out[r] = count[r] == 1;
            }
            return out;
        }
    }
}

inline BindingSet bindings_for_row(const std::vector<std::string>& atoms, std::size_t row) {
    BindingSet b;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        bool on = (row >> i) & 1;
        b[atoms[i]] = Binding{ObjectId{i + 1}, on};
    }
    return b;
}

inline Condition random_condition(Rng& rng, const std::vector<std::string>& atoms, int depth, bool allow_not = true) {
    if (depth <= 0 || chance(rng, 0.3)) return Condition::atom(atoms[pick(rng, atoms.size())]);
    std::size_t choice = pick(rng, allow_not ? 4 : 3);
    if (choice == 3) return Condition::negate(random_condition(rng, atoms, depth - 1, allow_not));
    std::vector<Condition> children;
    std::size_t n = 2 + pick(rng, 2);
    for (std::size_t i = 0; i < n; ++i) children.push_back(random_condition(rng, atoms, depth - 1, allow_not));
    if (choice == 0) return Condition::all_of(std::move(children));
    if (choice == 1) return Condition::any_of(std::move(children));
    return Condition::one_of(std::move(children));
}

// ── Random models ────────────────────────────────────────────────────────────

struct GraphShape {
    std::size_t max_classes = 8;
    double ed_probability = 0.12;
    double ds_probability = 0.12;
    std::size_t max_processes = 3;
};

// Classes, ED/DS links (cycles allowed) and processes with random inputs/outputs.
inline ModelSpec random_graph_model(Rng& rng, const GraphShape& shape = {}) {
    ModelSpec m;
    std::size_t n = 1 + pick(rng, shape.max_classes);
    for (std::size_t i = 0; i < n; ++i) m.classes.push_back({"C" + std::to_string(i), {}, {}});
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            auto mode = chance(rng, 0.5) ? LinkMode::Imperative : LinkMode::Optional;
            if (chance(rng, shape.ed_probability)) m.ed_links.push_back({m.classes[a].name, m.classes[b].name, mode});
            if (chance(rng, shape.ds_probability)) {
                m.ds_links.push_back({m.classes[a].name, m.classes[b].name, mode, chance(rng, 0.3)});
            }
        }
    }
    std::size_t processes = pick(rng, shape.max_processes + 1);
    for (std::size_t i = 0; i < processes; ++i) {
        ProcessDef p;
        p.name = "P" + std::to_string(i);
        for (const ClassDef& c : m.classes) {
            if (chance(rng, 0.3)) p.inputs.insert(c.name);
            if (chance(rng, 0.3)) p.outputs.insert(c.name);
        }
        if (p.inputs.empty()) p.inputs.insert(m.classes[pick(rng, n)].name);
        if (p.outputs.empty()) p.outputs.insert(m.classes[pick(rng, n)].name);
        m.processes.push_back(std::move(p));
    }
    return m;
}

// A model exercising every declaration kind, with every reference resolvable so
// that it renders to parseable text. No validation rule is guaranteed to hold.
inline ModelSpec random_full_model(Rng& rng) {
    ModelSpec m = random_graph_model(rng, {6, 0.1, 0.15, 3});
    std::size_t n = m.classes.size();
    for (std::size_t i = 0; i < n; ++i) {
        ClassDef& c = m.classes[i];
        for (std::size_t a = pick(rng, 3); a > 0; --a) c.attributes.push_back("a" + std::to_string(i) + "_" + std::to_string(a));
        for (std::size_t k = pick(rng, 2); k > 0; --k) c.methods.push_back("M" + std::to_string(i) + "_" + std::to_string(k));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (chance(rng, 0.2)) m.back_inactive_decls.push_back({m.classes[i].name, m.classes[pick(rng, n)].name});
        if (chance(rng, 0.15)) m.loops.push_back({m.classes[i].name, m.classes[pick(rng, n)].name});
        if (chance(rng, 0.3)) {
            AccessView v{m.classes[i].name, {}, {}};
            const ClassDef& from = m.classes[pick(rng, n)];
            for (const auto& a : from.attributes) {
                if (chance(rng, 0.6)) v.attributes.insert({from.name, a});
            }
            for (const auto& k : from.methods) {
                if (chance(rng, 0.6)) v.methods.insert({from.name, k});
            }
            m.access_views.push_back(std::move(v));
        }
    }
    for (ProcessDef& p : m.processes) {
        std::vector<std::string> ins(p.inputs.begin(), p.inputs.end());
        std::vector<std::string> outs(p.outputs.begin(), p.outputs.end());
        if (chance(rng, 0.7)) p.precondition = random_condition(rng, ins, 2);
        if (chance(rng, 0.7)) p.postcondition = random_condition(rng, outs, 2);
        for (std::size_t e = pick(rng, 3); e > 0; --e) {
            Effect eff;
            eff.target_class = outs[pick(rng, outs.size())];
            if (chance(rng, 0.5)) {
                eff.kind = EffectKind::Migrate;
                eff.source_binding = ins[pick(rng, ins.size())];
            } else if (chance(rng, 0.4)) {
                eff.source_binding = ins[pick(rng, ins.size())];
            }
            if (chance(rng, 0.4)) {
                std::vector<std::string> scope = ins;
                scope.insert(scope.end(), outs.begin(), outs.end());
                Condition g = random_condition(rng, scope, 1);
                if (chance(rng, 0.4)) {
                    g = Condition::all_of({std::move(g), Condition::same_ancestor(scope[pick(rng, scope.size())],
                                                                                 scope[pick(rng, scope.size())],
                                                                                 m.classes[pick(rng, n)].name)});
                }
                eff.guard = std::move(g);
            }
            p.effects.push_back(std::move(eff));
        }
    }
    std::size_t roles = 1 + pick(rng, 2);
    for (std::size_t r = 0; r < roles; ++r) m.roles.push_back({"Role" + std::to_string(r)});
    for (const RoleDef& r : m.roles) {
        for (const ClassDef& c : m.classes) {
            for (Privilege pr : {Privilege::Create, Privilege::Modify, Privilege::Delete, Privilege::Query}) {
                if (chance(rng, 0.15)) m.privilege_grants.push_back({r.name, c.name, pr});
            }
        }
        for (const ProcessDef& p : m.processes) {
            if (chance(rng, 0.4)) m.responsibilities.push_back({r.name, p.name});
        }
    }
    return m;
}

}  // namespace iasdo::testing
