#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iasdo/condition.hpp"

namespace iasdo {

enum class LinkMode { Imperative, Optional };

std::string_view to_string(LinkMode mode);

// A class of the schema: name plus ordered attribute and method names.
struct ClassDef {
    std::string name;
    std::vector<std::string> attributes;
    std::vector<std::string> methods;

    bool operator==(const ClassDef&) const = default;
};

// Existential dependency: every object of `source` depends on an object of `target`.
struct EdLink {
    std::string source;
    std::string target;
    LinkMode mode = LinkMode::Imperative;

    bool operator==(const EdLink&) const = default;
};

// Dynamic specialisation: `sub` is a direct sub-class of `super`.
// back_inactive: entering `sub` deactivates the object's membership in `super`.
struct DsLink {
    std::string sub;
    std::string super;
    LinkMode mode = LinkMode::Imperative;
    bool back_inactive = false;

    bool operator==(const DsLink&) const = default;
};

// Back-inactive declaration between a class and a (possibly non-adjacent) ancestor.
struct BackInactiveDecl {
    std::string sub;
    std::string ancestor;

    bool operator==(const BackInactiveDecl&) const = default;
};

struct QualifiedName {
    std::string class_name;
    std::string member;

    auto operator<=>(const QualifiedName&) const = default;
};

// Properties of ancestor classes made visible on `owner`.
struct AccessView {
    std::string owner;
    std::set<QualifiedName> attributes;
    std::set<QualifiedName> methods;

    bool operator==(const AccessView&) const = default;
};

// Entering end_class re-creates the object in start_class.
struct LoopDecl {
    std::string end_class;
    std::string start_class;

    bool operator==(const LoopDecl&) const = default;
};

enum class EffectKind { Create, Migrate };

std::string_view to_string(EffectKind kind);

// State change performed by a process.
//
//   create  target [from binding]: a root object is created, or the object bound to
//                                  `source_binding` gains a membership in `target_class`.
//   migrate binding -> target:     the bound object moves one DS step down (or closes a loop).
//
// A false guard skips the effect.
struct Effect {
    EffectKind kind = EffectKind::Create;
    std::string target_class;
    std::optional<std::string> source_binding;
    std::optional<Condition> guard;

    bool operator==(const Effect&) const = default;
};

struct ProcessDef {
    std::string name;
    std::set<std::string> inputs;
    std::set<std::string> outputs;
    std::optional<Condition> precondition;
    std::optional<Condition> postcondition;
    std::vector<Effect> effects;

    bool operator==(const ProcessDef&) const = default;
};

enum class Privilege { Create, Modify, Delete, Query };

std::string_view to_string(Privilege privilege);
std::optional<Privilege> parse_privilege(std::string_view text);

struct RoleDef {
    std::string name;

    bool operator==(const RoleDef&) const = default;
};

struct PrivilegeGrant {
    std::string role;
    std::string class_name;
    Privilege privilege = Privilege::Query;

    bool operator==(const PrivilegeGrant&) const = default;
};

struct Responsibility {
    std::string role;
    std::string process;

    bool operator==(const Responsibility&) const = default;
};

// A complete model: classes, ED and DS tables, back-inactive declarations,
// access-views, loops, processes with their inputs/outputs, roles, privilege
// grants and responsibilities.
struct ModelSpec {
    std::vector<ClassDef> classes;
    std::vector<EdLink> ed_links;
    std::vector<DsLink> ds_links;
    std::vector<BackInactiveDecl> back_inactive_decls;
    std::vector<AccessView> access_views;
    std::vector<LoopDecl> loops;
    std::vector<ProcessDef> processes;
    std::vector<RoleDef> roles;
    std::vector<PrivilegeGrant> privilege_grants;
    std::vector<Responsibility> responsibilities;

    bool operator==(const ModelSpec&) const = default;

    const ClassDef* find_class(std::string_view name) const;
    const ProcessDef* find_process(std::string_view name) const;
    const AccessView* find_access_view(std::string_view owner) const;
    const LoopDecl* find_loop(std::string_view end_class) const;
    bool has_role(std::string_view name) const;
    bool has_grant(std::string_view role, std::string_view class_name, Privilege privilege) const;
    bool is_responsible(std::string_view role, std::string_view process) const;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sorts every table (and nothing inside ordered lists), so two models that differ
// only in declaration order compare equal afterwards.
ModelSpec canonicalize(ModelSpec model);
bool structurally_equal(const ModelSpec& a, const ModelSpec& b);

// ── Graph queries ────────────────────────────────────────────────────────────
// All throw ModelError for undeclared class names.

std::set<std::pair<std::string, LinkMode>> direct_supers(const ModelSpec& model, std::string_view class_name);
std::set<std::string> direct_subs(const ModelSpec& model, std::string_view class_name);

// Transitive DS super-classes; never contains the class itself.
std::set<std::string> ancestors(const ModelSpec& model, std::string_view class_name);

// Ancestors reachable through imperative DS links only.
std::set<std::string> imperative_ancestors(const ModelSpec& model, std::string_view class_name);

// Classes connected to `class_name` through DS links in either direction (including itself).
std::set<std::string> ds_component(const ModelSpec& model, std::string_view class_name);

// The unique class of the DS component without a DS super. Throws ModelError
// when the component has zero or several roots.
std::string ds_root(const ModelSpec& model, std::string_view class_name);

struct AccessViewResult {
    std::vector<std::string> attributes;
    std::vector<std::string> methods;
};

// Own attributes/methods followed by the selected ancestor properties.
AccessViewResult effective_access_view(const ModelSpec& model, std::string_view class_name);

struct QualifiedAccessView {
    std::vector<QualifiedName> attributes;
    std::vector<QualifiedName> methods;
};

// Same as effective_access_view, but every property carries its declaring class.
// An own property shadows a selected ancestor property with the same name.
QualifiedAccessView qualified_access_view(const ModelSpec& model, std::string_view class_name);

}  // namespace iasdo
