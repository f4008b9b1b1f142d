#include "iasdo/model.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace iasdo {

std::string_view to_string(LinkMode mode) {
    return mode == LinkMode::Imperative ? "imperative" : "optional";
}

std::string_view to_string(EffectKind kind) { return kind == EffectKind::Create ? "create" : "migrate"; }

std::string_view to_string(Privilege privilege) {
    switch (privilege) {
        case Privilege::Create: return "create";
        case Privilege::Modify: return "modify";
        case Privilege::Delete: return "delete";
        case Privilege::Query:  return "query";
    }
    return "query";
}

std::optional<Privilege> parse_privilege(std::string_view text) {
    if (text == "create") return Privilege::Create;
    if (text == "modify") return Privilege::Modify;
    if (text == "delete") return Privilege::Delete;
    if (text == "query") return Privilege::Query;
    return std::nullopt;
}

const ClassDef* ModelSpec::find_class(std::string_view name) const {
    auto it = std::ranges::find(classes, name, &ClassDef::name);
    return it == classes.end() ? nullptr : &*it;
}

const ProcessDef* ModelSpec::find_process(std::string_view name) const {
    auto it = std::ranges::find(processes, name, &ProcessDef::name);
    return it == processes.end() ? nullptr : &*it;
}

const AccessView* ModelSpec::find_access_view(std::string_view owner) const {
    auto it = std::ranges::find(access_views, owner, &AccessView::owner);
    return it == access_views.end() ? nullptr : &*it;
}

const LoopDecl* ModelSpec::find_loop(std::string_view end_class) const {
    auto it = std::ranges::find(loops, end_class, &LoopDecl::end_class);
    return it == loops.end() ? nullptr : &*it;
}

bool ModelSpec::has_role(std::string_view name) const {
    return std::ranges::find(roles, name, &RoleDef::name) != roles.end();
}

bool ModelSpec::has_grant(std::string_view role, std::string_view class_name, Privilege privilege) const {
    return std::ranges::any_of(privilege_grants, [&](const PrivilegeGrant& g) {
        return g.role == role && g.class_name == class_name && g.privilege == privilege;
    });
}

bool ModelSpec::is_responsible(std::string_view role, std::string_view process) const {
    return std::ranges::any_of(responsibilities,
                               [&](const Responsibility& r) { return r.role == role && r.process == process; });
}

ModelSpec canonicalize(ModelSpec m) {
    std::ranges::sort(m.classes, {}, &ClassDef::name);
    std::ranges::sort(m.ed_links, {}, [](const EdLink& l) { return std::tie(l.source, l.target); });
    std::ranges::sort(m.ds_links, {}, [](const DsLink& l) { return std::tie(l.sub, l.super); });
    std::ranges::sort(m.back_inactive_decls, {},
                      [](const BackInactiveDecl& d) { return std::tie(d.sub, d.ancestor); });
    std::ranges::sort(m.access_views, {}, &AccessView::owner);
    std::ranges::sort(m.loops, {}, &LoopDecl::end_class);
    std::ranges::sort(m.processes, {}, &ProcessDef::name);
    std::ranges::sort(m.roles, {}, &RoleDef::name);
    std::ranges::sort(m.privilege_grants, {}, [](const PrivilegeGrant& g) {
        return std::make_tuple(g.role, g.class_name, static_cast<int>(g.privilege));
    });
    std::ranges::sort(m.responsibilities, {}, [](const Responsibility& r) { return std::tie(r.role, r.process); });
    return m;
}

bool structurally_equal(const ModelSpec& a, const ModelSpec& b) { return canonicalize(a) == canonicalize(b); }

namespace {

void require_class(const ModelSpec& model, std::string_view name) {
    if (!model.find_class(name)) throw ModelError("unknown class '" + std::string(name) + "'");
}

template <typename Next>
std::set<std::string> closure(std::string_view start, Next next) {
    std::set<std::string> seen;
    std::deque<std::string> work{std::string(start)};
    while (!work.empty()) {
        std::string current = std::move(work.front());
        work.pop_front();
        for (const std::string& n : next(current)) {
            if (seen.insert(n).second) work.push_back(n);
        }
    }
    seen.erase(std::string(start));
    return seen;
}

}  // namespace

std::set<std::pair<std::string, LinkMode>> direct_supers(const ModelSpec& model, std::string_view class_name) {
    require_class(model, class_name);
    std::set<std::pair<std::string, LinkMode>> out;
    for (const DsLink& l : model.ds_links) {
        if (l.sub == class_name) out.emplace(l.super, l.mode);
    }
    return out;
}

std::set<std::string> direct_subs(const ModelSpec& model, std::string_view class_name) {
    require_class(model, class_name);
    std::set<std::string> out;
    for (const DsLink& l : model.ds_links) {
        if (l.super == class_name) out.insert(l.sub);
    }
    return out;
}

std::set<std::string> ancestors(const ModelSpec& model, std::string_view class_name) {
    require_class(model, class_name);
    return closure(class_name, [&](const std::string& c) {
        std::vector<std::string> next;
        for (const DsLink& l : model.ds_links) {
            if (l.sub == c) next.push_back(l.super);
        }
        return next;
    });
}

std::set<std::string> imperative_ancestors(const ModelSpec& model, std::string_view class_name) {
    require_class(model, class_name);
    return closure(class_name, [&](const std::string& c) {
        std::vector<std::string> next;
        for (const DsLink& l : model.ds_links) {
            if (l.sub == c && l.mode == LinkMode::Imperative) next.push_back(l.super);
        }
        return next;
    });
}

std::set<std::string> ds_component(const ModelSpec& model, std::string_view class_name) {
    require_class(model, class_name);
    auto out = closure(class_name, [&](const std::string& c) {
        std::vector<std::string> next;
        for (const DsLink& l : model.ds_links) {
            if (l.sub == c) next.push_back(l.super);
            if (l.super == c) next.push_back(l.sub);
        }
        return next;
    });
    out.insert(std::string(class_name));
    return out;
}

std::string ds_root(const ModelSpec& model, std::string_view class_name) {
    std::vector<std::string> roots;
    for (const std::string& c : ds_component(model, class_name)) {
        bool has_super = std::ranges::any_of(model.ds_links, [&](const DsLink& l) { return l.sub == c; });
        if (!has_super) roots.push_back(c);
    }
    if (roots.size() != 1) {
        throw ModelError("DS component of '" + std::string(class_name) + "' has " + std::to_string(roots.size()) +
                         " root classes");
    }
    return roots.front();
}

QualifiedAccessView qualified_access_view(const ModelSpec& model, std::string_view class_name) {
    require_class(model, class_name);
    const ClassDef& cls = *model.find_class(class_name);
    QualifiedAccessView view;
    auto add = [](std::vector<QualifiedName>& into, QualifiedName name) {
        bool shadowed = std::ranges::any_of(into, [&](const QualifiedName& q) { return q.member == name.member; });
        if (!shadowed) into.push_back(std::move(name));
    };
    for (const auto& a : cls.attributes) add(view.attributes, {cls.name, a});
    for (const auto& m : cls.methods) add(view.methods, {cls.name, m});
    if (const AccessView* av = model.find_access_view(class_name)) {
        for (const auto& a : av->attributes) add(view.attributes, a);
        for (const auto& m : av->methods) add(view.methods, m);
    }
    return view;
}

AccessViewResult effective_access_view(const ModelSpec& model, std::string_view class_name) {
    QualifiedAccessView q = qualified_access_view(model, class_name);
    AccessViewResult out;
    for (auto& a : q.attributes) out.attributes.push_back(std::move(a.member));
    for (auto& m : q.methods) out.methods.push_back(std::move(m.member));
    return out;
}

}  // namespace iasdo
