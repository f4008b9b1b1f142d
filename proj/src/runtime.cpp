#include "iasdo/runtime.hpp"

#include <algorithm>
#include <deque>

#include "iasdo/validator.hpp"

namespace iasdo {

std::string_view to_string(MembershipStatus status) {
    return status == MembershipStatus::Active ? "active" : "inactive";
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::PrivilegeDenied:     return "privilege_denied";
        case ErrorCode::NotResponsible:      return "not_responsible";
        case ErrorCode::EffectRejected:      return "effect_rejected";
        case ErrorCode::InactiveMembership:  return "inactive_membership";
        case ErrorCode::UnknownObject:       return "unknown_object";
        case ErrorCode::UnknownMembership:   return "unknown_membership";
        case ErrorCode::UnknownName:         return "unknown_name";
        case ErrorCode::MissingEdTarget:     return "missing_ed_target";
        case ErrorCode::MissingSuper:        return "missing_super";
        case ErrorCode::AttributeNotVisible: return "attribute_not_visible";
        case ErrorCode::NoLoopDeclared:      return "no_loop_declared";
        case ErrorCode::HasDependents:       return "has_dependents";
        case ErrorCode::InvalidArgument:     return "invalid_argument";
    }
    return "?";
}

std::string_view to_string(ExecutionStatus status) {
    switch (status) {
        case ExecutionStatus::Ok:                  return "ok";
        case ExecutionStatus::PreconditionFailed:  return "precondition_failed";
        case ExecutionStatus::PostconditionFailed: return "postcondition_failed";
        case ExecutionStatus::PrivilegeDenied:     return "privilege_denied";
        case ExecutionStatus::NotResponsible:      return "not_responsible";
        case ExecutionStatus::EffectRejected:      return "effect_rejected";
    }
    return "?";
}

// ── WorldState ───────────────────────────────────────────────────────────────

const Membership* WorldState::latest(ObjectId object, std::string_view class_name) const {
    const Membership* best = nullptr;
    for (const Membership& m : memberships) {
        if (m.object == object && m.class_name == class_name && (!best || m.generation > best->generation)) best = &m;
    }
    return best;
}

bool WorldState::is_active(ObjectId object, std::string_view class_name) const {
    const Membership* m = latest(object, class_name);
    return m && m->status == MembershipStatus::Active;
}

bool WorldState::exists(ObjectId object) const {
    return !deleted.contains(object) &&
           std::ranges::any_of(memberships, [&](const Membership& m) { return m.object == object; });
}

std::vector<const Membership*> WorldState::memberships_of(ObjectId object) const {
    std::vector<const Membership*> out;
    for (const Membership& m : memberships) {
        if (m.object == object) out.push_back(&m);
    }
    return out;
}

void apply_event(WorldState& world, const Event& e) {
    switch (e.kind) {
        case EventKind::CreateObject:
            world.memberships.push_back({e.object, e.class_name, 1, MembershipStatus::Active, std::nullopt, e.seq});
            world.next_object = std::max(world.next_object, e.object.value + 1);
            break;
        case EventKind::EnterClass:
            world.memberships.push_back(
                {e.object, e.class_name, e.generation, MembershipStatus::Active, e.super_link, e.seq});
            break;
        case EventKind::SetStatus:
            for (Membership& m : world.memberships) {
                if (m.object == e.object && m.class_name == e.class_name && m.generation == e.generation) {
                    m.status = e.status;
                }
            }
            break;
        case EventKind::LinkEd:
            world.ed_instances.push_back({e.object, e.target, e.class_name, e.target_class});
            break;
        case EventKind::SetAttribute:
            world.attributes[{e.object, e.attribute_owner, e.attribute}] = e.value;
            break;
        case EventKind::DeleteObject:
            std::erase_if(world.memberships, [&](const Membership& m) { return m.object == e.object; });
            std::erase_if(world.ed_instances, [&](const EdInstance& i) { return i.dependent == e.object; });
            std::erase_if(world.attributes, [&](const auto& kv) { return kv.first.object == e.object; });
            world.deleted.insert(e.object);
            break;
        case EventKind::Query:
        case EventKind::ProcessExecuted:
            break;
    }
    world.clock = e.seq;
    world.events.push_back(e);
}

WorldState replay(const std::vector<Event>& events) {
    WorldState world;
    for (const Event& e : events) apply_event(world, e);
    return world;
}

std::vector<TraceEntry> trace(const WorldState& world, ObjectId object) {
    std::vector<TraceEntry> out;
    for (const Event& e : world.events) {
        if (e.object != object) continue;
        if (e.kind == EventKind::CreateObject || e.kind == EventKind::EnterClass) {
            TraceEntry entry;
            entry.class_name = e.class_name;
            entry.generation = e.kind == EventKind::CreateObject ? 1 : e.generation;
            entry.created_at = e.seq;
            entry.role = e.role;
            entry.process = e.process;
            entry.via_loop = e.via_loop;
            entry.transitions.emplace_back(e.seq, MembershipStatus::Active);
            out.push_back(std::move(entry));
        } else if (e.kind == EventKind::SetStatus) {
            for (TraceEntry& entry : out) {
                if (entry.class_name == e.class_name && entry.generation == e.generation) {
                    entry.transitions.emplace_back(e.seq, e.status);
                }
            }
        }
    }
    if (out.empty()) throw EngineError(ErrorCode::UnknownObject, "no history for object #" + std::to_string(object.value));
    return out;
}

// ── Engine ───────────────────────────────────────────────────────────────────

Engine::Engine(ModelSpec model, EngineOptions options) : model_(std::move(model)), options_(options) {
    ValidationReport report = validate(model_);
    if (report.has_errors()) {
        std::string msg = "model has " + std::to_string(report.errors) + " validation error(s)";
        for (const Diagnostic& d : report.diagnostics) {
            if (d.severity == Severity::Error) {
                msg += "; " + std::string(to_string(d.rule)) + ": " + d.message;
                break;
            }
        }
        throw ModelError(msg);
    }
}

void Engine::emit(WorldState& world, Event event) const {
    event.seq = world.clock + 1;
    apply_event(world, event);
}

void Engine::require_role(std::string_view role) const {
    if (!model_.has_role(role)) throw EngineError(ErrorCode::UnknownName, "unknown role '" + std::string(role) + "'");
}

void Engine::require_class(std::string_view class_name) const {
    if (!model_.find_class(class_name)) {
        throw EngineError(ErrorCode::UnknownName, "unknown class '" + std::string(class_name) + "'");
    }
}

void Engine::require_privilege(std::string_view role, std::string_view class_name, Privilege privilege) const {
    require_role(role);
    if (!model_.has_grant(role, class_name, privilege)) {
        throw EngineError(ErrorCode::PrivilegeDenied, "role " + std::string(role) + " has no " +
                                                          std::string(to_string(privilege)) + " privilege on " +
                                                          std::string(class_name));
    }
}

void Engine::require_object(const WorldState& world, ObjectId object) const {
    if (!world.exists(object)) {
        throw EngineError(ErrorCode::UnknownObject, "unknown object #" + std::to_string(object.value));
    }
}

std::vector<EdInstance> Engine::resolve_ed_links(const WorldState& world, ObjectId object,
                                                 std::string_view class_name, const EdTargets& ed_targets) const {
    auto existing = [&](const std::string& target_class) -> const EdInstance* {
        for (const EdInstance& i : world.ed_instances) {
            if (i.dependent == object && i.source_class == class_name && i.target_class == target_class) return &i;
        }
        return nullptr;
    };
    std::vector<EdInstance> out;
    for (const auto& [target_class, target] : ed_targets) {
        bool declared = std::ranges::any_of(model_.ed_links, [&](const EdLink& l) {
            return l.source == class_name && l.target == target_class;
        });
        if (!declared) {
            throw EngineError(ErrorCode::InvalidArgument,
                              "no ED link from " + std::string(class_name) + " to " + target_class);
        }
        if (!world.exists(target) || !world.latest(target, target_class)) {
            throw EngineError(ErrorCode::MissingEdTarget,
                              "object #" + std::to_string(target.value) + " is not a member of " + target_class);
        }
        if (const EdInstance* prior = existing(target_class)) {
            if (prior->target != target) {
                throw EngineError(ErrorCode::EffectRejected, "ED link " + std::string(class_name) + " -> " +
                                                                 target_class + " is permanent and already set");
            }
            continue;
        }
        out.push_back({object, target, std::string(class_name), target_class});
    }
    for (const EdLink& l : model_.ed_links) {
        if (l.source != class_name || l.mode != LinkMode::Imperative) continue;
        if (!ed_targets.contains(l.target) && !existing(l.target)) {
            throw EngineError(ErrorCode::MissingEdTarget,
                              std::string(class_name) + " requires an imperative ED target in " + l.target);
        }
    }
    return out;
}

void Engine::check_loop_chain(std::string_view class_name, std::string_view role) const {
    std::string current(class_name);
    for (std::size_t hops = 0; hops <= model_.classes.size(); ++hops) {
        const LoopDecl* loop = model_.find_loop(current);
        if (!loop) return;
        require_privilege(role, loop->start_class, Privilege::Create);
        current = loop->start_class;
    }
}

const LoopDecl* Engine::pending_loop(const WorldState& world, ObjectId object, std::string_view start_class) const {
    const Membership* newest = nullptr;
    for (const Membership* m : world.memberships_of(object)) {
        if (!newest || m->created_at > newest->created_at) newest = m;
    }
    if (!newest || newest->status != MembershipStatus::Active) return nullptr;
    const LoopDecl* loop = model_.find_loop(newest->class_name);
    if (!loop || loop->start_class != start_class) return nullptr;
    return loop;
}

Membership Engine::enter_class(WorldState& world, ObjectId object, std::string_view class_name,
                               std::optional<MembershipRef> super_link, bool via_loop, const Cause& cause,
                               const std::vector<EdInstance>& ed_links) const {
    if (options_.auto_close_loops) check_loop_chain(class_name, cause.role);

    const Membership* prior = world.latest(object, class_name);
    Event enter;
    enter.kind = EventKind::EnterClass;
    enter.object = object;
    enter.class_name = std::string(class_name);
    enter.generation = prior ? prior->generation + 1 : 1;
    enter.role = cause.role;
    enter.process = cause.process;
    enter.super_link = std::move(super_link);
    enter.via_loop = via_loop;
    emit(world, enter);

    for (const EdInstance& link : ed_links) {
        Event e;
        e.kind = EventKind::LinkEd;
        e.object = object;
        e.class_name = link.source_class;
        e.target = link.target;
        e.target_class = link.target_class;
        e.role = cause.role;
        e.process = cause.process;
        emit(world, e);
    }

    std::set<std::string> to_deactivate;
    for (const DsLink& l : model_.ds_links) {
        if (l.sub == class_name && l.back_inactive) to_deactivate.insert(l.super);
    }
    for (const BackInactiveDecl& d : model_.back_inactive_decls) {
        if (d.sub == class_name) to_deactivate.insert(d.ancestor);
    }
    for (const std::string& cls : to_deactivate) {
        const Membership* m = world.latest(object, cls);
        if (!m || m->status != MembershipStatus::Active) continue;
        Event e;
        e.kind = EventKind::SetStatus;
        e.object = object;
        e.class_name = cls;
        e.generation = m->generation;
        e.status = MembershipStatus::Inactive;
        e.role = cause.role;
        e.process = cause.process;
        emit(world, e);
    }

    Membership entered = *world.latest(object, class_name);
    if (options_.auto_close_loops) {
        if (const LoopDecl* loop = model_.find_loop(class_name)) close_loop_impl(world, object, *loop, cause);
    }
    return entered;
}

Membership Engine::close_loop_impl(WorldState& world, ObjectId object, const LoopDecl& loop, const Cause& cause) const {
    require_privilege(cause.role, loop.start_class, Privilege::Create);
    if (!world.is_active(object, loop.end_class)) {
        throw EngineError(ErrorCode::EffectRejected, "object is not active in loop end " + loop.end_class);
    }

    std::optional<MembershipRef> super_link;
    for (const auto& [super, mode] : direct_supers(model_, loop.start_class)) {
        const Membership* m = world.latest(object, super);
        if (!m) continue;
        if (!super_link || m->status == MembershipStatus::Active) super_link = MembershipRef{super, m->generation};
        if (m->status == MembershipStatus::Active) break;
    }

    // Memberships strictly between the loop start and end are archived.
    std::set<std::string> between;
    for (const std::string& a : ancestors(model_, loop.end_class)) {
        if (a != loop.start_class && ancestors(model_, a).contains(loop.start_class)) between.insert(a);
    }
    for (const std::string& cls : between) {
        const Membership* m = world.latest(object, cls);
        if (!m || m->status != MembershipStatus::Active) continue;
        Event e;
        e.kind = EventKind::SetStatus;
        e.object = object;
        e.class_name = cls;
        e.generation = m->generation;
        e.status = MembershipStatus::Inactive;
        e.role = cause.role;
        e.process = cause.process;
        emit(world, e);
    }
    return enter_class(world, object, loop.start_class, std::move(super_link), true, cause, {});
}

ObjectId Engine::create_impl(WorldState& world, std::string_view class_name, const Cause& cause,
                             const EdTargets& ed_targets, std::optional<ObjectId> super_object) const {
    require_class(class_name);
    require_privilege(cause.role, class_name, Privilege::Create);
    auto supers = direct_supers(model_, class_name);

    if (supers.empty()) {
        if (super_object) {
            throw EngineError(ErrorCode::InvalidArgument,
                              std::string(class_name) + " is a root class and takes no super object");
        }
        ObjectId id{world.next_object};
        auto links = resolve_ed_links(world, id, class_name, ed_targets);
        if (options_.auto_close_loops) check_loop_chain(class_name, cause.role);
        Event e;
        e.kind = EventKind::CreateObject;
        e.object = id;
        e.class_name = std::string(class_name);
        e.generation = 1;
        e.role = cause.role;
        e.process = cause.process;
        emit(world, e);
        for (const EdInstance& link : links) {
            Event l;
            l.kind = EventKind::LinkEd;
            l.object = id;
            l.class_name = link.source_class;
            l.target = link.target;
            l.target_class = link.target_class;
            l.role = cause.role;
            l.process = cause.process;
            emit(world, l);
        }
        return id;
    }

    if (!super_object) {
        throw EngineError(ErrorCode::MissingSuper,
                          std::string(class_name) + " is a sub-class; creation needs an existing super object");
    }
    require_object(world, *super_object);
    if (world.is_active(*super_object, class_name)) {
        throw EngineError(ErrorCode::EffectRejected, "object #" + std::to_string(super_object->value) +
                                                         " is already active in " + std::string(class_name));
    }
    for (const auto& [super, mode] : supers) {
        if (!world.is_active(*super_object, super)) continue;
        auto links = resolve_ed_links(world, *super_object, class_name, ed_targets);
        enter_class(world, *super_object, class_name, MembershipRef{super, world.latest(*super_object, super)->generation},
                    false, cause, links);
        return *super_object;
    }
    throw EngineError(ErrorCode::MissingSuper, "object #" + std::to_string(super_object->value) +
                                                   " has no active membership in a direct super-class of " +
                                                   std::string(class_name));
}

Membership Engine::migrate_impl(WorldState& world, ObjectId object, std::string_view target_class,
                                const Cause& cause, const EdTargets& ed_targets) const {
    require_object(world, object);
    require_class(target_class);
    require_privilege(cause.role, target_class, Privilege::Create);
    if (world.is_active(object, target_class)) {
        throw EngineError(ErrorCode::EffectRejected, "object #" + std::to_string(object.value) +
                                                         " is already active in " + std::string(target_class));
    }
    for (const auto& [super, mode] : direct_supers(model_, target_class)) {
        if (!world.is_active(object, super)) continue;
        auto links = resolve_ed_links(world, object, target_class, ed_targets);
        return enter_class(world, object, target_class, MembershipRef{super, world.latest(object, super)->generation},
                           false, cause, links);
    }
    if (const LoopDecl* loop = pending_loop(world, object, target_class)) {
        if (!ed_targets.empty()) throw EngineError(ErrorCode::InvalidArgument, "closing a loop takes no ED targets");
        if (options_.auto_close_loops) check_loop_chain(target_class, cause.role);
        return close_loop_impl(world, object, *loop, cause);
    }
    throw EngineError(ErrorCode::EffectRejected, "object #" + std::to_string(object.value) +
                                                     " has no active membership in a direct super-class of " +
                                                     std::string(target_class));
}

ObjectId Engine::create_object(WorldState& world, std::string_view class_name, std::string_view role,
                               const EdTargets& ed_targets, std::optional<ObjectId> super_object) const {
    return create_impl(world, class_name, Cause{std::string(role), {}}, ed_targets, super_object);
}

Membership Engine::migrate(WorldState& world, ObjectId object, std::string_view target_class, std::string_view role,
                           const EdTargets& ed_targets) const {
    return migrate_impl(world, object, target_class, Cause{std::string(role), {}}, ed_targets);
}

Membership Engine::close_loop(WorldState& world, ObjectId object, std::string_view end_class,
                              std::string_view role) const {
    require_object(world, object);
    require_class(end_class);
    const LoopDecl* loop = model_.find_loop(end_class);
    if (!loop) {
        throw EngineError(ErrorCode::NoLoopDeclared, "no loop is declared with end class " + std::string(end_class));
    }
    require_privilege(role, loop->start_class, Privilege::Create);
    if (pending_loop(world, object, loop->start_class) != loop) {
        throw EngineError(ErrorCode::EffectRejected, "object #" + std::to_string(object.value) +
                                                         " did not just enter " + std::string(end_class));
    }
    if (options_.auto_close_loops) check_loop_chain(loop->start_class, role);
    return close_loop_impl(world, object, *loop, Cause{std::string(role), {}});
}

bool Engine::same_ancestor(const WorldState& world, ObjectId first, ObjectId second,
                           std::string_view ancestor_class) const {
    auto reach = [&](ObjectId start) {
        std::set<ObjectId> seen{start};
        std::deque<ObjectId> work{start};
        while (!work.empty()) {
            ObjectId current = work.front();
            work.pop_front();
            for (const EdInstance& i : world.ed_instances) {
                if (i.dependent == current && seen.insert(i.target).second) work.push_back(i.target);
            }
        }
        std::set<ObjectId> members;
        for (ObjectId o : seen) {
            if (world.latest(o, ancestor_class)) members.insert(o);
        }
        return members;
    };
    auto a = reach(first);
    auto b = reach(second);
    return std::ranges::any_of(a, [&](ObjectId o) { return b.contains(o); });
}

ExecutionOutcome Engine::execute_process(WorldState& world, std::string_view process_name, std::string_view role,
                                         const std::map<std::string, ObjectId>& bindings) const {
    const ProcessDef* process = model_.find_process(process_name);
    if (!process) throw EngineError(ErrorCode::UnknownName, "unknown process '" + std::string(process_name) + "'");
    require_role(role);

    ExecutionOutcome outcome;
    auto fail = [&](ExecutionStatus status, std::string message) {
        outcome.status = status;
        outcome.created.clear();
        outcome.migrated.clear();
        outcome.messages.push_back(std::move(message));
        return outcome;
    };

    // A process nobody is responsible for is automatic: any role may trigger it.
    bool automatic = std::ranges::none_of(model_.responsibilities,
                                          [&](const Responsibility& r) { return r.process == process->name; });
    if (!automatic && !model_.is_responsible(role, process->name)) {
        return fail(ExecutionStatus::NotResponsible,
                    "role " + std::string(role) + " is not responsible for " + process->name);
    }
    for (const auto& [cls, object] : bindings) {
        if (!process->inputs.contains(cls)) {
            return fail(ExecutionStatus::PreconditionFailed, cls + " is not an input class of " + process->name);
        }
        if (!world.exists(object) || !world.latest(object, cls)) {
            return fail(ExecutionStatus::PreconditionFailed,
                        "object #" + std::to_string(object.value) + " has no membership in " + cls);
        }
        if (!model_.has_grant(role, cls, Privilege::Query)) {
            return fail(ExecutionStatus::PrivilegeDenied,
                        "role " + std::string(role) + " has no query privilege on input " + cls);
        }
    }

    WorldState scratch = world;
    std::map<std::string, ObjectId> produced;
    auto current_bindings = [&](const std::set<std::string>& keys) {
        BindingSet set;
        for (const std::string& cls : keys) {
            Binding b;
            if (auto p = produced.find(cls); p != produced.end()) {
                b.object = p->second;
            } else if (auto in = bindings.find(cls); in != bindings.end()) {
                b.object = in->second;
            }
            b.active = b.object && scratch.is_active(*b.object, cls);
            set.emplace(cls, b);
        }
        return set;
    };
    AncestorResolver resolver = [&](ObjectId a, ObjectId b, const std::string& ancestor) {
        return same_ancestor(scratch, a, b, ancestor);
    };

    if (process->precondition && !eval_condition(*process->precondition, current_bindings(process->inputs))) {
        return fail(ExecutionStatus::PreconditionFailed, "precondition of " + process->name + " does not hold");
    }

    std::set<std::string> scope = process->inputs;
    scope.insert(process->outputs.begin(), process->outputs.end());
    const Cause cause{std::string(role), process->name};

    for (const Effect& effect : process->effects) {
        BindingSet visible = current_bindings(scope);
        if (effect.guard && !eval_condition(*effect.guard, visible, resolver)) continue;

        std::optional<ObjectId> source;
        if (effect.source_binding) {
            auto it = visible.find(*effect.source_binding);
            if (it == visible.end() || !it->second.object) {
                return fail(ExecutionStatus::EffectRejected,
                            "effect on " + effect.target_class + ": binding " + *effect.source_binding + " is unbound");
            }
            source = it->second.object;
        }

        // ED targets come from whatever is bound to the ED target class.
        EdTargets ed_targets;
        for (const EdLink& l : model_.ed_links) {
            if (l.source != effect.target_class) continue;
            auto it = visible.find(l.target);
            if (it == visible.end() || !it->second.object) continue;
            bool linked = source && std::ranges::any_of(scratch.ed_instances, [&](const EdInstance& i) {
                return i.dependent == *source && i.source_class == l.source && i.target_class == l.target;
            });
            if (!linked) ed_targets.emplace(l.target, *it->second.object);
        }

        try {
            if (effect.kind == EffectKind::Create) {
                ObjectId id = create_impl(scratch, effect.target_class, cause, ed_targets, source);
                produced[effect.target_class] = id;
                outcome.created.push_back(*scratch.latest(id, effect.target_class));
            } else {
                Membership m = migrate_impl(scratch, *source, effect.target_class, cause, ed_targets);
                produced[effect.target_class] = *source;
                outcome.migrated.push_back(std::move(m));
            }
        } catch (const EngineError& err) {
            auto status = err.code() == ErrorCode::PrivilegeDenied ? ExecutionStatus::PrivilegeDenied
                                                                   : ExecutionStatus::EffectRejected;
            return fail(status, std::string(to_string(effect.kind)) + " " + effect.target_class + ": " + err.what());
        }
    }

    if (process->postcondition && !eval_condition(*process->postcondition, current_bindings(process->outputs))) {
        return fail(ExecutionStatus::PostconditionFailed,
                    "postcondition of " + process->name + " does not hold; execution rolled back");
    }

    Event done;
    done.kind = EventKind::ProcessExecuted;
    done.role = std::string(role);
    done.process = process->name;
    emit(scratch, done);
    world = std::move(scratch);
    return outcome;
}

void Engine::modify_attribute(WorldState& world, ObjectId object, std::string_view class_name,
                              std::string_view attribute, std::string value, std::string_view role) const {
    require_object(world, object);
    require_class(class_name);
    const Membership* m = world.latest(object, class_name);
    if (!m) {
        throw EngineError(ErrorCode::UnknownMembership, "object #" + std::to_string(object.value) +
                                                            " is not a member of " + std::string(class_name));
    }
    require_privilege(role, class_name, Privilege::Modify);
    if (m->status != MembershipStatus::Active) {
        throw EngineError(ErrorCode::InactiveMembership, "object #" + std::to_string(object.value) +
                                                             " is inactive in " + std::string(class_name) +
                                                             " and cannot be updated");
    }
    auto view = qualified_access_view(model_, class_name);
    auto it = std::ranges::find(view.attributes, attribute, &QualifiedName::member);
    if (it == view.attributes.end()) {
        throw EngineError(ErrorCode::AttributeNotVisible, std::string(attribute) + " is not in the access-view of " +
                                                              std::string(class_name));
    }
    Event e;
    e.kind = EventKind::SetAttribute;
    e.object = object;
    e.class_name = std::string(class_name);
    e.generation = m->generation;
    e.attribute = std::string(attribute);
    e.attribute_owner = it->class_name;
    e.value = std::move(value);
    e.role = std::string(role);
    emit(world, e);
}

QuerySnapshot Engine::query_object(WorldState& world, ObjectId object, std::string_view class_name,
                                   std::string_view role) const {
    require_object(world, object);
    require_class(class_name);
    const Membership* m = world.latest(object, class_name);
    if (!m) {
        throw EngineError(ErrorCode::UnknownMembership, "object #" + std::to_string(object.value) +
                                                            " is not a member of " + std::string(class_name));
    }
    require_privilege(role, class_name, Privilege::Query);

    QuerySnapshot snap{object, std::string(class_name), m->generation, m->status, {}};
    for (const QualifiedName& q : qualified_access_view(model_, class_name).attributes) {
        auto it = world.attributes.find({object, q.class_name, q.member});
        snap.values.emplace_back(q.member, it == world.attributes.end() ? std::nullopt : std::optional(it->second));
    }
    Event e;
    e.kind = EventKind::Query;
    e.object = object;
    e.class_name = std::string(class_name);
    e.generation = m->generation;
    e.role = std::string(role);
    emit(world, e);
    return snap;
}

void Engine::delete_object(WorldState& world, ObjectId object, std::string_view role) const {
    require_object(world, object);
    const Membership* first = nullptr;
    for (const Membership* m : world.memberships_of(object)) {
        if (!first || m->created_at < first->created_at) first = m;
    }
    require_privilege(role, first->class_name, Privilege::Delete);
    for (const EdInstance& i : world.ed_instances) {
        if (i.target == object && world.exists(i.dependent)) {
            throw EngineError(ErrorCode::HasDependents, "object #" + std::to_string(object.value) +
                                                            " is an ED target of object #" +
                                                            std::to_string(i.dependent.value));
        }
    }
    Event e;
    e.kind = EventKind::DeleteObject;
    e.object = object;
    e.class_name = first->class_name;
    e.role = std::string(role);
    emit(world, e);
}

}  // namespace iasdo
