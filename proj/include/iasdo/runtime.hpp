#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iasdo/condition.hpp"
#include "iasdo/model.hpp"
#include "iasdo/object_id.hpp"

namespace iasdo {

enum class MembershipStatus { Active, Inactive };

std::string_view to_string(MembershipStatus status);

struct MembershipRef {
    std::string class_name;
    std::uint32_t generation = 1;

    auto operator<=>(const MembershipRef&) const = default;
};

// One episode of an object in a class. A looped object re-enters a class with
// the next generation; earlier generations stay as history.
struct Membership {
    ObjectId object;
    std::string class_name;
    std::uint32_t generation = 1;
    MembershipStatus status = MembershipStatus::Active;
    std::optional<MembershipRef> super_link;  // super membership of the same object
    std::uint64_t created_at = 0;             // logical timestamp (event sequence number)

    bool operator==(const Membership&) const = default;
};

struct EdInstance {
    ObjectId dependent;
    ObjectId target;
    std::string source_class;
    std::string target_class;

    bool operator==(const EdInstance&) const = default;
};

struct AttributeKey {
    ObjectId object;
    std::string class_name;  // declaring class of the attribute
    std::string attribute;

    auto operator<=>(const AttributeKey&) const = default;
};

enum class EventKind { CreateObject, EnterClass, SetStatus, LinkEd, SetAttribute, Query, DeleteObject, ProcessExecuted };

std::string_view to_string(EventKind kind);

// Primitive state change. Every mutation of a WorldState goes through
// apply_event, so folding a log over an empty world rebuilds the world.
struct Event {
    std::uint64_t seq = 0;
    EventKind kind = EventKind::CreateObject;
    ObjectId object;
    std::string class_name;
    std::uint32_t generation = 0;
    std::string role;
    std::string process;  // empty outside process execution

    std::optional<MembershipRef> super_link;                 // EnterClass
    bool via_loop = false;                                   // EnterClass
    MembershipStatus status = MembershipStatus::Active;      // SetStatus
    ObjectId target;                                         // LinkEd
    std::string target_class;                                // LinkEd
    std::string attribute;                                   // SetAttribute
    std::string attribute_owner;                             // SetAttribute
    std::string value;                                       // SetAttribute

    bool operator==(const Event&) const = default;
};

struct WorldState {
    std::vector<Membership> memberships;  // creation order
    std::vector<EdInstance> ed_instances;
    std::map<AttributeKey, std::string> attributes;
    std::vector<Event> events;  // append-only
    std::set<ObjectId> deleted;
    std::uint64_t clock = 0;
    std::uint64_t next_object = 1;

    // Highest generation of `object` in `class_name`.
    const Membership* latest(ObjectId object, std::string_view class_name) const;
    bool is_active(ObjectId object, std::string_view class_name) const;
    bool exists(ObjectId object) const;
    std::vector<const Membership*> memberships_of(ObjectId object) const;

    bool operator==(const WorldState&) const = default;
};

void apply_event(WorldState& world, const Event& event);
WorldState replay(const std::vector<Event>& events);

// Canonical JSON snapshot: memberships, ED instances, attribute values, event log.
std::string world_to_json(const WorldState& world);
std::vector<Event> events_from_json(std::string_view text);
// FNV-1a over the canonical snapshot.
std::uint64_t state_hash(const WorldState& world);

enum class ErrorCode {
    PrivilegeDenied,
    NotResponsible,
    EffectRejected,
    InactiveMembership,
    UnknownObject,
    UnknownMembership,
    UnknownName,
    MissingEdTarget,
    MissingSuper,
    AttributeNotVisible,
    NoLoopDeclared,
    HasDependents,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class EngineError : public std::runtime_error {
public:
    EngineError(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

enum class ExecutionStatus {
    Ok,
    PreconditionFailed,
    PostconditionFailed,
    PrivilegeDenied,
    NotResponsible,
    EffectRejected,
};

std::string_view to_string(ExecutionStatus status);

struct ExecutionOutcome {
    ExecutionStatus status = ExecutionStatus::Ok;
    std::vector<Membership> created;
    std::vector<Membership> migrated;
    std::vector<std::string> messages;
};

struct QuerySnapshot {
    ObjectId object;
    std::string class_name;
    std::uint32_t generation = 1;
    MembershipStatus status = MembershipStatus::Active;
    std::vector<std::pair<std::string, std::optional<std::string>>> values;
};

struct TraceEntry {
    std::string class_name;
    std::uint32_t generation = 1;
    std::uint64_t created_at = 0;
    std::string role;
    std::string process;
    bool via_loop = false;
    std::vector<std::pair<std::uint64_t, MembershipStatus>> transitions;
};

// Chronological membership history of an object, rebuilt from the event log.
// Throws EngineError(UnknownObject) when the log never mentions it.
std::vector<TraceEntry> trace(const WorldState& world, ObjectId object);

struct EngineOptions {
    // Entering a loop end class immediately re-creates the object in the loop start.
    bool auto_close_loops = true;
};

using EdTargets = std::map<std::string, ObjectId>;

// Executes a validated model against a WorldState. The engine keeps its own copy
// of the model; a WorldState belongs to one caller at a time.
//
// Every operation either succeeds and appends events, or throws EngineError (or
// reports a failing ExecutionOutcome) and leaves the world untouched.
class Engine {
public:
    // Throws ModelError when the model does not validate without errors.
    explicit Engine(ModelSpec model, EngineOptions options = {});

    const ModelSpec& model() const { return model_; }

    // Root class: starts a new object. Sub-class: `super_object` gains a membership
    // in `class_name` and is returned.
    ObjectId create_object(WorldState& world, std::string_view class_name, std::string_view role,
                           const EdTargets& ed_targets = {}, std::optional<ObjectId> super_object = {}) const;

    Membership migrate(WorldState& world, ObjectId object, std::string_view target_class, std::string_view role,
                       const EdTargets& ed_targets = {}) const;

    Membership close_loop(WorldState& world, ObjectId object, std::string_view end_class, std::string_view role) const;

    ExecutionOutcome execute_process(WorldState& world, std::string_view process, std::string_view role,
                                     const std::map<std::string, ObjectId>& bindings) const;

    void modify_attribute(WorldState& world, ObjectId object, std::string_view class_name, std::string_view attribute,
                          std::string value, std::string_view role) const;

    QuerySnapshot query_object(WorldState& world, ObjectId object, std::string_view class_name,
                               std::string_view role) const;

    // Needs delete privilege on the object's root class and no ED dependents.
    void delete_object(WorldState& world, ObjectId object, std::string_view role) const;

    // True iff the ED closures of both objects contain a common object of `ancestor_class`.
    bool same_ancestor(const WorldState& world, ObjectId first, ObjectId second, std::string_view ancestor_class) const;

private:
    struct Cause {
        std::string role;
        std::string process;
    };

    void require_role(std::string_view role) const;
    void require_privilege(std::string_view role, std::string_view class_name, Privilege privilege) const;
    void require_class(std::string_view class_name) const;
    void require_object(const WorldState& world, ObjectId object) const;
    std::vector<EdInstance> resolve_ed_links(const WorldState& world, ObjectId object, std::string_view class_name,
                                             const EdTargets& ed_targets) const;
    void check_loop_chain(std::string_view class_name, std::string_view role) const;
    const LoopDecl* pending_loop(const WorldState& world, ObjectId object, std::string_view start_class) const;

    ObjectId create_impl(WorldState& world, std::string_view class_name, const Cause& cause,
                         const EdTargets& ed_targets, std::optional<ObjectId> super_object) const;
    Membership migrate_impl(WorldState& world, ObjectId object, std::string_view target_class, const Cause& cause,
                            const EdTargets& ed_targets) const;
    Membership close_loop_impl(WorldState& world, ObjectId object, const LoopDecl& loop, const Cause& cause) const;
    Membership enter_class(WorldState& world, ObjectId object, std::string_view class_name,
                           std::optional<MembershipRef> super_link, bool via_loop, const Cause& cause,
                           const std::vector<EdInstance>& ed_links) const;
    void emit(WorldState& world, Event event) const;

    ModelSpec model_;
    EngineOptions options_;
};

}  // namespace iasdo
