#include "json.hpp"

#include "iasdo/runtime.hpp"

namespace iasdo {

using nlohmann::json;

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::CreateObject:    return "create_object";
        case EventKind::EnterClass:      return "enter_class";
        case EventKind::SetStatus:       return "set_status";
        case EventKind::LinkEd:          return "link_ed";
        case EventKind::SetAttribute:    return "set_attribute";
        case EventKind::Query:           return "query";
        case EventKind::DeleteObject:    return "delete_object";
        case EventKind::ProcessExecuted: return "process_executed";
    }
    return "?";
}

namespace {

constexpr EventKind kAllKinds[] = {EventKind::CreateObject, EventKind::EnterClass,   EventKind::SetStatus,
                                   EventKind::LinkEd,       EventKind::SetAttribute, EventKind::Query,
                                   EventKind::DeleteObject, EventKind::ProcessExecuted};

EventKind kind_from(const std::string& text) {
    for (EventKind k : kAllKinds) {
        if (to_string(k) == text) return k;
    }
    throw std::invalid_argument("unknown event kind '" + text + "'");
}

json ref_json(const std::optional<MembershipRef>& ref) {
    if (!ref) return nullptr;
    return {{"class", ref->class_name}, {"generation", ref->generation}};
}

json event_json(const Event& e) {
    return {{"seq", e.seq},
            {"kind", std::string(to_string(e.kind))},
            {"object", e.object.value},
            {"class", e.class_name},
            {"generation", e.generation},
            {"role", e.role},
            {"process", e.process},
            {"super", ref_json(e.super_link)},
            {"via_loop", e.via_loop},
            {"status", std::string(to_string(e.status))},
            {"target", e.target.value},
            {"target_class", e.target_class},
            {"attribute", e.attribute},
            {"attribute_owner", e.attribute_owner},
            {"value", e.value}};
}

Event event_from(const json& j) {
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.kind = kind_from(j.at("kind").get<std::string>());
    e.object.value = j.at("object").get<std::uint64_t>();
    e.class_name = j.at("class").get<std::string>();
    e.generation = j.at("generation").get<std::uint32_t>();
    e.role = j.at("role").get<std::string>();
    e.process = j.at("process").get<std::string>();
    if (const json& s = j.at("super"); !s.is_null()) {
        e.super_link = MembershipRef{s.at("class").get<std::string>(), s.at("generation").get<std::uint32_t>()};
    }
    e.via_loop = j.at("via_loop").get<bool>();
    e.status = j.at("status").get<std::string>() == "active" ? MembershipStatus::Active : MembershipStatus::Inactive;
    e.target.value = j.at("target").get<std::uint64_t>();
    e.target_class = j.at("target_class").get<std::string>();
    e.attribute = j.at("attribute").get<std::string>();
    e.attribute_owner = j.at("attribute_owner").get<std::string>();
    e.value = j.at("value").get<std::string>();
    return e;
}

}  // namespace

std::string world_to_json(const WorldState& world) {
    json memberships = json::array();
    for (const Membership& m : world.memberships) {
        memberships.push_back({{"object", m.object.value},
                               {"class", m.class_name},
                               {"generation", m.generation},
                               {"status", std::string(to_string(m.status))},
                               {"super", ref_json(m.super_link)},
                               {"created_at", m.created_at}});
    }
    json ed = json::array();
    for (const EdInstance& i : world.ed_instances) {
        ed.push_back({{"dependent", i.dependent.value},
                      {"target", i.target.value},
                      {"source_class", i.source_class},
                      {"target_class", i.target_class}});
    }
    json attributes = json::array();
    for (const auto& [key, value] : world.attributes) {
        attributes.push_back(
            {{"object", key.object.value}, {"class", key.class_name}, {"attribute", key.attribute}, {"value", value}});
    }
    json deleted = json::array();
    for (ObjectId id : world.deleted) deleted.push_back(id.value);
    json events = json::array();
    for (const Event& e : world.events) events.push_back(event_json(e));

    json doc = {{"clock", world.clock},
                {"next_object", world.next_object},
                {"memberships", std::move(memberships)},
                {"ed_instances", std::move(ed)},
                {"attributes", std::move(attributes)},
                {"deleted", std::move(deleted)},
                {"events", std::move(events)}};
    return doc.dump();
}

std::vector<Event> events_from_json(std::string_view text) {
    json doc = json::parse(text);
    const json& list = doc.is_array() ? doc : doc.at("events");
    std::vector<Event> out;
    for (const json& j : list) out.push_back(event_from(j));
    return out;
}

std::uint64_t state_hash(const WorldState& world) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : world_to_json(world)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace iasdo
