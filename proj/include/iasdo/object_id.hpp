#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace iasdo {

// Runtime object identity. Assigned monotonically, never reused within a world.
struct ObjectId {
    std::uint64_t value = 0;

    auto operator<=>(const ObjectId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, ObjectId id) { return os << '#' << id.value; }

}  // namespace iasdo
