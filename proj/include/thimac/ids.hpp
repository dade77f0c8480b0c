#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace thimac {

/// Dense, tag-typed index. Ids are assigned sequentially by the owning
/// container and are never reused.
template <class Tag>
struct Id {
    std::uint32_t value = 0;

    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(Id, Id) = default;
    friend std::ostream& operator<<(std::ostream& os, Id id) { return os << id.value; }
};

using MachineId = Id<struct MachineTag>;
using StageId = Id<struct StageTag>;
using FlowId = Id<struct FlowTag>;
using TriggerId = Id<struct TriggerTag>;
using StorageId = Id<struct StorageTag>;
using EventId = Id<struct EventTag>;
using InstanceId = Id<struct InstanceTag>;

}  // namespace thimac

template <class Tag>
struct std::hash<thimac::Id<Tag>> {
    std::size_t operator()(thimac::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
