#pragma once

#include <cstddef>
#include <cstdint>

namespace slicesim {

using NodeId = std::uint32_t;
using SliceId = std::uint64_t;
using FlowId = std::uint64_t;
using TenantIndex = std::size_t;

// Processing units. Signed so that adaptation deltas share the type.
using Units = std::int64_t;

constexpr double kSecondsPerHour = 3600.0;

} // namespace slicesim
