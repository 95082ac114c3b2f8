#pragma once

#include <cstdint>
#include <limits>

namespace tdroute {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;
using Seconds = std::int64_t;
using Meters = std::int64_t;
// Index into VelocityGrades; 0 is the zero-velocity (waiting) grade.
using Grade = std::uint8_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr LinkId kNoLink = std::numeric_limits<LinkId>::max();
inline constexpr Seconds kUnreached = std::numeric_limits<Seconds>::max();

}  // namespace tdroute
