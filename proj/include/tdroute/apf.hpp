#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "tdroute/network.hpp"
#include "tdroute/time_domain.hpp"
#include "tdroute/types.hpp"

namespace tdroute {

struct ApfConfig {
  const Tid* tid = nullptr;
  // Upper bound on table slots scanned by one through-time query.
  std::uint64_t max_slots = 2 * kDefaultTableSize;

  Seconds chi() const { return tid->chi(); }
};

// Two full revolutions of the largest table.
inline std::uint64_t default_max_slots(std::size_t table_size) { return 2 * static_cast<std::uint64_t>(table_size); }

enum class ApfOutcome { Completed, Interrupted };

/// Result of piecing one link length through the per-slot velocities.
///
/// A traversal is split into up to three parts: the tail of the departure
/// interval (`first_m`), `kappa` whole intervals (`pieced_m`), and the
/// terminating piece (`ending_m`) whose duration is ceil(ending_m * chi /
/// ending_v) seconds, recorded as q and r with ending_m * chi = q * ending_v + r.
struct ThroughTime {
  ApfOutcome outcome = ApfOutcome::Completed;
  Seconds delta = 0;
  std::uint64_t kappa = 0;
  std::uint64_t slot_queries = 0;
  Grade final_grade = 0;

  Meters first_m = 0;
  Meters pieced_m = 0;
  Meters ending_m = 0;
  Meters ending_v = 0;
  Meters q = 0;
  Meters r = 0;
  // True when the link is left in the departure interval itself.
  bool ends_in_first = false;

  bool completed() const noexcept { return outcome == ApfOutcome::Completed; }
};

/// Through-time of `link` for a vehicle departing at `t`. The table is read
/// at t + perturb_offset; the returned delta is measured from t.
ThroughTime through_time(const Link& link, Seconds t, const TimeTable& table, const ApfConfig& cfg,
                         Seconds perturb_offset = 0);

/// t + delta, or nullopt when the query is interrupted.
std::optional<Seconds> arrival_time(const Link& link, Seconds t, const TimeTable& table, const ApfConfig& cfg,
                                    Seconds perturb_offset = 0);

/// arrival(t) <= arrival(t_prime) for t <= t_prime. An interrupted side
/// makes the check vacuously true.
bool check_fifo(const Link& link, Seconds t, Seconds t_prime, const TimeTable& table, const ApfConfig& cfg,
                Seconds perturb_offset = 0);

/// Link cost as seen by a search: the binding picks the table and the
/// perturbation offset. `link_map` translates the ids of a sub-network
/// (a hot zone) back to the ids of the network the binding was built for.
class TravelCost {
 public:
  /// Throws ConfigError if a table's chi differs from the TID's or a table
  /// holds a grade the TID does not cover.
  TravelCost(const TimeTableBinding& binding, const ApfConfig& cfg, std::span<const LinkId> link_map = {});

  ThroughTime evaluate(const Link& link, Seconds t) const {
    const LinkId global = link_map_.empty() ? link.id : link_map_[link.id];
    const TimeTable& table = binding_->table_for(global);
    return through_time(link, t, table, *cfg_, perturbed_query_time(t, link, *binding_) - t);
  }

  const TimeTableBinding& binding() const noexcept { return *binding_; }
  const ApfConfig& config() const noexcept { return *cfg_; }
  std::span<const LinkId> link_map() const noexcept { return link_map_; }

 private:
  const TimeTableBinding* binding_;
  const ApfConfig* cfg_;
  std::span<const LinkId> link_map_;
};

}  // namespace tdroute
