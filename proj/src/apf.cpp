#include "tdroute/apf.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "tdroute/error.hpp"

namespace tdroute {

ThroughTime through_time(const Link& link, Seconds t, const TimeTable& table, const ApfConfig& cfg,
                         Seconds perturb_offset) {
  if (t < 0 || t + perturb_offset < 0) throw ContractViolation("departure time must be non-negative");
  const Tid& tid = *cfg.tid;
  const Seconds chi = tid.chi();
  const Seconds query = t + perturb_offset;
  auto slot = static_cast<std::uint64_t>(query / chi);
  const Seconds s = query % chi;
  Meters e = link.length_m;

  ThroughTime out;
  auto read = [&](std::uint64_t index) -> std::optional<Grade> {
    if (out.slot_queries >= cfg.max_slots) return std::nullopt;
    ++out.slot_queries;
    return velocity_at(table, index);
  };
  auto interrupted = [&] {
    out.outcome = ApfOutcome::Interrupted;
    out.delta = 0;
    return out;
  };

  Seconds head = 0;
  if (s > 0) {
    const auto g = read(slot);
    if (!g) return interrupted();
    const Meters reach = tid.cell(chi - s, *g);
    if (e <= reach) {
      // Leaves the link before (or exactly at) the end of the departure interval.
      const Meters v = tid.per_interval(*g);
      out.ends_in_first = true;
      out.final_grade = *g;
      out.ending_m = e;
      out.ending_v = v;
      out.q = e * chi / v;
      out.r = e * chi % v;
      out.delta = std::clamp<Seconds>(out.q + (out.r > 0 ? 1 : 0), 1, chi - s);
      return out;
    }
    e -= reach;
    out.first_m = reach;
    head = chi - s;
    ++slot;
  }

  Meters v = 0;
  Grade g = 0;
  for (;;) {
    const auto read_grade = read(slot);
    if (!read_grade) return interrupted();
    g = *read_grade;
    v = tid.per_interval(g);
    if (e <= v) break;
    e -= v;
    out.pieced_m += v;
    ++out.kappa;
    ++slot;
  }
  assert(v > 0 && e > 0);

  out.final_grade = g;
  out.ending_m = e;
  out.ending_v = v;
  out.q = e * chi / v;
  out.r = e * chi % v;
  out.delta = head + static_cast<Seconds>(out.kappa) * chi + out.q + (out.r > 0 ? 1 : 0);
  return out;
}

std::optional<Seconds> arrival_time(const Link& link, Seconds t, const TimeTable& table, const ApfConfig& cfg,
                                    Seconds perturb_offset) {
  const ThroughTime tt = through_time(link, t, table, cfg, perturb_offset);
  if (!tt.completed()) return std::nullopt;
  return t + tt.delta;
}

bool check_fifo(const Link& link, Seconds t, Seconds t_prime, const TimeTable& table, const ApfConfig& cfg,
                Seconds perturb_offset) {
  if (t > t_prime) throw ContractViolation("check_fifo requires t <= t_prime");
  const auto a = arrival_time(link, t, table, cfg, perturb_offset);
  const auto b = arrival_time(link, t_prime, table, cfg, perturb_offset);
  if (!a || !b) return true;
  return *a <= *b;
}

TravelCost::TravelCost(const TimeTableBinding& binding, const ApfConfig& cfg, std::span<const LinkId> link_map)
    : binding_(&binding), cfg_(&cfg), link_map_(link_map) {
  if (cfg.tid == nullptr) throw ConfigError("APF config has no TID");
  if (cfg.max_slots < 1) throw ConfigError("max_slots must be at least 1");
  auto check = [&](const TimeTable& table) {
    if (table.chi != cfg.tid->chi()) {
      throw ConfigError("table chi " + std::to_string(table.chi) + " differs from TID chi " +
                        std::to_string(cfg.tid->chi()));
    }
    if (cfg.tid->grade_count() >= kVelocityGradeCount) return;
    for (Grade g : table.slots) {
      if (g > cfg.tid->grade_count()) throw ConfigError("table grade " + std::to_string(g) + " not covered by TID");
    }
  };
  if (binding.mode() == TimeTableBinding::Mode::Shared) {
    check(*binding.shared_table());
  } else {
    for (const auto& table : binding.per_link_tables()) check(table);
  }
}

}  // namespace tdroute
