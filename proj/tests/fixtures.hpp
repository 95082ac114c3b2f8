#pragma once

#include <memory>
#include <optional>

#include "tdroute/apf.hpp"
#include "tdroute/network.hpp"
#include "tdroute/time_domain.hpp"

namespace tdroute::testing {

// Network, tables and cost wired together. Held by pointer because
// TravelCost keeps references into the binding and config.
struct Instance {
  RoadNetwork net;
  Tid tid;
  ApfConfig cfg;
  TimeTableBinding binding;
  std::optional<TravelCost> cost;

  Instance(RoadNetwork n, TimeTableBinding b, Seconds chi = 10)
      : net(std::move(n)), tid(Tid::build(chi)), binding(std::move(b)) {
    cfg.tid = &tid;
    cfg.max_slots = default_max_slots(binding.max_table_size());
    cost.emplace(binding, cfg);
  }
  Instance(const Instance&) = delete;
  Instance& operator=(const Instance&) = delete;
};

inline std::unique_ptr<Instance> shared_instance(std::uint32_t k, TableMode mode, std::uint64_t seed,
                                                 std::size_t slots = kDefaultTableSize, bool perturb = true,
                                                 Seconds chi = 10) {
  return std::make_unique<Instance>(generate_grid(k, seed),
                                    TimeTableBinding::shared(generate_table(mode, slots, seed + 1, false, chi), perturb),
                                    chi);
}

// Constant grade everywhere: time-dependence vanishes. A one-slot table
// would cap M at 2, so the bound is lifted.
inline std::unique_ptr<Instance> flat_instance(RoadNetwork net, Grade grade, Seconds chi = 10) {
  auto inst = std::make_unique<Instance>(std::move(net), TimeTableBinding::shared(TimeTable{{grade}, chi}), chi);
  inst->cfg.max_slots = 1 << 16;
  return inst;
}

}  // namespace tdroute::testing
