#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "tdroute/types.hpp"

namespace tdroute {

/// Ordered frontier keyed by label. Nodes with equal keys ("cousins") share
/// one bucket and are extracted together; buckets keep insertion order.
///
/// insert / decrease_key / extract cost one ordered-map lookup each; moving a
/// node between buckets is O(1) via an intrusive list.
class PriorityStore {
 public:
  struct Group {
    Seconds key = 0;
    std::vector<NodeId> nodes;
  };

  explicit PriorityStore(std::size_t node_count);

  bool empty() const noexcept { return size_ == 0; }
  std::size_t size() const noexcept { return size_; }
  bool contains(NodeId v) const { return key_[v] != kAbsent; }
  Seconds key(NodeId v) const { return key_[v]; }

  /// Throws ContractViolation if `v` is already present.
  void insert(NodeId v, Seconds key);
  /// Throws ContractViolation if `v` is absent or new_key >= its key.
  void decrease_key(NodeId v, Seconds new_key);

  /// Removes the whole minimum-key group. Throws EmptyStore.
  Group extract_min_group();
  /// As above, writing the group into `out` (cleared first); returns the key.
  Seconds extract_min_group(std::vector<NodeId>& out);

  Seconds min_key() const;

 private:
  struct Bucket {
    NodeId head = kNoNode;
    NodeId tail = kNoNode;
  };
  static constexpr Seconds kAbsent = -1;

  void link_into(NodeId v, Seconds key);
  void unlink(NodeId v);

  std::map<Seconds, Bucket> buckets_;
  std::vector<Seconds> key_;
  std::vector<NodeId> prev_, next_;
  std::size_t size_ = 0;
};

}  // namespace tdroute
