#include "tdroute/priority_store.hpp"

#include <string>

#include "tdroute/error.hpp"

namespace tdroute {

PriorityStore::PriorityStore(std::size_t node_count)
    : key_(node_count, kAbsent), prev_(node_count, kNoNode), next_(node_count, kNoNode) {}

void PriorityStore::link_into(NodeId v, Seconds key) {
  Bucket& b = buckets_[key];
  prev_[v] = b.tail;
  next_[v] = kNoNode;
  if (b.tail == kNoNode) {
    b.head = v;
  } else {
    next_[b.tail] = v;
  }
  b.tail = v;
  key_[v] = key;
}

void PriorityStore::unlink(NodeId v) {
  auto it = buckets_.find(key_[v]);
  Bucket& b = it->second;
  if (prev_[v] == kNoNode) {
    b.head = next_[v];
  } else {
    next_[prev_[v]] = next_[v];
  }
  if (next_[v] == kNoNode) {
    b.tail = prev_[v];
  } else {
    prev_[next_[v]] = prev_[v];
  }
  if (b.head == kNoNode) buckets_.erase(it);
  prev_[v] = next_[v] = kNoNode;
  key_[v] = kAbsent;
}

void PriorityStore::insert(NodeId v, Seconds key) {
  if (v >= key_.size()) throw ContractViolation("node " + std::to_string(v) + " out of range");
  if (key < 0) throw ContractViolation("negative key");
  if (contains(v)) throw ContractViolation("node " + std::to_string(v) + " already in store");
  link_into(v, key);
  ++size_;
}

void PriorityStore::decrease_key(NodeId v, Seconds new_key) {
  if (v >= key_.size() || !contains(v)) throw ContractViolation("decrease_key on absent node");
  if (new_key >= key_[v] || new_key < 0) {
    throw ContractViolation("decrease_key to " + std::to_string(new_key) + " from " + std::to_string(key_[v]));
  }
  unlink(v);
  link_into(v, new_key);
}

Seconds PriorityStore::extract_min_group(std::vector<NodeId>& out) {
  if (empty()) throw EmptyStore();
  out.clear();
  auto it = buckets_.begin();
  const Seconds key = it->first;
  for (NodeId v = it->second.head; v != kNoNode;) {
    const NodeId following = next_[v];
    out.push_back(v);
    key_[v] = kAbsent;
    prev_[v] = next_[v] = kNoNode;
    v = following;
  }
  buckets_.erase(it);
  size_ -= out.size();
  return key;
}

PriorityStore::Group PriorityStore::extract_min_group() {
  Group g;
  g.key = extract_min_group(g.nodes);
  return g;
}

Seconds PriorityStore::min_key() const {
  if (empty()) throw EmptyStore();
  return buckets_.begin()->first;
}

}  // namespace tdroute
