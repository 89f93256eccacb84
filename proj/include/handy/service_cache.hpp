// Per-node service table: locally hosted rows plus an LRU-bounded set of
// learned remote rows.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "handy/types.hpp"

namespace handy {

// Remote entries compete for `capacity` slots and are evicted least recently
// used. Locally hosted entries never count against capacity and are never
// evicted. Recency is the (last_used_tick, touch_seq) pair; refreshing an
// already known entry does not count as use.
class ServiceCache {
  public:
    explicit ServiceCache(size_t capacity = 8);

    void insertLocal(ServiceTableEntry entry);

    struct MergeOutcome {
        bool inserted = false;
        std::vector<ServiceId> evicted;
    };

    // Insert a learned entry stamped with `now`, or refresh the stored copy
    // in place.
    MergeOutcome merge(const ServiceTableEntry& entry, double now);

    void touch(ServiceId id, double now);

    const ServiceTableEntry* find(ServiceId id) const;
    bool contains(ServiceId id) const { return find(id) != nullptr; }

    // Ascending service id.
    std::vector<const ServiceTableEntry*> entries() const;

    size_t size() const { return table_.size(); }
    size_t remoteCount() const;
    size_t capacity() const { return capacity_; }

  private:
    void evictIfNeeded(std::vector<ServiceId>& evicted);

    size_t capacity_;
    uint64_t touch_counter_ = 0;
    std::map<ServiceId, ServiceTableEntry> table_;
};

}  // namespace handy
