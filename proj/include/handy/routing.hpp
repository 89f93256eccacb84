// Per-node routing state shared by both reactive substrates: a sequence
// numbered next-hop table with route lifetimes, and a bounded duplicate
// suppression cache for flooded requests.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "handy/types.hpp"

namespace handy {

class RoutingTable {
  public:
    explicit RoutingTable(double lifetime = 300.0);

    // Accepts the entry when it is strictly fresher (higher sequence
    // number), equally fresh but shorter, or the stored route is expired or
    // invalid. An accepted entry restarts the lifetime. Returns acceptance.
    bool update(const RouteEntry& entry, double now);

    // Valid, unexpired route or nullptr.
    const RouteEntry* find(NodeId destination, double now) const;

    // Restarts the lifetime of an existing route; forwarding counts as use.
    void markUse(NodeId destination, double now);

    void invalidate(NodeId destination);

    void addPrecursor(NodeId destination, NodeId precursor);

    // All rows, expired ones included, ascending destination.
    std::vector<RouteEntry> snapshot() const;

    size_t size() const { return rows_.size(); }

  private:
    struct Row {
        RouteEntry entry;
        double expires = 0.0;
    };

    double lifetime_;
    std::map<NodeId, Row> rows_;
};

// Remembers the last `capacity` keys, FIFO eviction.
class DedupCache {
  public:
    explicit DedupCache(size_t capacity = 128);

    // True when the key was already present; inserts it otherwise.
    bool checkAndInsert(uint64_t hi, uint64_t lo);

    size_t size() const { return keys_.size(); }

  private:
    size_t capacity_;
    std::deque<std::pair<uint64_t, uint64_t>> order_;
    std::set<std::pair<uint64_t, uint64_t>> keys_;
};

}  // namespace handy
