#include "handy/routing.hpp"

#include <algorithm>
#include <stdexcept>

namespace handy {

RoutingTable::RoutingTable(double lifetime) : lifetime_(lifetime) {
    if (lifetime_ <= 0.0) throw std::invalid_argument("route lifetime must be positive");
}

bool RoutingTable::update(const RouteEntry& entry, double now) {
    if (entry.destination == kNoNode)
        throw std::invalid_argument("route needs a destination");
    auto it = rows_.find(entry.destination);
    bool accept;
    if (it == rows_.end()) {
        accept = true;
    } else {
        const Row& row = it->second;
        bool stale = now >= row.expires || row.entry.status == RouteStatus::Invalid;
        bool same_seq = entry.sequence_number == row.entry.sequence_number;
        // A byte-identical repeat (periodic advertisement of an unchanged
        // route) acts as a keep-alive rather than being rejected as no better.
        bool keep_alive = same_seq && entry.hop_count == row.entry.hop_count &&
                          entry.next_node == row.entry.next_node;
        accept = stale || entry.sequence_number > row.entry.sequence_number ||
                 (same_seq && entry.hop_count < row.entry.hop_count) || keep_alive;
    }
    if (!accept) return false;
    Row fresh;
    fresh.entry = entry;
    fresh.entry.status = RouteStatus::Valid;
    fresh.expires = now + lifetime_;
    if (it == rows_.end())
        rows_.emplace(entry.destination, std::move(fresh));
    else
        it->second = std::move(fresh);
    return true;
}

const RouteEntry* RoutingTable::find(NodeId destination, double now) const {
    auto it = rows_.find(destination);
    if (it == rows_.end()) return nullptr;
    const Row& row = it->second;
    if (row.entry.status != RouteStatus::Valid || now >= row.expires) return nullptr;
    return &row.entry;
}

void RoutingTable::markUse(NodeId destination, double now) {
    auto it = rows_.find(destination);
    if (it != rows_.end()) it->second.expires = std::max(it->second.expires, now + lifetime_);
}

void RoutingTable::invalidate(NodeId destination) {
    auto it = rows_.find(destination);
    if (it != rows_.end()) it->second.entry.status = RouteStatus::Invalid;
}

void RoutingTable::addPrecursor(NodeId destination, NodeId precursor) {
    auto it = rows_.find(destination);
    if (it == rows_.end()) return;
    auto& list = it->second.entry.precursors;
    auto at = std::lower_bound(list.begin(), list.end(), precursor);
    if (at == list.end() || *at != precursor) list.insert(at, precursor);
}

std::vector<RouteEntry> RoutingTable::snapshot() const {
    std::vector<RouteEntry> out;
    out.reserve(rows_.size());
    for (const auto& [dest, row] : rows_) out.push_back(row.entry);
    return out;
}

DedupCache::DedupCache(size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("dedup capacity must be positive");
}

bool DedupCache::checkAndInsert(uint64_t hi, uint64_t lo) {
    std::pair<uint64_t, uint64_t> key{hi, lo};
    if (keys_.count(key)) return true;
    if (keys_.size() == capacity_) {
        keys_.erase(order_.front());
        order_.pop_front();
    }
    keys_.insert(key);
    order_.push_back(key);
    return false;
}

}  // namespace handy
