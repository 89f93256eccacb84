#include "handy/service_cache.hpp"

#include <stdexcept>

namespace handy {

ServiceCache::ServiceCache(size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("cache capacity must be positive");
}

void ServiceCache::insertLocal(ServiceTableEntry entry) {
    entry.locally_hosted = true;
    entry.last_used_tick = 0.0;
    entry.touch_seq = ++touch_counter_;
    table_[entry.service_id] = std::move(entry);
}

ServiceCache::MergeOutcome ServiceCache::merge(const ServiceTableEntry& entry,
                                               double now) {
    MergeOutcome outcome;
    auto it = table_.find(entry.service_id);
    if (it != table_.end()) {
        if (it->second.locally_hosted) return outcome;
        ServiceTableEntry& stored = it->second;
        stored.name = entry.name;
        stored.provider = entry.provider;
        stored.concept_id = entry.concept_id;
        stored.input_interface = entry.input_interface;
        stored.output_interface = entry.output_interface;
        stored.ontology_list = entry.ontology_list;
        stored.qos = entry.qos;
        return outcome;
    }
    ServiceTableEntry fresh = entry;
    fresh.locally_hosted = false;
    fresh.last_used_tick = now;
    fresh.touch_seq = ++touch_counter_;
    table_[fresh.service_id] = std::move(fresh);
    outcome.inserted = true;
    evictIfNeeded(outcome.evicted);
    return outcome;
}

void ServiceCache::touch(ServiceId id, double now) {
    auto it = table_.find(id);
    if (it == table_.end()) return;
    it->second.last_used_tick = now;
    it->second.touch_seq = ++touch_counter_;
}

const ServiceTableEntry* ServiceCache::find(ServiceId id) const {
    auto it = table_.find(id);
    return it == table_.end() ? nullptr : &it->second;
}

std::vector<const ServiceTableEntry*> ServiceCache::entries() const {
    std::vector<const ServiceTableEntry*> out;
    out.reserve(table_.size());
    for (const auto& [id, entry] : table_) out.push_back(&entry);
    return out;
}

size_t ServiceCache::remoteCount() const {
    size_t n = 0;
    for (const auto& [id, entry] : table_)
        if (!entry.locally_hosted) ++n;
    return n;
}

void ServiceCache::evictIfNeeded(std::vector<ServiceId>& evicted) {
    while (remoteCount() > capacity_) {
        auto victim = table_.end();
        for (auto it = table_.begin(); it != table_.end(); ++it) {
            if (it->second.locally_hosted) continue;
            if (victim == table_.end() ||
                it->second.last_used_tick < victim->second.last_used_tick ||
                (it->second.last_used_tick == victim->second.last_used_tick &&
                 it->second.touch_seq < victim->second.touch_seq))
                victim = it;
        }
        evicted.push_back(victim->first);
        table_.erase(victim);
    }
}

}  // namespace handy
