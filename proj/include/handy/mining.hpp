// Frequent-itemset mining over request sessions and the pairwise
// correlation measure built on top of it.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "handy/types.hpp"

namespace handy {

// Support is counted per session: an itemset's support is the number of
// sessions containing every one of its items, repeats within a session
// ignored. Pair correlation is the co-occurrence count divided by the
// smaller of the two single supports; it is computed from the raw sessions
// and is not limited by the support threshold.
struct MiningResults {
    uint32_t min_support = 1;
    double epsilon = 0.5;

    // Keys are sorted ascending. Values are session support counts.
    std::map<std::vector<ServiceId>, uint32_t> frequent_itemsets;

    // Keyed with first < second.
    std::map<std::pair<ServiceId, ServiceId>, double> pair_correlation;

    // Session count per service, every service seen at least once.
    std::map<ServiceId, uint32_t> single_support;

    double correlation(ServiceId a, ServiceId b) const;

    // Services whose correlation with `s` exceeds epsilon, strongest first,
    // ties broken by ascending id.
    std::vector<ServiceId> getRelated(ServiceId s) const;

    uint32_t supportOf(std::vector<ServiceId> itemset) const;
    size_t countOfSize(size_t k) const;
    size_t maxItemsetSize() const;
};

MiningResults mineFpGrowth(const std::vector<std::vector<ServiceId>>& sessions,
                           uint32_t min_support, double epsilon);

// Reference miner: depth-first enumeration in ascending id order, pruned
// only by downward closure, support counted by scanning every session.
// Slower than the tree miner but shares no code with it.
MiningResults mineBruteForce(const std::vector<std::vector<ServiceId>>& sessions,
                             uint32_t min_support, double epsilon);

}  // namespace handy
