#include "handy/mining.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace handy {
namespace {

std::vector<std::vector<ServiceId>> dedupSessions(
    const std::vector<std::vector<ServiceId>>& sessions) {
    std::vector<std::vector<ServiceId>> out;
    out.reserve(sessions.size());
    for (const auto& s : sessions) {
        if (s.empty()) continue;
        std::vector<ServiceId> t = s;
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        out.push_back(std::move(t));
    }
    return out;
}

void computePairCorrelation(const std::vector<std::vector<ServiceId>>& deduped,
                            MiningResults& results) {
    std::map<ServiceId, uint32_t> single;
    std::map<std::pair<ServiceId, ServiceId>, uint32_t> pairs;
    for (const auto& s : deduped) {
        for (ServiceId a : s) ++single[a];
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t j = i + 1; j < s.size(); ++j) ++pairs[{s[i], s[j]}];
    }
    for (const auto& [key, count] : pairs) {
        uint32_t floor = std::min(single[key.first], single[key.second]);
        results.pair_correlation[key] =
            static_cast<double>(count) / static_cast<double>(floor);
    }
    results.single_support = std::move(single);
}

// ---- tree miner ----------------------------------------------------------

struct FpNode {
    ServiceId item = 0;
    uint32_t count = 0;
    FpNode* parent = nullptr;
    FpNode* next_same_item = nullptr;
    std::vector<std::unique_ptr<FpNode>> children;

    FpNode* childFor(ServiceId id) {
        for (auto& c : children)
            if (c->item == id) return c.get();
        return nullptr;
    }
};

struct HeaderRow {
    uint32_t support = 0;
    FpNode* chain = nullptr;
};

struct FpTree {
    FpNode root;
    // Ordered map keeps iteration deterministic.
    std::map<ServiceId, HeaderRow> header;
};

using WeightedTx = std::pair<std::vector<ServiceId>, uint32_t>;

// Transactions arrive deduped. Items below min_support are dropped; the
// rest are inserted most-frequent first (ties by ascending id) so shared
// prefixes collapse.
std::unique_ptr<FpTree> buildTree(const std::vector<WeightedTx>& txs,
                                  uint32_t min_support) {
    std::map<ServiceId, uint32_t> counts;
    for (const auto& [items, weight] : txs)
        for (ServiceId id : items) counts[id] += weight;

    auto tree = std::make_unique<FpTree>();
    for (const auto& [id, c] : counts)
        if (c >= min_support) tree->header[id].support = c;
    if (tree->header.empty()) return tree;

    auto rank = [&](ServiceId a, ServiceId b) {
        uint32_t ca = counts[a];
        uint32_t cb = counts[b];
        return ca != cb ? ca > cb : a < b;
    };

    for (const auto& [items, weight] : txs) {
        std::vector<ServiceId> kept;
        for (ServiceId id : items)
            if (tree->header.count(id)) kept.push_back(id);
        if (kept.empty()) continue;
        std::sort(kept.begin(), kept.end(), rank);

        FpNode* at = &tree->root;
        for (ServiceId id : kept) {
            FpNode* child = at->childFor(id);
            if (!child) {
                auto fresh = std::make_unique<FpNode>();
                fresh->item = id;
                fresh->parent = at;
                HeaderRow& row = tree->header[id];
                fresh->next_same_item = row.chain;
                row.chain = fresh.get();
                child = fresh.get();
                at->children.push_back(std::move(fresh));
            }
            child->count += weight;
            at = child;
        }
    }
    return tree;
}

void growTree(const FpTree& tree, uint32_t min_support,
              std::vector<ServiceId>& suffix,
              std::map<std::vector<ServiceId>, uint32_t>& out) {
    for (const auto& [item, row] : tree.header) {
        std::vector<ServiceId> found = suffix;
        found.push_back(item);
        std::sort(found.begin(), found.end());
        out[found] = row.support;

        std::vector<WeightedTx> conditional;
        for (FpNode* node = row.chain; node; node = node->next_same_item) {
            std::vector<ServiceId> path;
            for (FpNode* up = node->parent; up && up->parent; up = up->parent)
                path.push_back(up->item);
            if (!path.empty()) {
                std::sort(path.begin(), path.end());
                conditional.emplace_back(std::move(path), node->count);
            }
        }
        if (conditional.empty()) continue;

        auto sub = buildTree(conditional, min_support);
        if (sub->header.empty()) continue;
        suffix.push_back(item);
        growTree(*sub, min_support, suffix, out);
        suffix.pop_back();
    }
}

// ---- reference miner -----------------------------------------------------

uint32_t scanSupport(const std::vector<std::vector<ServiceId>>& deduped,
                     const std::vector<ServiceId>& itemset) {
    uint32_t hits = 0;
    for (const auto& s : deduped)
        if (std::includes(s.begin(), s.end(), itemset.begin(), itemset.end())) ++hits;
    return hits;
}

void enumerate(const std::vector<std::vector<ServiceId>>& deduped,
               const std::vector<ServiceId>& universe, size_t first,
               std::vector<ServiceId>& prefix, uint32_t min_support,
               std::map<std::vector<ServiceId>, uint32_t>& out) {
    for (size_t i = first; i < universe.size(); ++i) {
        prefix.push_back(universe[i]);
        uint32_t support = scanSupport(deduped, prefix);
        if (support >= min_support) {
            out[prefix] = support;
            enumerate(deduped, universe, i + 1, prefix, min_support, out);
        }
        prefix.pop_back();
    }
}

}  // namespace

double MiningResults::correlation(ServiceId a, ServiceId b) const {
    if (a == b) return single_support.count(a) ? 1.0 : 0.0;
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = pair_correlation.find(key);
    return it == pair_correlation.end() ? 0.0 : it->second;
}

std::vector<ServiceId> MiningResults::getRelated(ServiceId s) const {
    std::vector<std::pair<double, ServiceId>> hits;
    for (const auto& [key, rho] : pair_correlation) {
        ServiceId other;
        if (key.first == s)
            other = key.second;
        else if (key.second == s)
            other = key.first;
        else
            continue;
        if (rho > epsilon) hits.emplace_back(rho, other);
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<ServiceId> out;
    out.reserve(hits.size());
    for (const auto& [rho, id] : hits) out.push_back(id);
    return out;
}

uint32_t MiningResults::supportOf(std::vector<ServiceId> itemset) const {
    std::sort(itemset.begin(), itemset.end());
    auto it = frequent_itemsets.find(itemset);
    return it == frequent_itemsets.end() ? 0 : it->second;
}

size_t MiningResults::countOfSize(size_t k) const {
    size_t n = 0;
    for (const auto& [items, support] : frequent_itemsets)
        if (items.size() == k) ++n;
    return n;
}

size_t MiningResults::maxItemsetSize() const {
    size_t best = 0;
    for (const auto& [items, support] : frequent_itemsets)
        best = std::max(best, items.size());
    return best;
}

MiningResults mineFpGrowth(const std::vector<std::vector<ServiceId>>& sessions,
                           uint32_t min_support, double epsilon) {
    if (min_support == 0) throw std::invalid_argument("min_support must be positive");
    MiningResults results;
    results.min_support = min_support;
    results.epsilon = epsilon;

    auto deduped = dedupSessions(sessions);
    computePairCorrelation(deduped, results);

    std::vector<WeightedTx> txs;
    txs.reserve(deduped.size());
    for (auto& s : deduped) txs.emplace_back(std::move(s), 1u);

    auto tree = buildTree(txs, min_support);
    std::vector<ServiceId> suffix;
    growTree(*tree, min_support, suffix, results.frequent_itemsets);
    return results;
}

MiningResults mineBruteForce(const std::vector<std::vector<ServiceId>>& sessions,
                             uint32_t min_support, double epsilon) {
    if (min_support == 0) throw std::invalid_argument("min_support must be positive");
    MiningResults results;
    results.min_support = min_support;
    results.epsilon = epsilon;

    auto deduped = dedupSessions(sessions);
    computePairCorrelation(deduped, results);

    std::vector<ServiceId> universe;
    for (const auto& s : deduped) universe.insert(universe.end(), s.begin(), s.end());
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());

    std::vector<ServiceId> prefix;
    enumerate(deduped, universe, 0, prefix, min_support, results.frequent_itemsets);
    return results;
}

}  // namespace handy
