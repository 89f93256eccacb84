#include "handy/workload.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace handy {

std::vector<ServiceId> uniformSession(size_t len, uint32_t service_count, Rng& rng) {
    if (len > service_count)
        throw std::invalid_argument("session longer than the service universe");
    std::vector<ServiceId> ids(service_count);
    for (uint32_t i = 0; i < service_count; ++i) ids[i] = i + 1;
    for (size_t i = 0; i < len; ++i) {
        size_t j = i + rng.uniformU32(static_cast<uint32_t>(service_count - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(len);
    return ids;
}

std::vector<ServiceId> walkSession(size_t len, const CorrelationMatrix& matrix,
                                   Rng& rng) {
    auto n = static_cast<uint32_t>(matrix.serviceCount());
    if (len > n) throw std::invalid_argument("session longer than the service universe");
    std::vector<ServiceId> picked;
    std::set<ServiceId> taken;
    ServiceId first = 1 + rng.uniformU32(n);
    picked.push_back(first);
    taken.insert(first);
    while (picked.size() < len) {
        std::set<ServiceId> frontier;
        for (ServiceId s : picked)
            for (ServiceId p : matrix.neighbors(s))
                if (!taken.count(p)) frontier.insert(p);
        ServiceId next;
        if (!frontier.empty()) {
            std::vector<ServiceId> pool(frontier.begin(), frontier.end());
            next = pool[rng.uniformU32(static_cast<uint32_t>(pool.size()))];
        } else {
            std::vector<ServiceId> pool;
            for (ServiceId s = 1; s <= n; ++s)
                if (!taken.count(s)) pool.push_back(s);
            next = pool[rng.uniformU32(static_cast<uint32_t>(pool.size()))];
        }
        picked.push_back(next);
        taken.insert(next);
    }
    return picked;
}

std::vector<std::vector<ServiceId>> generateSessions(size_t count, uint32_t len_min,
                                                     uint32_t len_max,
                                                     uint32_t service_count,
                                                     const CorrelationMatrix* matrix,
                                                     Rng& rng) {
    if (len_min < 1 || len_max < len_min)
        throw std::invalid_argument("bad session length range");
    std::vector<std::vector<ServiceId>> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        uint32_t len = std::min(rng.uniformInt(len_min, len_max), service_count);
        out.push_back(matrix ? walkSession(len, *matrix, rng)
                             : uniformSession(len, service_count, rng));
    }
    return out;
}

WorkloadPlan generateWorkload(const SimConfig& cfg, const CorrelationMatrix* matrix,
                              Rng& rng) {
    if (cfg.workload != WorkloadKind::Random && matrix == nullptr)
        throw std::invalid_argument("correlated workloads need a matrix");
    if (matrix && matrix->serviceCount() != cfg.service_count)
        throw std::invalid_argument("matrix size does not match service count");

    WorkloadPlan plan;
    double intra_hi = std::max(1.5, cfg.zeta / 2.0);
    for (NodeId node = 0; node < cfg.node_count; ++node) {
        double t = rng.uniformReal(0.0, 2.0 * cfg.zeta);
        while (t < cfg.sim_time) {
            uint32_t len = std::min(rng.uniformInt(cfg.session_len_min, cfg.session_len_max),
                                    cfg.service_count);
            std::vector<ServiceId> items =
                matrix ? walkSession(len, *matrix, rng)
                       : uniformSession(len, cfg.service_count, rng);
            for (size_t i = 0; i < items.size() && t < cfg.sim_time; ++i) {
                plan.requests.push_back({t, node, items[i]});
                if (i + 1 < items.size()) t += rng.uniformReal(1.0, intra_hi);
            }
            t += rng.uniformReal(1.5 * cfg.zeta, 3.0 * cfg.zeta);
        }
    }
    std::stable_sort(plan.requests.begin(), plan.requests.end(),
                     [](const WorkloadRequest& a, const WorkloadRequest& b) {
                         return a.time < b.time;
                     });
    return plan;
}

}  // namespace handy
