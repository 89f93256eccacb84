// Request workload generation: per-node session chains whose items come
// either from independent uniform draws or from a walk over a correlation
// matrix.
#pragma once

#include <vector>

#include "handy/correlation_matrix.hpp"
#include "handy/rng.hpp"
#include "handy/sim_config.hpp"
#include "handy/types.hpp"

namespace handy {

struct WorkloadRequest {
    double time = 0.0;
    NodeId requester = kNoNode;
    ServiceId target = 0;
};

struct WorkloadPlan {
    std::vector<WorkloadRequest> requests;  // nondecreasing time
};

// `len` distinct services drawn uniformly from 1..service_count.
std::vector<ServiceId> uniformSession(size_t len, uint32_t service_count, Rng& rng);

// First item uniform; each further item drawn uniformly from the untaken
// correlation partners of everything picked so far, falling back to a
// uniform untaken draw when no partner is left.
std::vector<ServiceId> walkSession(size_t len, const CorrelationMatrix& matrix,
                                   Rng& rng);

// Standalone session dataset, lengths uniform in [len_min, len_max] clamped
// to the service count. matrix == nullptr means uniform sessions.
std::vector<std::vector<ServiceId>> generateSessions(size_t count, uint32_t len_min,
                                                     uint32_t len_max,
                                                     uint32_t service_count,
                                                     const CorrelationMatrix* matrix,
                                                     Rng& rng);

// Full plan for a run. Intra-session gaps stay below the session threshold,
// inter-session gaps above it, so a node's own log re-derives the sessions.
// matrix is required for the correlated and youtube workloads.
WorkloadPlan generateWorkload(const SimConfig& cfg, const CorrelationMatrix* matrix,
                              Rng& rng);

}  // namespace handy
