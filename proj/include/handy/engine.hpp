// Deterministic discrete-event simulator tying the protocol pieces
// together: radio, mobility, energy, caches, routing, mining and the
// ontology machinery.
#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "handy/correlation_matrix.hpp"
#include "handy/energy.hpp"
#include "handy/messages.hpp"
#include "handy/metrics.hpp"
#include "handy/mining.hpp"
#include "handy/mobility.hpp"
#include "handy/ontology.hpp"
#include "handy/routing.hpp"
#include "handy/service_cache.hpp"
#include "handy/session_log.hpp"
#include "handy/sim_config.hpp"
#include "handy/workload.hpp"

namespace handy {

// Test override: connectivity is exactly this undirected link set and every
// node sits still. Propagation uses a nominal half-range distance.
struct ExplicitTopology {
    std::vector<std::pair<NodeId, NodeId>> links;
};

// How a remote service entry got into a cache.
enum class StoreOrigin { Advertisement, Reply, Piggyback };

const char* toString(StoreOrigin);

// Observation hooks. Default implementations ignore everything.
class TraceSink {
  public:
    virtual ~TraceSink() = default;
    virtual void onTransmit(double, NodeId, const Message&, size_t) {}
    virtual void onDeliver(double, NodeId, NodeId, const Message&) {}
    virtual void onRequestIssued(double, NodeId, uint64_t, ServiceId) {}
    virtual void onRequestResolved(double, NodeId, uint64_t, ServiceId, bool,
                                   double) {}
    virtual void onRequestFailed(double, NodeId, uint64_t, ServiceId) {}
    virtual void onRequestServed(double, NodeId, ServiceId, NodeId) {}
    virtual void onPiggyback(double, NodeId, ServiceId, ServiceId, double) {}
    virtual void onCacheStore(double, NodeId, ServiceId, StoreOrigin) {}
    virtual void onCacheEvict(double, NodeId, ServiceId) {}
    virtual void onOntologyLoaded(double, NodeId, const std::string&) {}
};

// Renders every hook as one text line; used for golden traces and --trace.
class TextTraceSink : public TraceSink {
  public:
    explicit TextTraceSink(std::ostream& out) : out_(out) {}
    void onTransmit(double t, NodeId from, const Message& m, size_t bytes) override;
    void onDeliver(double t, NodeId from, NodeId to, const Message& m) override;
    void onRequestIssued(double t, NodeId n, uint64_t rid, ServiceId s) override;
    void onRequestResolved(double t, NodeId n, uint64_t rid, ServiceId s, bool local,
                           double latency) override;
    void onRequestFailed(double t, NodeId n, uint64_t rid, ServiceId s) override;
    void onRequestServed(double t, NodeId n, ServiceId s, NodeId consumer) override;
    void onPiggyback(double t, NodeId n, ServiceId req, ServiceId extra,
                     double rho) override;
    void onCacheStore(double t, NodeId n, ServiceId s, StoreOrigin via) override;
    void onCacheEvict(double t, NodeId n, ServiceId s) override;
    void onOntologyLoaded(double t, NodeId n, const std::string& uri) override;

  private:
    std::ostream& out_;
};

class Simulation {
  public:
    explicit Simulation(SimConfig cfg);
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    // All setters must be called before run().
    void setExplicitTopology(ExplicitTopology topo);
    void setManualWorkload(std::vector<WorkloadRequest> requests);
    void setTraceSink(TraceSink* sink);

    // Pins each service's provider (index = service id - 1) instead of
    // drawing placements from the seed.
    void setProviderOverride(std::vector<NodeId> providers);

    // Runs to completion; callable once.
    RunMetrics run();

    // Post-run inspection.
    const SimConfig& config() const { return cfg_; }
    const ServiceCache& cacheOf(NodeId n) const;
    const RoutingTable& routesOf(NodeId n) const;
    const OntologyStore& ontologyOf(NodeId n) const;
    const LogDatabase& logOf(NodeId n) const;
    const std::vector<ServiceTableEntry>& registry() const { return registry_; }

  private:
    struct NodeState;
    struct Event;
    struct EventOrder;

    struct PendingRequest {
        uint64_t id = 0;
        bool is_fetch = false;
        ServiceId target = 0;
        ServiceDescription wanted;
        QoSSpec qos;
        std::string fetch_uri;
        double issued_at = 0.0;
        uint32_t retries_left = 0;
        uint64_t session_id = 0;
        uint64_t timeout_token = 0;
        uint32_t fetch_wait = 0;   // outstanding ontology fetches gating this request
        bool fetch_failed = false; // at least one of them gave up
    };

    struct ParkedRequest {
        SReqMessage msg;
        NodeId from = kNoNode;
        double parked_at = 0.0;
    };

    struct FetchState {
        uint64_t fetch_request_id = 0;
        std::vector<uint64_t> user_waiters;
        std::vector<uint64_t> parked_waiters;
    };

    // setup
    void buildRegistry();
    void seedOntologies();
    void scheduleInitialEvents();

    // event helpers
    void schedule(double t, Event ev);
    Point positionOf(const NodeState& n, double t) const;
    std::vector<NodeId> receiversOf(const NodeState& sender, double t) const;
    void transmit(NodeState& sender, std::shared_ptr<const Message> msg,
                  NodeId unicast_to, double t);
    double inferDelay(const NodeState& n) const;
    void ensureMined(NodeState& n);
    std::vector<OntologyRecord> recordsFor(const NodeState& n,
                                           const std::string& concept_id,
                                           bool with_document) const;
    RouteEntry routeToProvider(NodeState& n, const ServiceTableEntry& e, double t,
                               bool bump_own_seq);
    void loadAttachedDocuments(NodeState& n, const std::vector<OntologyRecord>& recs,
                               double t);
    void mergeIntoCache(NodeState& n, const ServiceTableEntry& e, double t,
                        StoreOrigin via);

    // protocol
    void issueRequest(const WorkloadRequest& wr, double t);
    void localDecide(NodeState& n, uint64_t rid, double t);
    void goRemote(NodeState& n, uint64_t rid, double t);
    // Returns false when the document is already present and no fetch is needed.
    bool startFetch(NodeState& n, const std::string& uri,
                    std::optional<uint64_t> user_waiter,
                    std::optional<uint64_t> parked_waiter, double t);
    void finishFetch(NodeState& n, const std::string& uri, bool success, double t);
    void resolvePending(NodeState& n, uint64_t rid, bool local, double t);
    void failPending(NodeState& n, uint64_t rid, double t);
    void onTimeout(NodeState& n, uint64_t rid, uint64_t token, double t);
    void onAdvTick(NodeState& n, double t);
    void onReceive(NodeState& n, NodeId from, const Message& msg, double t);
    void onAdvertisement(NodeState& n, const SAdvMessage& m, NodeId from, double t);
    void onRequestMsg(NodeState& n, const SReqMessage& m, NodeId from, double t);
    void onReplyMsg(NodeState& n, const SRepMessage& m, NodeId from, double t);
    void replyToRequest(NodeState& n, const SReqMessage& m,
                        const ServiceTableEntry& matched, double t);
    void forwardRequest(NodeState& n, const SReqMessage& m, double t);
    void rematchParked(NodeState& n, uint64_t parked_id, double t);

    void finalize(RunMetrics& out);

    SimConfig cfg_;
    std::vector<std::unique_ptr<NodeState>> nodes_;
    std::vector<ServiceTableEntry> registry_;
    std::map<std::string, std::string> concept_doc_;  // concept -> document uri
    std::vector<OntologyDocument> all_docs_;          // core first
    std::optional<ExplicitTopology> topo_;
    std::vector<std::vector<NodeId>> adjacency_;      // explicit topology only
    std::optional<std::vector<WorkloadRequest>> manual_workload_;
    std::optional<std::vector<NodeId>> provider_override_;
    std::optional<CorrelationMatrix> workload_matrix_;
    TraceSink* sink_ = nullptr;

    std::priority_queue<Event, std::vector<Event>, EventOrder>* queue_ = nullptr;
    double now_ = 0.0;
    bool ran_ = false;

    uint64_t next_event_seq_ = 0;
    uint64_t next_message_id_ = 1;
    uint64_t next_session_id_ = 1;
    uint64_t next_request_id_ = 1;
    uint64_t next_parked_id_ = 1;

    // running tallies
    RunMetrics metrics_;
    double latency_sum_ = 0.0;
};

}  // namespace handy
