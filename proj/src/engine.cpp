#include "handy/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <variant>

#include "handy/taxonomy_fixture.hpp"
#include "handy/wire.hpp"

namespace handy {
namespace {

constexpr double kPropagationSpeed = 3.0e8;  // meters per second

// Synthetic service ids for fetchable taxonomy documents; kept far above any
// workload service id so the two ranges can never collide.
constexpr ServiceId kDocServiceBase = 0x40000000;

const char* typeTag(const Message& m) {
    switch (messageTypeOf(m)) {
        case MessageType::SADV: return "SADV";
        case MessageType::SREQ: return "SREQ";
        case MessageType::SREP: return "SREP";
    }
    return "?";
}

uint64_t messageIdOf(const Message& m) {
    return std::visit([](const auto& v) { return v.message_id; }, m);
}

// Strips per-node bookkeeping before an entry goes onto the wire.
ServiceTableEntry cleaned(const ServiceTableEntry& e) {
    ServiceTableEntry c = e;
    c.last_used_tick = 0.0;
    c.touch_seq = 0;
    c.locally_hosted = false;
    return c;
}

double distanceBetween(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

OntologyRecord recordFromDocument(const OntologyDocument& doc, bool with_document) {
    OntologyRecord rec;
    rec.name = doc.name;
    rec.uri = doc.uri;
    rec.author = doc.author;
    rec.base_ontology = doc.base_uri;
    if (with_document) rec.document = doc;
    return rec;
}

}  // namespace

// ---------------------------------------------------------------------------
// TextTraceSink

void TextTraceSink::onTransmit(double t, NodeId from, const Message& m, size_t bytes) {
    out_ << formatDouble(t) << " tx node=" << from << " type=" << typeTag(m)
         << " id=" << messageIdOf(m) << " bytes=" << bytes << '\n';
}

void TextTraceSink::onDeliver(double t, NodeId from, NodeId to, const Message& m) {
    out_ << formatDouble(t) << " rx from=" << from << " to=" << to
         << " type=" << typeTag(m) << " id=" << messageIdOf(m);
    if (const auto* q = std::get_if<SReqMessage>(&m))
        out_ << " session=" << q->session_id;
    else if (const auto* p = std::get_if<SRepMessage>(&m))
        out_ << " session=" << p->session_id;
    out_ << '\n';
}

void TextTraceSink::onRequestIssued(double t, NodeId n, uint64_t rid, ServiceId s) {
    out_ << formatDouble(t) << " issue node=" << n << " req=" << rid << " svc=" << s
         << '\n';
}

void TextTraceSink::onRequestResolved(double t, NodeId n, uint64_t rid, ServiceId s,
                                      bool local, double latency) {
    out_ << formatDouble(t) << " resolve node=" << n << " req=" << rid << " svc=" << s
         << " local=" << (local ? 1 : 0) << " latency=" << formatDouble(latency)
         << '\n';
}

void TextTraceSink::onRequestFailed(double t, NodeId n, uint64_t rid, ServiceId s) {
    out_ << formatDouble(t) << " fail node=" << n << " req=" << rid << " svc=" << s
         << '\n';
}

void TextTraceSink::onRequestServed(double t, NodeId n, ServiceId s,
                                    NodeId consumer) {
    out_ << formatDouble(t) << " serve node=" << n << " svc=" << s
         << " for=" << consumer << '\n';
}

void TextTraceSink::onPiggyback(double t, NodeId n, ServiceId req, ServiceId extra,
                                double rho) {
    out_ << formatDouble(t) << " piggyback node=" << n << " req_svc=" << req
         << " svc=" << extra << " rho=" << formatDouble(rho) << '\n';
}

void TextTraceSink::onCacheStore(double t, NodeId n, ServiceId s, StoreOrigin via) {
    out_ << formatDouble(t) << " store node=" << n << " svc=" << s
         << " via=" << toString(via) << '\n';
}

const char* toString(StoreOrigin via) {
    switch (via) {
        case StoreOrigin::Advertisement: return "adv";
        case StoreOrigin::Reply: return "reply";
        case StoreOrigin::Piggyback: return "piggyback";
    }
    return "?";
}

void TextTraceSink::onCacheEvict(double t, NodeId n, ServiceId s) {
    out_ << formatDouble(t) << " evict node=" << n << " svc=" << s << '\n';
}

void TextTraceSink::onOntologyLoaded(double t, NodeId n, const std::string& uri) {
    out_ << formatDouble(t) << " ontology node=" << n << " uri=" << uri << '\n';
}

// ---------------------------------------------------------------------------
// Internal state

struct Simulation::Event {
    enum class Kind : uint8_t { Receive, Send, Request, AdvTick, Timeout, LegEnd, Sample };

    double time = 0.0;
    uint64_t seq = 0;
    Kind kind = Kind::Sample;
    NodeId actor = kNoNode;
    NodeId peer = kNoNode;  // Receive: sender. Send: unicast target, kNoNode = broadcast.
    std::shared_ptr<const Message> msg;
    WorkloadRequest req;
    uint64_t rid = 0;
    uint64_t token = 0;
};

struct Simulation::EventOrder {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;  // FIFO among simultaneous events
    }
};

struct Simulation::NodeState {
    NodeId id = 0;
    std::unique_ptr<NodeMobility> mobility;
    Leg leg;
    Point fixed_pos;  // explicit topology only
    Rng proto_rng;
    Rng mobility_rng;
    EnergyLedger energy;
    ServiceCache cache;
    RoutingTable routes;
    DedupCache dedup;
    LogDatabase log;
    MiningResults mined;
    uint64_t mined_revision = 0;
    bool mined_valid = false;
    OntologyStore store;
    uint32_t own_seq = 0;
    uint32_t next_broadcast_id = 1;
    std::map<ServiceId, uint64_t> last_broadcast;  // advertisement rotation order
    uint64_t broadcast_counter = 0;
    std::map<uint64_t, PendingRequest> pending;
    std::map<uint64_t, uint64_t> session_to_pending;
    std::map<uint64_t, ParkedRequest> parked;
    std::map<std::string, FetchState> fetches;

    NodeState(NodeId nid, const SimConfig& cfg)
        : id(nid),
          proto_rng(Rng::forStream(cfg.seed, "proto", nid)),
          mobility_rng(Rng::forStream(cfg.seed, "mobility", nid)),
          energy(cfg.power, 0.0),
          cache(cfg.cache_size),
          routes(cfg.route_lifetime),
          dedup(cfg.dedup_cache),
          log(cfg.log_capacity, cfg.zeta) {}
};

// ---------------------------------------------------------------------------
// Construction and configuration

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)) { validateConfig(cfg_); }

Simulation::~Simulation() { delete queue_; }

void Simulation::setExplicitTopology(ExplicitTopology topo) {
    if (ran_) throw std::logic_error("setExplicitTopology after run");
    for (auto [a, b] : topo.links) {
        if (a >= cfg_.node_count || b >= cfg_.node_count)
            throw std::invalid_argument("topology link names an unknown node");
        if (a == b) throw std::invalid_argument("topology link loops onto one node");
    }
    topo_ = std::move(topo);
}

void Simulation::setManualWorkload(std::vector<WorkloadRequest> requests) {
    if (ran_) throw std::logic_error("setManualWorkload after run");
    for (const auto& wr : requests) {
        if (wr.requester >= cfg_.node_count)
            throw std::invalid_argument("workload names an unknown node");
        if (wr.target == 0 || wr.target > cfg_.service_count)
            throw std::invalid_argument("workload names an unknown service");
        if (wr.time < 0.0) throw std::invalid_argument("workload request before time 0");
    }
    manual_workload_ = std::move(requests);
}

void Simulation::setTraceSink(TraceSink* sink) {
    if (ran_) throw std::logic_error("setTraceSink after run");
    sink_ = sink;
}

void Simulation::setProviderOverride(std::vector<NodeId> providers) {
    if (ran_) throw std::logic_error("setProviderOverride after run");
    if (providers.size() != cfg_.service_count)
        throw std::invalid_argument("provider override needs one node per service");
    for (NodeId p : providers)
        if (p >= cfg_.node_count)
            throw std::invalid_argument("provider override names an unknown node");
    provider_override_ = std::move(providers);
}

const ServiceCache& Simulation::cacheOf(NodeId n) const { return nodes_.at(n)->cache; }
const RoutingTable& Simulation::routesOf(NodeId n) const { return nodes_.at(n)->routes; }
const OntologyStore& Simulation::ontologyOf(NodeId n) const { return nodes_.at(n)->store; }
const LogDatabase& Simulation::logOf(NodeId n) const { return nodes_.at(n)->log; }

// ---------------------------------------------------------------------------
// Setup

void Simulation::buildRegistry() {
    all_docs_.clear();
    all_docs_.push_back(coreTaxonomy());
    for (auto& doc : extensionTaxonomies()) all_docs_.push_back(std::move(doc));
    concept_doc_.clear();
    for (const auto& doc : all_docs_)
        for (const auto& edge : doc.concepts) concept_doc_.emplace(edge.child, doc.uri);

    // Concept pools for the registry: core concepts that parent nothing in
    // the core (the fetchable-document marker stays reserved), and every
    // extension concept.
    std::set<std::string> core_parents;
    const OntologyDocument& core = all_docs_.front();
    for (const auto& edge : core.concepts) core_parents.insert(edge.parent);
    std::vector<std::string> core_leaves;
    for (const auto& edge : core.concepts)
        if (!core_parents.count(edge.child) && edge.child != kOntologyConceptId)
            core_leaves.push_back(edge.child);
    std::vector<std::string> ext_leaves;
    for (size_t k = 1; k < all_docs_.size(); ++k)
        for (const auto& edge : all_docs_[k].concepts) ext_leaves.push_back(edge.child);

    bool semantic = cfg_.semantic != SemanticMode::Off;
    Rng placement = Rng::forStream(cfg_.seed, "placement");
    registry_.clear();
    registry_.reserve(cfg_.service_count);
    for (uint32_t i = 1; i <= cfg_.service_count; ++i) {
        ServiceTableEntry e;
        e.service_id = i;
        e.name = "svc" + std::to_string(i);
        NodeId drawn = placement.uniformU32(cfg_.node_count);
        e.provider = provider_override_ ? (*provider_override_)[i - 1] : drawn;
        e.input_interface = "in:" + e.name;
        e.output_interface = "out:" + e.name;
        if (semantic) {
            if (i % 4 == 0)
                e.concept_id = ext_leaves[(i / 4 - 1) % ext_leaves.size()];
            else
                e.concept_id = core_leaves[(i - 1) % core_leaves.size()];
            const std::string& uri = concept_doc_.at(e.concept_id);
            if (uri != kCoreTaxonomyUri) e.ontology_list = {uri};
        }
        double reliability = 0.5 + 0.005 * static_cast<double>((i * 7919u) % 101u);
        e.qos.attributes = {{"reliability", reliability}};
        registry_.push_back(std::move(e));
    }
}

void Simulation::seedOntologies() {
    for (const auto& reg : registry_) nodes_[reg.provider]->cache.insertLocal(reg);
    if (cfg_.semantic == SemanticMode::Off) return;

    for (auto& np : nodes_) np->store.loadDocument(all_docs_.front());
    if (cfg_.semantic == SemanticMode::Unified) {
        for (auto& np : nodes_)
            for (size_t k = 1; k < all_docs_.size(); ++k)
                np->store.loadDocument(all_docs_[k]);
        return;
    }

    // Multilevel: each extension document lives on two seed-drawn holders
    // plus every provider whose service is described by it. Holders offer
    // the document itself as a fetchable service.
    Rng placement = Rng::forStream(cfg_.seed, "placement", 1);
    for (size_t k = 1; k < all_docs_.size(); ++k) {
        const OntologyDocument& doc = all_docs_[k];
        std::set<NodeId> holders;
        holders.insert(placement.uniformU32(cfg_.node_count));
        holders.insert(placement.uniformU32(cfg_.node_count));
        for (const auto& reg : registry_)
            if (reg.ontology_list.size() == 1 && reg.ontology_list[0] == doc.uri)
                holders.insert(reg.provider);
        for (NodeId h : holders) {
            NodeState& n = *nodes_[h];
            n.store.loadDocument(doc);
            ServiceTableEntry synth;
            synth.service_id = kDocServiceBase + static_cast<ServiceId>(k);
            synth.name = doc.uri;
            synth.provider = h;
            synth.concept_id = kOntologyConceptId;
            n.cache.insertLocal(std::move(synth));
        }
    }
}

void Simulation::scheduleInitialEvents() {
    if (topo_) {
        adjacency_.assign(cfg_.node_count, {});
        for (auto [a, b] : topo_->links) {
            adjacency_[a].push_back(b);
            adjacency_[b].push_back(a);
        }
        for (auto& row : adjacency_) {
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
        }
        for (auto& np : nodes_) np->fixed_pos = Point{static_cast<double>(np->id), 0.0};
    } else {
        MobilityParams mp;
        switch (cfg_.mobility) {
            case MobilityKind::Static: mp.kind = MobilityParams::Kind::Stationary; break;
            case MobilityKind::RandomWaypoint:
                mp.kind = MobilityParams::Kind::RandomWaypoint;
                break;
            case MobilityKind::Street: mp.kind = MobilityParams::Kind::StreetGrid; break;
        }
        mp.width = cfg_.area_width;
        mp.height = cfg_.area_height;
        mp.speed_min = cfg_.speed_min;
        mp.speed_max = cfg_.speed_max;
        mp.grid = cfg_.street_grid;
        for (auto& np : nodes_) {
            np->mobility = makeMobility(mp);
            np->leg = np->mobility->start(0.0, np->mobility_rng);
            if (np->leg.end_time <= cfg_.sim_time) {
                Event ev;
                ev.kind = Event::Kind::LegEnd;
                ev.actor = np->id;
                schedule(np->leg.end_time, ev);
            }
        }
    }

    if (cfg_.advertise != AdvertiseMode::Off) {
        for (auto& np : nodes_) {
            Event ev;
            ev.kind = Event::Kind::AdvTick;
            ev.actor = np->id;
            schedule(np->proto_rng.uniformReal(0.0, cfg_.adv_period), ev);
        }
    }

    std::vector<WorkloadRequest> plan;
    if (manual_workload_) {
        plan = *manual_workload_;
    } else {
        const CorrelationMatrix* matrix = nullptr;
        if (cfg_.workload == WorkloadKind::Correlated) {
            Rng mrng = Rng::forStream(cfg_.seed, "matrix");
            workload_matrix_ =
                CorrelationMatrix::randomSymmetric(cfg_.service_count, cfg_.eta, mrng);
            matrix = &*workload_matrix_;
        } else if (cfg_.workload == WorkloadKind::YouTube) {
            workload_matrix_ = CorrelationMatrix::videoSharingFixture();
            matrix = &*workload_matrix_;
        }
        Rng wrng = Rng::forStream(cfg_.seed, "workload");
        plan = generateWorkload(cfg_, matrix, wrng).requests;
    }
    for (const auto& wr : plan) {
        Event ev;
        ev.kind = Event::Kind::Request;
        ev.actor = wr.requester;
        ev.req = wr;
        schedule(wr.time, ev);
    }

    if (cfg_.metrics_sample_interval > 0.0) {
        Event ev;
        ev.kind = Event::Kind::Sample;
        ev.actor = 0;
        schedule(cfg_.metrics_sample_interval, ev);
    }
}

// ---------------------------------------------------------------------------
// Run loop

RunMetrics Simulation::run() {
    if (ran_) throw std::logic_error("simulation ran already");
    ran_ = true;
    queue_ = new std::priority_queue<Event, std::vector<Event>, EventOrder>();

    nodes_.reserve(cfg_.node_count);
    for (NodeId i = 0; i < cfg_.node_count; ++i)
        nodes_.push_back(std::make_unique<NodeState>(i, cfg_));

    buildRegistry();
    seedOntologies();
    scheduleInitialEvents();

    while (!queue_->empty()) {
        Event ev = queue_->top();
        queue_->pop();
        if (ev.time > cfg_.sim_time) break;
        now_ = ev.time;
        NodeState& n = *nodes_[ev.actor];
        switch (ev.kind) {
            case Event::Kind::Request:
                issueRequest(ev.req, ev.time);
                break;
            case Event::Kind::Send:
                transmit(n, std::move(ev.msg), ev.peer, ev.time);
                break;
            case Event::Kind::Receive:
                onReceive(n, ev.peer, *ev.msg, ev.time);
                break;
            case Event::Kind::AdvTick:
                onAdvTick(n, ev.time);
                break;
            case Event::Kind::Timeout:
                onTimeout(n, ev.rid, ev.token, ev.time);
                break;
            case Event::Kind::LegEnd: {
                n.leg = n.mobility->next(ev.time, n.mobility_rng);
                if (n.leg.end_time <= cfg_.sim_time) {
                    Event next;
                    next.kind = Event::Kind::LegEnd;
                    next.actor = n.id;
                    schedule(n.leg.end_time, next);
                }
                break;
            }
            case Event::Kind::Sample: {
                SamplePoint sp;
                sp.time = ev.time;
                sp.requests_issued = metrics_.requests_issued;
                sp.requests_satisfied = metrics_.requests_satisfied;
                double total = 0.0;
                for (const auto& np : nodes_)
                    total += static_cast<double>(np->store.conceptCount());
                sp.mean_loaded_tuples = total / static_cast<double>(nodes_.size());
                metrics_.samples.push_back(sp);
                Event next;
                next.kind = Event::Kind::Sample;
                next.actor = 0;
                schedule(ev.time + cfg_.metrics_sample_interval, next);
                break;
            }
        }
    }

    finalize(metrics_);
    return metrics_;
}

void Simulation::schedule(double t, Event ev) {
    if (t > cfg_.sim_time) return;
    ev.time = t;
    ev.seq = next_event_seq_++;
    queue_->push(std::move(ev));
}

// ---------------------------------------------------------------------------
// Radio

Point Simulation::positionOf(const NodeState& n, double t) const {
    if (topo_) return n.fixed_pos;
    return n.leg.positionAt(t);
}

std::vector<NodeId> Simulation::receiversOf(const NodeState& sender, double t) const {
    if (topo_) return adjacency_[sender.id];
    std::vector<NodeId> out;
    Point sp = positionOf(sender, t);
    for (const auto& np : nodes_) {
        if (np->id == sender.id) continue;
        if (distanceBetween(sp, positionOf(*np, t)) <= cfg_.radio_range)
            out.push_back(np->id);
    }
    return out;
}

void Simulation::transmit(NodeState& sender, std::shared_ptr<const Message> msg,
                          NodeId unicast_to, double t) {
    size_t bytes = wireSize(*msg);
    double tx_dur = static_cast<double>(bytes) * 8.0 / cfg_.bitrate;
    sender.energy.noteTransmit(t, t + tx_dur);
    metrics_.transmissions++;
    metrics_.bytes_sent += bytes;
    switch (messageTypeOf(*msg)) {
        case MessageType::SADV: metrics_.sadv_sent++; break;
        case MessageType::SREQ: metrics_.sreq_sent++; break;
        case MessageType::SREP: metrics_.srep_sent++; break;
    }
    if (sink_) sink_->onTransmit(t, sender.id, *msg, bytes);

    Point sp = positionOf(sender, t);
    for (NodeId r : receiversOf(sender, t)) {
        NodeState& rn = *nodes_[r];
        double dist = topo_ ? cfg_.radio_range * 0.5
                            : distanceBetween(sp, positionOf(rn, t));
        double arrival = t + tx_dur + dist / kPropagationSpeed;
        rn.energy.noteReceive(t, arrival);
        if (unicast_to != kNoNode && unicast_to != r) continue;  // overhears only
        Event ev;
        ev.kind = Event::Kind::Receive;
        ev.actor = r;
        ev.peer = sender.id;
        ev.msg = msg;
        schedule(arrival, ev);
    }
}

// ---------------------------------------------------------------------------
// Shared helpers

double Simulation::inferDelay(const NodeState& n) const {
    return cfg_.semantic_delay_per_concept * static_cast<double>(n.store.conceptCount());
}

void Simulation::ensureMined(NodeState& n) {
    if (n.mined_valid && n.mined_revision == n.log.revision()) return;
    n.mined = mineFpGrowth(n.log.sessions(), cfg_.min_support, cfg_.epsilon);
    n.mined_revision = n.log.revision();
    n.mined_valid = true;
}

std::vector<OntologyRecord> Simulation::recordsFor(const NodeState&,
                                                   const std::string& concept_id,
                                                   bool with_document) const {
    std::vector<OntologyRecord> out;
    if (cfg_.semantic == SemanticMode::Off || concept_id.empty()) return out;
    auto it = concept_doc_.find(concept_id);
    if (it == concept_doc_.end()) return out;
    if (!with_document && it->second == kCoreTaxonomyUri) return out;  // held everywhere
    for (const auto& doc : all_docs_) {
        if (doc.uri != it->second) continue;
        out.push_back(recordFromDocument(doc, with_document));
        break;
    }
    return out;
}

RouteEntry Simulation::routeToProvider(NodeState& n, const ServiceTableEntry& e,
                                       double t, bool bump_own_seq) {
    RouteEntry r;
    r.destination = e.provider;
    if (e.locally_hosted || e.provider == n.id) {
        if (bump_own_seq) ++n.own_seq;
        r.sequence_number = n.own_seq;
        r.hop_count = 0;
        r.next_node = n.id;
        return r;
    }
    if (cfg_.protocol == RoutingProtocol::Aodv) {
        if (const RouteEntry* have = n.routes.find(e.provider, t)) {
            r.sequence_number = have->sequence_number;
            r.hop_count = have->hop_count;
            r.next_node = have->next_node;
            return r;
        }
    }
    r.sequence_number = 0;
    r.hop_count = kUnknownHops;
    r.next_node = kNoNode;
    return r;
}

void Simulation::loadAttachedDocuments(NodeState& n,
                                       const std::vector<OntologyRecord>& recs,
                                       double t) {
    for (const auto& rec : recs) {
        if (!rec.document) continue;
        if (n.store.loadDocument(*rec.document) && sink_)
            sink_->onOntologyLoaded(t, n.id, rec.document->uri);
    }
}

void Simulation::mergeIntoCache(NodeState& n, const ServiceTableEntry& e, double t,
                                StoreOrigin via) {
    if (e.provider == n.id) return;  // a node is authoritative for its own rows
    ServiceCache::MergeOutcome outcome = n.cache.merge(e, t);
    if (outcome.inserted) {
        if (via == StoreOrigin::Piggyback) metrics_.piggyback_entries_stored++;
        if (sink_) sink_->onCacheStore(t, n.id, e.service_id, via);
    }
    if (sink_)
        for (ServiceId victim : outcome.evicted) sink_->onCacheEvict(t, n.id, victim);
}

// ---------------------------------------------------------------------------
// Request lifecycle at the originator

void Simulation::issueRequest(const WorkloadRequest& wr, double t) {
    if (wr.target == 0 || wr.target > cfg_.service_count)
        throw std::invalid_argument("workload names an unknown service");
    NodeState& n = *nodes_[wr.requester];
    n.log.logRequest(wr.target, t, n.id);
    const ServiceTableEntry& reg = registry_[wr.target - 1];

    uint64_t rid = next_request_id_++;
    metrics_.requests_issued++;
    if (sink_) sink_->onRequestIssued(t, n.id, rid, wr.target);

    PendingRequest p;
    p.id = rid;
    p.target = wr.target;
    if (cfg_.semantic == SemanticMode::Off)
        p.wanted.name = reg.name;
    else
        p.wanted.concept_id = reg.concept_id;
    p.qos = reg.qos;
    p.issued_at = t;
    p.retries_left = cfg_.request_retries;
    n.pending.emplace(rid, std::move(p));
    localDecide(n, rid, t);
}

void Simulation::localDecide(NodeState& n, uint64_t rid, double t) {
    PendingRequest& p = n.pending.at(rid);
    double d = inferDelay(n);
    MatchDecision dec = matchService(n.store, n.cache.entries(), p.wanted, p.qos);
    switch (dec.kind) {
        case MatchDecision::Kind::Match:
            n.cache.touch(dec.entry->service_id, t);
            resolvePending(n, rid, true, t + d);
            break;
        case MatchDecision::Kind::NeedOntology: {
            p.fetch_failed = false;
            for (const auto& uri : dec.missing_uris)
                if (startFetch(n, uri, rid, std::nullopt, t + d)) p.fetch_wait++;
            if (p.fetch_wait == 0) goRemote(n, rid, t + d);
            break;
        }
        case MatchDecision::Kind::NoMatch:
            goRemote(n, rid, t + d);
            break;
    }
}

void Simulation::goRemote(NodeState& n, uint64_t rid, double t) {
    PendingRequest& p = n.pending.at(rid);
    if (p.session_id == 0) {
        p.session_id = next_session_id_++;
        n.session_to_pending[p.session_id] = rid;
    }

    SReqMessage m;
    m.message_id = next_message_id_++;
    m.session_id = p.session_id;
    m.requested = p.wanted;
    m.qos = p.qos;
    if (cfg_.semantic == SemanticMode::Multilevel)
        m.ontology_list = recordsFor(n, p.wanted.concept_id, false);
    else if (cfg_.semantic == SemanticMode::Unified)
        m.ontology_list = recordsFor(n, p.wanted.concept_id, true);
    m.ttl = static_cast<uint8_t>(cfg_.ttl);
    if (cfg_.protocol == RoutingProtocol::Aodv) {
        AodvHeaders h;
        h.originator = n.id;
        h.broadcast_id = n.next_broadcast_id++;
        h.originator_seq = ++n.own_seq;
        h.hop_count = 0;
        n.dedup.checkAndInsert(h.originator, h.broadcast_id);
        m.routing_headers = h;
    } else {
        DsrHeaders h;
        h.hops_traversed = {n.id};
        n.dedup.checkAndInsert(n.id, m.message_id);
        m.routing_headers = std::move(h);
    }

    Event send;
    send.kind = Event::Kind::Send;
    send.actor = n.id;
    send.peer = kNoNode;
    send.msg = std::make_shared<const Message>(std::move(m));
    schedule(t, send);

    p.timeout_token++;
    Event to;
    to.kind = Event::Kind::Timeout;
    to.actor = n.id;
    to.rid = rid;
    to.token = p.timeout_token;
    schedule(t + cfg_.request_timeout, to);
}

bool Simulation::startFetch(NodeState& n, const std::string& uri,
                            std::optional<uint64_t> user_waiter,
                            std::optional<uint64_t> parked_waiter, double t) {
    if (n.store.hasDocument(uri)) return false;
    auto it = n.fetches.find(uri);
    if (it == n.fetches.end()) {
        uint64_t frid = next_request_id_++;
        PendingRequest p;
        p.id = frid;
        p.is_fetch = true;
        p.wanted.name = uri;
        p.wanted.concept_id = kOntologyConceptId;
        p.fetch_uri = uri;
        p.issued_at = t;
        p.retries_left = cfg_.request_retries;
        n.pending.emplace(frid, std::move(p));
        FetchState fs;
        fs.fetch_request_id = frid;
        it = n.fetches.emplace(uri, std::move(fs)).first;
        metrics_.ontology_fetches++;
        goRemote(n, frid, t);
    }
    if (user_waiter) it->second.user_waiters.push_back(*user_waiter);
    if (parked_waiter) it->second.parked_waiters.push_back(*parked_waiter);
    return true;
}

void Simulation::finishFetch(NodeState& n, const std::string& uri, bool success,
                             double t) {
    auto fit = n.fetches.find(uri);
    if (fit == n.fetches.end()) return;
    FetchState fs = std::move(fit->second);
    n.fetches.erase(fit);

    auto pit = n.pending.find(fs.fetch_request_id);
    if (pit != n.pending.end()) {
        if (pit->second.session_id != 0) n.session_to_pending.erase(pit->second.session_id);
        n.pending.erase(pit);
    }

    for (uint64_t pid : fs.parked_waiters) {
        if (success)
            rematchParked(n, pid, t);
        else
            n.parked.erase(pid);
    }
    for (uint64_t rid : fs.user_waiters) {
        auto uit = n.pending.find(rid);
        if (uit == n.pending.end()) continue;
        PendingRequest& p = uit->second;
        if (p.fetch_wait > 0) p.fetch_wait--;
        if (!success) p.fetch_failed = true;
        if (p.fetch_wait == 0) {
            if (p.fetch_failed)
                goRemote(n, rid, t);  // press on without the missing documents
            else
                localDecide(n, rid, t);
        }
    }
}

void Simulation::resolvePending(NodeState& n, uint64_t rid, bool local, double t) {
    auto it = n.pending.find(rid);
    if (it == n.pending.end()) return;
    PendingRequest p = std::move(it->second);
    n.pending.erase(it);
    if (p.session_id != 0) n.session_to_pending.erase(p.session_id);

    metrics_.requests_satisfied++;
    if (local)
        metrics_.local_hits++;
    else
        metrics_.remote_hits++;
    double latency = t - p.issued_at;
    latency_sum_ += latency;
    if (sink_) sink_->onRequestResolved(t, n.id, p.id, p.target, local, latency);
}

void Simulation::failPending(NodeState& n, uint64_t rid, double t) {
    auto it = n.pending.find(rid);
    if (it == n.pending.end()) return;
    PendingRequest p = std::move(it->second);
    n.pending.erase(it);
    if (p.session_id != 0) n.session_to_pending.erase(p.session_id);
    metrics_.requests_failed++;
    if (sink_) sink_->onRequestFailed(t, n.id, p.id, p.target);
}

void Simulation::onTimeout(NodeState& n, uint64_t rid, uint64_t token, double t) {
    auto it = n.pending.find(rid);
    if (it == n.pending.end() || it->second.timeout_token != token) return;
    PendingRequest& p = it->second;
    if (p.retries_left > 0) {
        p.retries_left--;
        goRemote(n, rid, t);
        return;
    }
    if (p.is_fetch)
        finishFetch(n, p.fetch_uri, false, t);
    else
        failPending(n, rid, t);
}

// ---------------------------------------------------------------------------
// Receive paths

void Simulation::onReceive(NodeState& n, NodeId from, const Message& msg, double t) {
    if (sink_) sink_->onDeliver(t, from, n.id, msg);
    if (const auto* adv = std::get_if<SAdvMessage>(&msg))
        onAdvertisement(n, *adv, from, t);
    else if (const auto* req = std::get_if<SReqMessage>(&msg))
        onRequestMsg(n, *req, from, t);
    else
        onReplyMsg(n, std::get<SRepMessage>(msg), from, t);
}

void Simulation::onAdvertisement(NodeState& n, const SAdvMessage& m, NodeId from,
                                 double t) {
    for (const AdvEntry& ae : m.entries) {
        loadAttachedDocuments(n, ae.ontology, t);
        mergeIntoCache(n, ae.service, t, StoreOrigin::Advertisement);
        if (cfg_.protocol == RoutingProtocol::Aodv && ae.route.hop_count != kUnknownHops &&
            ae.route.destination != n.id) {
            RouteEntry r;
            r.destination = ae.route.destination;
            r.sequence_number = ae.route.sequence_number;
            r.hop_count = static_cast<uint16_t>(ae.route.hop_count + 1);
            r.next_node = from;
            n.routes.update(r, t);
        }
    }
}

void Simulation::onRequestMsg(NodeState& n, const SReqMessage& m, NodeId from,
                              double t) {
    uint64_t dedup_hi = 0;
    uint64_t dedup_lo = 0;
    if (const auto* a = std::get_if<AodvHeaders>(&m.routing_headers)) {
        if (a->originator == n.id) return;  // own flood came back
        dedup_hi = a->originator;
        dedup_lo = a->broadcast_id;
    } else {
        const auto& hops = std::get<DsrHeaders>(m.routing_headers).hops_traversed;
        if (hops.empty() || hops.front() == n.id) return;
        dedup_hi = hops.front();
        dedup_lo = m.message_id;
    }
    if (n.dedup.checkAndInsert(dedup_hi, dedup_lo)) return;

    if (const auto* a = std::get_if<AodvHeaders>(&m.routing_headers)) {
        RouteEntry rev;
        rev.destination = a->originator;
        rev.sequence_number = a->originator_seq;
        rev.hop_count = static_cast<uint16_t>(a->hop_count + 1);
        rev.next_node = from;
        n.routes.update(rev, t);
    }

    loadAttachedDocuments(n, m.ontology_list, t);

    // Document requests match only against offered documents; everything
    // else would drag unrelated unresolved concepts into the decision.
    bool fetch_req = m.requested.concept_id == kOntologyConceptId;
    std::vector<const ServiceTableEntry*> candidates = n.cache.entries();
    if (fetch_req) {
        std::vector<const ServiceTableEntry*> docs;
        for (const auto* e : candidates)
            if (e->concept_id == kOntologyConceptId) docs.push_back(e);
        candidates.swap(docs);
    }
    MatchDecision dec = matchService(n.store, candidates, m.requested, m.qos);
    if (dec.kind == MatchDecision::Kind::Match && fetch_req &&
        !n.store.hasDocument(dec.entry->name))
        dec.kind = MatchDecision::Kind::NoMatch;  // knows of it, cannot serve it

    switch (dec.kind) {
        case MatchDecision::Kind::Match:
            n.cache.touch(dec.entry->service_id, t);
            replyToRequest(n, m, *dec.entry, t);
            break;
        case MatchDecision::Kind::NoMatch:
            forwardRequest(n, m, t);
            break;
        case MatchDecision::Kind::NeedOntology: {
            // Keep the flood moving, then try to settle the comparison.
            forwardRequest(n, m, t);
            uint64_t pid = next_parked_id_++;
            ParkedRequest pk;
            pk.msg = m;
            pk.from = from;
            pk.parked_at = t;
            n.parked.emplace(pid, std::move(pk));
            bool any = false;
            double d = inferDelay(n);
            for (const auto& uri : dec.missing_uris)
                if (startFetch(n, uri, std::nullopt, pid, t + d)) any = true;
            if (!any) n.parked.erase(pid);
            break;
        }
    }
}

void Simulation::replyToRequest(NodeState& n, const SReqMessage& m,
                                const ServiceTableEntry& matched, double t) {
    bool fetch_req = m.requested.concept_id == kOntologyConceptId;
    NodeId consumer;
    if (const auto* a = std::get_if<AodvHeaders>(&m.routing_headers))
        consumer = a->originator;
    else
        consumer = std::get<DsrHeaders>(m.routing_headers).hops_traversed.front();

    // Answered requests count as demand seen by this node, so they feed its
    // log alongside its own lookups, keyed by the asking consumer so that
    // unrelated consumers stay in separate sessions. Logged before mining so
    // the correlations used for the reply already include the request being
    // answered.
    if (!fetch_req) {
        n.log.logRequest(matched.service_id, t, consumer);
        if (sink_) sink_->onRequestServed(t, n.id, matched.service_id, consumer);
    }

    SRepMessage rep;
    rep.message_id = next_message_id_++;
    rep.session_id = m.session_id;
    rep.requested_service = cleaned(matched);
    rep.requested_route = routeToProvider(n, matched, t, matched.locally_hosted);
    if (fetch_req) {
        if (const OntologyDocument* doc = n.store.document(matched.name))
            rep.ontology_list.push_back(recordFromDocument(*doc, true));
    } else {
        rep.ontology_list =
            recordsFor(n, matched.concept_id, cfg_.semantic == SemanticMode::Unified);
    }

    if (cfg_.piggyback && !fetch_req) {
        ensureMined(n);
        for (ServiceId j : n.mined.getRelated(matched.service_id)) {
            if (j == matched.service_id) continue;
            const ServiceTableEntry* extra = n.cache.find(j);
            if (!extra) continue;
            CorrelatedEntry ce;
            ce.service = cleaned(*extra);
            ce.route = routeToProvider(n, *extra, t, false);
            ce.ontology =
                recordsFor(n, extra->concept_id, cfg_.semantic == SemanticMode::Unified);
            rep.correlated.push_back(std::move(ce));
            metrics_.piggyback_entries_sent++;
            if (sink_)
                sink_->onPiggyback(t, n.id, matched.service_id, j,
                                   n.mined.correlation(matched.service_id, j));
        }
    }

    NodeId next = kNoNode;
    if (const auto* a = std::get_if<AodvHeaders>(&m.routing_headers)) {
        const RouteEntry* rev = n.routes.find(a->originator, t);
        if (!rev) return;  // reverse route expired underneath us
        n.routes.markUse(a->originator, t);
        AodvHeaders h = *a;
        h.hop_count = 0;
        rep.routing_headers = h;
        next = rev->next_node;
    } else {
        const auto& hops = std::get<DsrHeaders>(m.routing_headers).hops_traversed;
        if (hops.empty()) return;
        rep.routing_headers = DsrHeaders{hops};
        next = hops.back();
    }

    Event ev;
    ev.kind = Event::Kind::Send;
    ev.actor = n.id;
    ev.peer = next;
    ev.msg = std::make_shared<const Message>(std::move(rep));
    schedule(t + inferDelay(n), ev);
}

void Simulation::forwardRequest(NodeState& n, const SReqMessage& m, double t) {
    if (m.ttl == 0) return;
    SReqMessage fwd = m;
    fwd.ttl--;
    if (auto* a = std::get_if<AodvHeaders>(&fwd.routing_headers))
        a->hop_count++;
    else
        std::get<DsrHeaders>(fwd.routing_headers).hops_traversed.push_back(n.id);

    Event ev;
    ev.kind = Event::Kind::Send;
    ev.actor = n.id;
    ev.peer = kNoNode;
    ev.msg = std::make_shared<const Message>(std::move(fwd));
    schedule(t + inferDelay(n), ev);
}

void Simulation::rematchParked(NodeState& n, uint64_t parked_id, double t) {
    auto it = n.parked.find(parked_id);
    if (it == n.parked.end()) return;
    const SReqMessage& m = it->second.msg;
    bool fetch_req = m.requested.concept_id == kOntologyConceptId;
    std::vector<const ServiceTableEntry*> candidates = n.cache.entries();
    if (fetch_req) {
        std::vector<const ServiceTableEntry*> docs;
        for (const auto* e : candidates)
            if (e->concept_id == kOntologyConceptId) docs.push_back(e);
        candidates.swap(docs);
    }
    MatchDecision dec = matchService(n.store, candidates, m.requested, m.qos);
    if (dec.kind == MatchDecision::Kind::Match && fetch_req &&
        !n.store.hasDocument(dec.entry->name))
        dec.kind = MatchDecision::Kind::NoMatch;
    switch (dec.kind) {
        case MatchDecision::Kind::Match:
            n.cache.touch(dec.entry->service_id, t);
            replyToRequest(n, m, *dec.entry, t);
            n.parked.erase(it);
            break;
        case MatchDecision::Kind::NeedOntology: {
            bool any = false;
            for (const auto& uri : dec.missing_uris)
                if (startFetch(n, uri, std::nullopt, parked_id, t)) any = true;
            if (!any) n.parked.erase(it);
            break;
        }
        case MatchDecision::Kind::NoMatch:
            n.parked.erase(it);  // the flood already went on without us
            break;
    }
}

void Simulation::onReplyMsg(NodeState& n, const SRepMessage& m, NodeId from, double t) {
    if (cfg_.protocol == RoutingProtocol::Aodv) {
        auto install = [&](const RouteEntry& r) {
            if (r.hop_count == kUnknownHops || r.destination == n.id) return;
            RouteEntry fwd;
            fwd.destination = r.destination;
            fwd.sequence_number = r.sequence_number;
            fwd.hop_count = static_cast<uint16_t>(r.hop_count + 1);
            fwd.next_node = from;
            n.routes.update(fwd, t);
        };
        install(m.requested_route);
        for (const auto& ce : m.correlated) install(ce.route);
    }

    bool consume = false;
    if (const auto* a = std::get_if<AodvHeaders>(&m.routing_headers)) {
        consume = a->originator == n.id;
    } else {
        const auto& hops = std::get<DsrHeaders>(m.routing_headers).hops_traversed;
        if (hops.empty() || hops.back() != n.id) return;  // stray unicast
        consume = hops.size() == 1;
    }

    // Every node on the return path learns the answered service. The
    // correlated extras anticipate the originator's next requests, so they
    // are ingested only by the originator, and only from the reply that
    // settles the request; relays and late duplicates would churn caches
    // with entries picked for someone else's session or already delivered.
    loadAttachedDocuments(n, m.ontology_list, t);
    mergeIntoCache(n, m.requested_service, t, StoreOrigin::Reply);

    if (consume) {
        auto sit = n.session_to_pending.find(m.session_id);
        if (sit == n.session_to_pending.end()) return;  // late duplicate
        uint64_t rid = sit->second;
        auto pit = n.pending.find(rid);
        if (pit == n.pending.end()) {
            n.session_to_pending.erase(sit);
            return;
        }
        if (pit->second.is_fetch) {
            if (n.store.hasDocument(pit->second.fetch_uri))
                finishFetch(n, pit->second.fetch_uri, true, t);
            // else: this copy lacked the document; keep waiting
        } else {
            for (const auto& ce : m.correlated) {
                loadAttachedDocuments(n, ce.ontology, t);
                mergeIntoCache(n, ce.service, t, StoreOrigin::Piggyback);
            }
            n.cache.touch(m.requested_service.service_id, t);
            resolvePending(n, rid, false, t);
        }
        return;
    }

    // Relay toward the originator.
    SRepMessage fwd = m;
    NodeId next = kNoNode;
    if (auto* a = std::get_if<AodvHeaders>(&fwd.routing_headers)) {
        const RouteEntry* rev = n.routes.find(a->originator, t);
        if (!rev) return;  // reverse route lost; the reply dies here
        n.routes.markUse(a->originator, t);
        a->hop_count++;
        auto restamp = [](RouteEntry& r) {
            if (r.hop_count != kUnknownHops) r.hop_count++;
        };
        restamp(fwd.requested_route);
        for (auto& ce : fwd.correlated) restamp(ce.route);
        next = rev->next_node;
    } else {
        auto& hops = std::get<DsrHeaders>(fwd.routing_headers).hops_traversed;
        hops.pop_back();
        if (hops.empty()) return;
        next = hops.back();
    }

    Event ev;
    ev.kind = Event::Kind::Send;
    ev.actor = n.id;
    ev.peer = next;
    ev.msg = std::make_shared<const Message>(std::move(fwd));
    schedule(t, ev);
}

// ---------------------------------------------------------------------------
// Advertisements

void Simulation::onAdvTick(NodeState& n, double t) {
    std::vector<const ServiceTableEntry*> pool = n.cache.entries();
    if (!pool.empty()) {
        size_t want = std::min<size_t>(cfg_.adv_length, pool.size());
        std::vector<const ServiceTableEntry*> picks;

        // Both modes rotate from the service that has gone unannounced the
        // longest, so successive ticks cover the whole table instead of
        // starving entries.
        auto stampOf = [&](ServiceId id) -> uint64_t {
            auto it = n.last_broadcast.find(id);
            return it == n.last_broadcast.end() ? 0 : it->second;
        };
        std::sort(pool.begin(), pool.end(),
                  [&](const ServiceTableEntry* a, const ServiceTableEntry* b) {
                      uint64_t sa = stampOf(a->service_id);
                      uint64_t sb = stampOf(b->service_id);
                      if (sa != sb) return sa < sb;
                      return a->service_id < b->service_id;
                  });

        if (cfg_.advertise == AdvertiseMode::Correlated) {
            const ServiceTableEntry* lead = pool.front();
            ensureMined(n);
            picks.push_back(lead);
            for (ServiceId j : n.mined.getRelated(lead->service_id)) {
                if (picks.size() >= want) break;
                if (j == lead->service_id) continue;
                if (const ServiceTableEntry* e = n.cache.find(j)) picks.push_back(e);
            }
        } else {
            picks.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(want));
        }

        ++n.broadcast_counter;
        for (const ServiceTableEntry* e : picks)
            n.last_broadcast[e->service_id] = n.broadcast_counter;

        SAdvMessage adv;
        adv.message_id = next_message_id_++;
        for (const ServiceTableEntry* e : picks) {
            AdvEntry ae;
            ae.service = cleaned(*e);
            ae.ontology =
                recordsFor(n, e->concept_id, cfg_.semantic == SemanticMode::Unified);
            ae.route = routeToProvider(n, *e, t, false);
            adv.entries.push_back(std::move(ae));
        }
        transmit(n, std::make_shared<const Message>(std::move(adv)), kNoNode, t);
    }

    Event next;
    next.kind = Event::Kind::AdvTick;
    next.actor = n.id;
    schedule(t + cfg_.adv_period, next);
}

// ---------------------------------------------------------------------------
// Wrap-up

void Simulation::finalize(RunMetrics& out) {
    for (auto& np : nodes_) {
        std::vector<uint64_t> open;
        for (const auto& [rid, p] : np->pending)
            if (!p.is_fetch) open.push_back(rid);
        for (uint64_t rid : open) failPending(*np, rid, cfg_.sim_time);
    }

    double worst = 0.0;
    for (auto& np : nodes_) {
        np->energy.accrueTo(cfg_.sim_time);
        out.energy_transmit += np->energy.energyIn(EnergyMode::Transmit);
        out.energy_receive += np->energy.energyIn(EnergyMode::Receive);
        out.energy_idle += np->energy.energyIn(EnergyMode::Idle);
        out.energy_sleep += np->energy.energyIn(EnergyMode::Sleep);
        out.energy_sense += np->energy.energyIn(EnergyMode::Sense);
        out.energy_total += np->energy.totalEnergy();
        worst = std::max(worst, std::abs(np->energy.totalDuration() - cfg_.sim_time));
    }
    out.max_duration_error = worst;

    out.no_requests = out.requests_issued == 0;
    out.hit_ratio = out.no_requests
                        ? 0.0
                        : static_cast<double>(out.local_hits) /
                              static_cast<double>(out.requests_issued);
    out.success_ratio = out.no_requests
                            ? 0.0
                            : static_cast<double>(out.requests_satisfied) /
                                  static_cast<double>(out.requests_issued);
    out.mean_latency = out.requests_satisfied == 0
                           ? 0.0
                           : latency_sum_ / static_cast<double>(out.requests_satisfied);

    if (cfg_.semantic != SemanticMode::Off && !nodes_.empty()) {
        size_t core_edges = all_docs_.front().concepts.size();
        uint64_t ext_total = 0;
        for (size_t k = 1; k < all_docs_.size(); ++k)
            ext_total += all_docs_[k].concepts.size();
        out.total_ext_tuples = ext_total;
        double sum = 0.0;
        for (const auto& np : nodes_) {
            size_t have = np->store.conceptCount();
            sum += static_cast<double>(have > core_edges ? have - core_edges : 0);
        }
        out.mean_ext_tuples_final = sum / static_cast<double>(nodes_.size());
    }
}

}  // namespace handy
