// The three HANDY message types and their routing headers.
#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "handy/types.hpp"

namespace handy {

enum class MessageType : uint8_t { SADV = 1, SREQ = 2, SREP = 3 };

// AODV-style headers: the originator plus a per-originator broadcast id for
// duplicate suppression, the originator's sequence number for reverse-route
// freshness, and the hop count accumulated so far.
struct AodvHeaders {
    NodeId originator = kNoNode;
    uint32_t broadcast_id = 0;
    uint32_t originator_seq = 0;
    uint16_t hop_count = 0;

    bool operator==(const AodvHeaders&) const = default;
};

// DSR-style headers: the source route accumulated hop by hop. Entry 0 is the
// originator; the list must stay duplicate-free.
struct DsrHeaders {
    std::vector<NodeId> hops_traversed;

    bool operator==(const DsrHeaders&) const = default;
};

using RoutingHeaders = std::variant<AodvHeaders, DsrHeaders>;

struct AdvEntry {
    ServiceTableEntry service;
    std::vector<OntologyRecord> ontology;
    RouteEntry route;

    bool operator==(const AdvEntry&) const = default;
};

// Periodic service advertisement, single-hop broadcast. Must carry at least
// one entry.
struct SAdvMessage {
    uint64_t message_id = 0;
    std::vector<AdvEntry> entries;

    bool operator==(const SAdvMessage&) const = default;
};

struct SReqMessage {
    uint64_t message_id = 0;
    uint64_t session_id = 0;
    ServiceDescription requested;
    QoSSpec qos;
    std::vector<OntologyRecord> ontology_list;
    RoutingHeaders routing_headers;
    uint8_t ttl = 0;

    bool operator==(const SReqMessage&) const = default;
};

struct CorrelatedEntry {
    ServiceTableEntry service;
    RouteEntry route;
    std::vector<OntologyRecord> ontology;

    bool operator==(const CorrelatedEntry&) const = default;
};

struct SRepMessage {
    uint64_t message_id = 0;
    uint64_t session_id = 0;
    ServiceTableEntry requested_service;
    RouteEntry requested_route;  // replying/forwarding node's route to the provider
    std::vector<OntologyRecord> ontology_list;
    RoutingHeaders routing_headers;
    std::vector<CorrelatedEntry> correlated;

    bool operator==(const SRepMessage&) const = default;
};

using Message = std::variant<SAdvMessage, SReqMessage, SRepMessage>;

inline MessageType messageTypeOf(const Message& m) {
    if (std::holds_alternative<SAdvMessage>(m)) return MessageType::SADV;
    if (std::holds_alternative<SReqMessage>(m)) return MessageType::SREQ;
    return MessageType::SREP;
}

}  // namespace handy
