// Shared domain types: services, QoS, routing and ontology table rows.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace handy {

using NodeId = uint32_t;
using ServiceId = uint32_t;

inline constexpr NodeId kNoNode = 0xffffffffu;
// Service ids are 1-based; 0 is reserved for synthetic entries such as
// ontology-document requests.
inline constexpr ServiceId kOntologyServiceId = 0;

struct QoSAttribute {
    std::string name;
    double value = 0.0;  // normalized so that higher is always better

    bool operator==(const QoSAttribute&) const = default;
};

struct QoSSpec {
    std::vector<QoSAttribute> attributes;

    const double* find(const std::string& name) const {
        for (const auto& a : attributes)
            if (a.name == name) return &a.value;
        return nullptr;
    }

    bool operator==(const QoSSpec&) const = default;
};

// True iff every attribute demanded by `requested` is present in `offered`
// with a value at least as large. Attributes absent from `requested` are
// unconstrained; an attribute missing from `offered` fails the demand.
bool qosSatisfies(const QoSSpec& requested, const QoSSpec& offered);

struct ServiceDescription {
    std::string name;
    std::string concept_id;  // taxonomy node; empty means syntactic-only
    std::string input_interface;
    std::string output_interface;

    bool operator==(const ServiceDescription&) const = default;
};

struct ServiceTableEntry {
    ServiceId service_id = 0;
    std::string name;
    NodeId provider = kNoNode;
    std::string concept_id;
    std::string input_interface;
    std::string output_interface;
    std::vector<std::string> ontology_list;  // URIs of documents needed
    QoSSpec qos;

    // Cache bookkeeping; never travels on the wire and is excluded from
    // value equality.
    double last_used_tick = 0.0;
    uint64_t touch_seq = 0;
    bool locally_hosted = false;

    bool operator==(const ServiceTableEntry& o) const {
        return service_id == o.service_id && name == o.name &&
               provider == o.provider && concept_id == o.concept_id &&
               input_interface == o.input_interface &&
               output_interface == o.output_interface &&
               ontology_list == o.ontology_list && qos == o.qos;
    }
};

enum class RouteStatus : uint8_t { Valid = 0, Invalid = 1 };

// Hop count carried by a message when the sender has no distance estimate.
inline constexpr uint16_t kUnknownHops = 0xffff;

struct RouteEntry {
    uint32_t sequence_number = 0;
    NodeId destination = kNoNode;
    uint16_t hop_count = 0;
    NodeId next_node = kNoNode;
    RouteStatus status = RouteStatus::Valid;
    std::vector<NodeId> precursors;  // kept sorted

    bool operator==(const RouteEntry&) const = default;
};

struct ConceptEdge {
    std::string child;
    std::string parent;

    bool operator==(const ConceptEdge&) const = default;
};

// A taxonomy fragment: a set of child -> parent edges. Parents are either
// local to the document or defined along the base chain ending at the core.
struct OntologyDocument {
    std::string name;
    std::string uri;
    std::string base_uri;  // empty for the core document
    std::string author;
    std::vector<ConceptEdge> concepts;

    bool operator==(const OntologyDocument&) const = default;
};

// Ontology table row: metadata always, document only when the node holds it.
struct OntologyRecord {
    std::string name;
    std::string uri;
    std::string author;
    std::string base_ontology;
    std::optional<OntologyDocument> document;

    bool operator==(const OntologyRecord&) const = default;
};

}  // namespace handy
